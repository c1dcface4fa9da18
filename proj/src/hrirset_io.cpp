#include "hrtfup/hrirset_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "hrtfup/error.hpp"

static_assert(std::endian::native == std::endian::little,
              "payload I/O assumes a little-endian host");

namespace hrtfup::io {

void write_container(const std::filesystem::path& path,
                     const ContainerHeader& header,
                     std::span<const float> payload) {
  if (header.num_positions <= 0) {
    throw_data("container: empty positions list");
  }
  if (static_cast<int>(header.positions.size()) != header.num_positions) {
    throw_data("container: positions/num_positions mismatch");
  }
  const std::size_t expected = static_cast<std::size_t>(header.num_positions) *
                               2 * static_cast<std::size_t>(header.taps);
  if (payload.size() != expected) {
    throw_data("container: payload size mismatch");
  }

  nlohmann::ordered_json j;
  j["magic"] = header.magic;
  j["subject_id"] = header.subject_id;
  j["sample_rate_hz"] = header.sample_rate_hz;
  j["num_positions"] = header.num_positions;
  j["taps"] = header.taps;
  nlohmann::ordered_json pos = nlohmann::ordered_json::array();
  for (const SphericalDirection& d : header.positions) {
    pos.push_back({d.azimuth_rad, d.elevation_rad, d.radius_m});
  }
  j["positions"] = std::move(pos);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_data("container: cannot open for writing: " + path.string());
  out << j.dump() << '\n';
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size() * sizeof(float)));
  if (!out) throw_data("container: write failed: " + path.string());
}

ContainerHeader read_container(const std::filesystem::path& path,
                               const std::string& expected_magic,
                               std::vector<float>& payload) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_data("container: cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line)) {
    throw_data("container: missing header line: " + path.string());
  }

  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw_data("container: malformed header: " + path.string());
  }

  ContainerHeader h;
  try {
    h.magic = j.at("magic").get<std::string>();
    h.subject_id = j.at("subject_id").get<std::string>();
    h.sample_rate_hz = j.at("sample_rate_hz").get<int>();
    h.num_positions = j.at("num_positions").get<int>();
    h.taps = j.at("taps").get<int>();
    for (const auto& p : j.at("positions")) {
      if (!p.is_array() || p.size() != 3) {
        throw_data("container: malformed position entry");
      }
      h.positions.push_back(make_direction(p[0].get<double>(),
                                           p[1].get<double>(),
                                           p[2].get<double>()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw_data("container: malformed header (" + std::string(e.what()) +
               "): " + path.string());
  }
  if (h.magic != expected_magic) {
    throw_data("container: expected magic " + expected_magic + ", found " +
               h.magic + ": " + path.string());
  }
  if (h.num_positions <= 0 ||
      static_cast<int>(h.positions.size()) != h.num_positions) {
    throw_data("container: positions/num_positions mismatch: " +
               path.string());
  }
  if (h.taps <= 0) throw_data("container: non-positive taps: " + path.string());
  if (h.sample_rate_hz <= 0) {
    throw_data("container: non-positive sample rate: " + path.string());
  }

  const std::size_t expected = static_cast<std::size_t>(h.num_positions) * 2 *
                               static_cast<std::size_t>(h.taps);
  payload.resize(expected);
  in.read(reinterpret_cast<char*>(payload.data()),
          static_cast<std::streamsize>(expected * sizeof(float)));
  if (in.gcount() !=
      static_cast<std::streamsize>(expected * sizeof(float))) {
    throw_data("container: payload size mismatch: " + path.string());
  }
  char extra;
  if (in.read(&extra, 1)) {
    throw_data("container: payload size mismatch (trailing bytes): " +
               path.string());
  }
  return h;
}

}  // namespace hrtfup::io
