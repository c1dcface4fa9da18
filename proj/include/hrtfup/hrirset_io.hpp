#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "hrtfup/types.hpp"

namespace hrtfup::io {

// Shared container behind the HRIRSET1 / HRTFMAG1 formats: one JSON header
// line terminated by '\n', then a raw little-endian float32 payload.
// For HRIRSET1 the payload is [position][ear][tap] and `taps` is the IR
// length; for HRTFMAG1 it is [position][ear][bin] and `taps` is bins per ear.
struct ContainerHeader {
  std::string magic;
  std::string subject_id;
  int sample_rate_hz = 0;
  int num_positions = 0;
  int taps = 0;
  std::vector<SphericalDirection> positions;
};

void write_container(const std::filesystem::path& path,
                     const ContainerHeader& header,
                     std::span<const float> payload);

// Validates magic, header consistency and payload element count
// (num_positions * 2 * taps).
ContainerHeader read_container(const std::filesystem::path& path,
                               const std::string& expected_magic,
                               std::vector<float>& payload);

}  // namespace hrtfup::io
