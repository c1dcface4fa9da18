#include "hrtfup/fft.hpp"

#include <cmath>
#include <numbers>

#include "hrtfup/error.hpp"

namespace hrtfup {

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

namespace {

void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang =
        (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& x : a) x *= scale;
  }
}

void dft_naive(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  std::vector<std::complex<double>> out(n);
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
      const double ang = sign * 2.0 * std::numbers::pi *
                         static_cast<double>(k * t % n) /
                         static_cast<double>(n);
      acc += a[t] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = inverse ? acc / static_cast<double>(n) : acc;
  }
  a = std::move(out);
}

}  // namespace

void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
  if (a.empty()) throw_invalid("fft: empty input");
  if (is_power_of_two(a.size())) {
    fft_pow2(a, inverse);
  } else {
    dft_naive(a, inverse);
  }
}

namespace {
template <class T>
std::vector<std::complex<double>> fft_real_impl(std::span<const T> x,
                                                std::size_t n) {
  if (n < x.size()) throw_invalid("fft: transform size smaller than input");
  std::vector<std::complex<double>> a(n, {0.0, 0.0});
  for (std::size_t i = 0; i < x.size(); ++i) {
    a[i] = std::complex<double>(static_cast<double>(x[i]), 0.0);
  }
  fft_inplace(a, false);
  return a;
}
}  // namespace

std::vector<std::complex<double>> fft_real(std::span<const double> x,
                                           std::size_t n) {
  return fft_real_impl(x, n);
}

std::vector<std::complex<double>> fft_real(std::span<const float> x,
                                           std::size_t n) {
  return fft_real_impl(x, n);
}

}  // namespace hrtfup
