#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace hrtfup {

bool is_power_of_two(std::size_t n);

// In-place transform. Radix-2 for power-of-two sizes, direct O(n^2) DFT
// otherwise (small even sizes only show up in tests). The inverse includes
// the 1/n scaling.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse);

// Forward transform of a real sequence zero-padded to n.
std::vector<std::complex<double>> fft_real(std::span<const double> x,
                                           std::size_t n);
std::vector<std::complex<double>> fft_real(std::span<const float> x,
                                           std::size_t n);

}  // namespace hrtfup
