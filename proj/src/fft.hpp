#pragma once

#include <complex>
#include <span>

namespace wavelab::detail {

// Unnormalized DFT, out[j] = sum_i in[i] exp(-2 pi i ij/n).
void fft_forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);
// Unnormalized inverse, out[i] = sum_j in[j] exp(+2 pi i ij/n).
void fft_inverse(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);

}  // namespace wavelab::detail
