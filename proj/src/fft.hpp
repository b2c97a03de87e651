#pragma once

#include <complex>
#include <cstddef>

namespace pdhs::detail {

// Unnormalized transforms: forward computes sum_j x_j e^{-2 pi i jk/n},
// backward the same with +i. `in` and `out` may alias.
void fft_forward(const std::complex<double>* in, std::complex<double>* out,
                 std::size_t n);
void fft_backward(const std::complex<double>* in, std::complex<double>* out,
                  std::size_t n);

}  // namespace pdhs::detail
