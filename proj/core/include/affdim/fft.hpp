#pragma once

#include <complex>
#include <vector>

namespace affdim {

// In-place radix-2 complex FFT; size must be a power of two. Unnormalized
// forward transform; the inverse divides by the size.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse = false);

}  // namespace affdim
