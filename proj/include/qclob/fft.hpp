#pragma once

#include <complex>
#include <vector>

namespace qclob {

// In-place iterative radix-2 Cooley-Tukey; size must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& data, bool inverse = false);

// DFT of arbitrary length: radix-2 when the size is a power of two,
// Bluestein's chirp-z otherwise.
std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& input);

struct SpectrumPoint {
    double frequency;  // cycles per tick, k/N
    double magnitude;  // |X_k|
};

// Magnitude spectrum of a real density sampled on a contiguous 1-tick grid.
std::vector<SpectrumPoint> magnitude_spectrum(const std::vector<double>& density);

}  // namespace qclob
