#include "qclob/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qclob {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Chirp-z reduction of an arbitrary-length DFT to three power-of-two FFTs.
std::vector<std::complex<double>> bluestein(const std::vector<std::complex<double>>& input) {
    const std::size_t n = input.size();
    const std::size_t m = next_pow2(2 * n - 1);
    const double pi = std::numbers::pi;

    // w_k = exp(-i pi k^2 / n); k^2 taken mod 2n to keep the phase exact.
    std::vector<std::complex<double>> w(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t k2 = static_cast<std::size_t>((static_cast<unsigned __int128>(k) * k) %
                                                        (2 * n));
        const double phase = -pi * static_cast<double>(k2) / static_cast<double>(n);
        w[k] = {std::cos(phase), std::sin(phase)};
    }

    std::vector<std::complex<double>> a(m), b(m);
    for (std::size_t k = 0; k < n; ++k) a[k] = input[k] * w[k];
    b[0] = std::conj(w[0]);
    for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(w[k]);

    fft_radix2(a);
    fft_radix2(b);
    for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
    fft_radix2(a, true);

    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * w[k];
    return out;
}

}  // namespace

void fft_radix2(std::vector<std::complex<double>>& data, bool inverse) {
    const std::size_t n = data.size();
    if (!is_pow2(n)) throw std::invalid_argument("fft_radix2 requires a power-of-two size");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    const double pi = std::numbers::pi;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = (inverse ? 2.0 : -2.0) * pi / static_cast<double>(len);
        const std::complex<double> step{std::cos(angle), std::sin(angle)};
        for (std::size_t block = 0; block < n; block += len) {
            std::complex<double> twiddle{1.0, 0.0};
            for (std::size_t k = 0; k < len / 2; ++k) {
                // Periodic resync keeps accumulated twiddle error near eps.
                if ((k & 63u) == 0 && k != 0) {
                    const double a = angle * static_cast<double>(k);
                    twiddle = {std::cos(a), std::sin(a)};
                }
                const auto even = data[block + k];
                const auto odd = data[block + k + len / 2] * twiddle;
                data[block + k] = even + odd;
                data[block + k + len / 2] = even - odd;
                twiddle *= step;
            }
        }
    }
    if (inverse)
        for (auto& v : data) v /= static_cast<double>(n);
}

std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& input) {
    if (input.empty()) return {};
    if (input.size() == 1) return input;
    if (is_pow2(input.size())) {
        auto data = input;
        fft_radix2(data);
        return data;
    }
    return bluestein(input);
}

std::vector<SpectrumPoint> magnitude_spectrum(const std::vector<double>& density) {
    std::vector<std::complex<double>> data(density.size());
    for (std::size_t i = 0; i < density.size(); ++i) data[i] = {density[i], 0.0};
    const auto transformed = dft(data);
    std::vector<SpectrumPoint> out(transformed.size());
    const double n = static_cast<double>(transformed.size());
    for (std::size_t k = 0; k < transformed.size(); ++k)
        out[k] = {static_cast<double>(k) / n, std::abs(transformed[k])};
    return out;
}

}  // namespace qclob
