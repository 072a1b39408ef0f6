#include "dynlab/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace dynlab::spectral {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative in-place radix-2 Cooley-Tukey.
void fft_radix2(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * M_PI / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const auto u = a[i + j];
                const auto v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

}  // namespace

std::vector<double> magnitude_spectrum(const std::vector<double>& signal) {
    const std::size_t n = signal.size();
    if (n < 2) throw std::invalid_argument("magnitude_spectrum: signal too short");

    std::vector<std::complex<double>> buf(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w =
            0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(i) /
                                  static_cast<double>(n)));
        buf[i] = signal[i] * w;
    }

    std::vector<double> mag(n / 2 + 1);
    if (is_power_of_two(n)) {
        fft_radix2(buf);
        for (std::size_t k = 0; k <= n / 2; ++k) mag[k] = std::abs(buf[k]);
    } else {
        for (std::size_t k = 0; k <= n / 2; ++k) {
            std::complex<double> acc(0.0, 0.0);
            const double step = -2.0 * M_PI * static_cast<double>(k) /
                                static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i)
                acc += buf[i] * std::polar(1.0, step * static_cast<double>(i));
            mag[k] = std::abs(acc);
        }
    }
    return mag;
}

std::vector<Peak> find_peaks(const std::vector<double>& signal, double dt,
                             double rel_threshold) {
    if (dt <= 0.0) throw std::invalid_argument("find_peaks: dt must be positive");
    const auto mag = magnitude_spectrum(signal);
    const std::size_t n = signal.size();

    double top = 0.0;
    for (double m : mag) top = std::max(top, m);
    std::vector<Peak> peaks;
    if (top <= 0.0) return peaks;

    const double floor_mag = rel_threshold * top;
    const double bin = 2.0 * M_PI / (static_cast<double>(n) * dt);
    for (std::size_t k = 1; k + 1 < mag.size(); ++k) {
        if (mag[k] >= floor_mag && mag[k] > mag[k - 1] && mag[k] >= mag[k + 1])
            peaks.push_back({bin * static_cast<double>(k), mag[k]});
    }
    return peaks;
}

}  // namespace dynlab::spectral
