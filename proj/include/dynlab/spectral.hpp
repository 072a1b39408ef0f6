#ifndef DYNLAB_SPECTRAL_HPP
#define DYNLAB_SPECTRAL_HPP

#include <complex>
#include <vector>

namespace dynlab::spectral {

/// One detected spectral line: bin-center angular frequency and the
/// windowed DFT magnitude at that bin.
struct Peak {
    double omega;
    double magnitude;
};

/// Magnitude spectrum of a real signal after a Hann window, bins
/// k = 0 .. n/2. Uses a radix-2 FFT when n is a power of two, a direct
/// DFT otherwise.
std::vector<double> magnitude_spectrum(const std::vector<double>& signal);

/// Local maxima of the magnitude spectrum above rel_threshold * global max,
/// converted to angular frequency via the sample spacing dt. A zero signal
/// yields no peaks. Result sorted by ascending omega.
std::vector<Peak> find_peaks(const std::vector<double>& signal, double dt,
                             double rel_threshold = 0.1);

}  // namespace dynlab::spectral

#endif
