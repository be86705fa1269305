#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "jcv/common.hpp"

namespace jcv {

struct PhaseTrack {
    double sample_rate_hz = 0.0;
    std::vector<double> unwrapped_phase;
    bool detrended = false;
    /// Samples with zero magnitude whose phase was carried over.
    std::size_t zero_magnitude_samples = 0;

    double duration_s() const { return static_cast<double>(unwrapped_phase.size()) / sample_rate_hz; }
};

struct FrequencyBand {
    double low_hz = 0.0;
    double high_hz = 0.0;

    bool operator==(const FrequencyBand&) const = default;
};

/// Magnitude spectrum on a uniform frequency grid, normalized to peak 1.
struct Spectrum {
    std::vector<double> frequency_hz;
    std::vector<double> magnitude;
};

struct VitalsConfig {
    FrequencyBand breathing_band{0.15, 0.5};
    FrequencyBand heart_band{0.8, 2.0};
    double min_duration_s = 15.0;
    std::size_t zero_padding = 4;
    bool detrend = true;
    /// Peak must exceed the spectral noise floor by this much.
    double min_peak_snr_db = 12.0;
    /// Fraction of in-band energy inside the peak's main lobe.
    double min_confidence = 0.4;
    /// The noise floor is the median spectrum level above this frequency.
    double noise_floor_min_hz = 3.0;
    /// |hr - k br| tolerance floor for the harmonic check.
    double harmonic_tolerance_hz = 0.05;
    std::size_t max_harmonic_order = 5;
    /// Relative size an alternative HR-band peak needs to be reported.
    double alternative_peak_ratio = 0.5;

    bool operator==(const VitalsConfig&) const = default;
};

struct VitalsEstimate {
    std::optional<double> br_bpm;
    std::optional<double> hr_bpm;
    double br_peak_hz = 0.0;
    double hr_peak_hz = 0.0;
    double br_confidence = 0.0;
    double hr_confidence = 0.0;
    Spectrum br_spectrum;
    Spectrum hr_spectrum;
    /// Set when the HR-band top peak sits on a breathing harmonic and another
    /// HR-band peak competes with it; hr_bpm is then left empty.
    bool harmonic_flag = false;
    std::optional<std::size_t> harmonic_order;
    /// The competing HR-band peak behind a harmonic flag.
    std::optional<double> hr_alternative_hz;
    double noise_floor = 0.0;

    /// Lower of the confidences of the reported vitals (0 when none).
    double confidence() const;
};

/// Argument of each sample, unwrapped by +-2 pi whenever a step exceeds pi.
PhaseTrack phase_track(std::span<const cd> bin_series, double sample_rate_hz, bool detrend = false);

/// Radial displacement from phase, d = -phi * lambda / (4 pi), relative to the
/// track mean. The sign follows the exp(-j 2 pi f_c tau) propagation model:
/// moving away lowers the phase.
std::vector<double> phase_to_displacement(const PhaseTrack& track, double wavelength_m);

/// Zero-phase band-pass with raised-cosine skirts reaching zero at 0.5*low
/// and 1.5*high. Applied in the frequency domain over the even-symmetric
/// extension of the track.
PhaseTrack bandpass(const PhaseTrack& track, double low_hz, double high_hz);

std::vector<double> linear_detrend(std::span<const double> x);

/// Hann-windowed, zero-padded magnitude spectrum (unnormalized).
Spectrum magnitude_spectrum(std::span<const double> x, double sample_rate_hz, std::size_t zero_padding);

/// Normalized inner product of two magnitude spectra on the same grid.
double spectral_correlation(const Spectrum& a, const Spectrum& b);

VitalsEstimate estimate_vitals(const PhaseTrack& track, const VitalsConfig& config = {});

}  // namespace jcv
