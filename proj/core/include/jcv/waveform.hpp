#pragma once

#include <cstddef>
#include <vector>

#include "jcv/common.hpp"

namespace jcv {

enum class PhaseProfile {
    Quadratic,  ///< phi_m = pi m^2 / K over the K active subcarriers
    Zero,       ///< all phases zero (worst-case coherent peak)
};

/// Contiguous run of active subcarriers, as indices into [0, num_subcarriers).
struct ActiveBand {
    std::size_t first = 0;
    std::size_t count = 0;

    bool contains(std::size_t i) const { return i >= first && i < first + count; }
    bool operator==(const ActiveBand&) const = default;
};

/// OFDM sensing pulse description.
///
/// Subcarrier i sits at baseband offset (i - num_subcarriers/2) * spacing, and
/// the spacing is the reciprocal of the pulse duration, so every subcarrier
/// lands on an exact bin of the samples_per_pulse-point DFT.
struct WaveformSpec {
    double carrier_frequency_hz = 26.5e9;
    std::size_t num_subcarriers = 1024;
    std::size_t samples_per_pulse = 2500;
    double pulse_duration_s = 1e-6;
    ActiveBand active{0, 1024};
    PhaseProfile phase_profile = PhaseProfile::Quadratic;

    double subcarrier_spacing_hz() const { return 1.0 / pulse_duration_s; }
    double sample_rate_hz() const { return static_cast<double>(samples_per_pulse) / pulse_duration_s; }
    double wavelength_m() const { return kSpeedOfLight / carrier_frequency_hz; }
    double occupied_bandwidth_hz() const { return static_cast<double>(active.count) * subcarrier_spacing_hz(); }

    /// Baseband frequency of subcarrier i relative to the carrier.
    double subcarrier_offset_hz(std::size_t i) const;
    /// DFT bin (mod samples_per_pulse) that carries subcarrier i.
    std::size_t subcarrier_bin(std::size_t i) const;

    std::vector<bool> active_mask() const;

    /// Throws ConfigError when any invariant is violated.
    void validate() const;

    bool operator==(const WaveformSpec&) const = default;
};

struct BasebandSymbol {
    std::vector<cd> freq_domain;  ///< num_subcarriers entries
    std::vector<cd> time_domain;  ///< samples_per_pulse entries

    bool operator==(const BasebandSymbol&) const = default;
};

/// Centered, contiguous band of `count` subcarriers.
ActiveBand centered_band(std::size_t num_subcarriers, std::size_t count);

BasebandSymbol build_waveform(const WaveformSpec& spec);

double papr_db(const BasebandSymbol& symbol);

WaveformSpec select_subcarriers(const WaveformSpec& spec, std::size_t count);

}  // namespace jcv
