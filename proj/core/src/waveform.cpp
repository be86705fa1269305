#include "jcv/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jcv/fft.hpp"

namespace jcv {

double WaveformSpec::subcarrier_offset_hz(std::size_t i) const {
    const auto offset = static_cast<double>(i) - static_cast<double>(num_subcarriers / 2);
    return offset * subcarrier_spacing_hz();
}

std::size_t WaveformSpec::subcarrier_bin(std::size_t i) const {
    const auto p = static_cast<long long>(samples_per_pulse);
    auto k = static_cast<long long>(i) - static_cast<long long>(num_subcarriers / 2);
    k %= p;
    if (k < 0) k += p;
    return static_cast<std::size_t>(k);
}

std::vector<bool> WaveformSpec::active_mask() const {
    std::vector<bool> mask(num_subcarriers, false);
    for (std::size_t i = 0; i < num_subcarriers; ++i) mask[i] = active.contains(i);
    return mask;
}

void WaveformSpec::validate() const {
    if (!(carrier_frequency_hz > 0.0) || !std::isfinite(carrier_frequency_hz))
        throw ConfigError("waveform: carrier frequency must be positive");
    if (num_subcarriers < 1) throw ConfigError("waveform: num_subcarriers must be >= 1");
    if (samples_per_pulse < num_subcarriers)
        throw ConfigError("waveform: samples_per_pulse must be >= num_subcarriers");
    if (!(pulse_duration_s > 0.0) || !std::isfinite(pulse_duration_s))
        throw ConfigError("waveform: pulse duration must be positive");
    if (active.count == 0) throw ConfigError("waveform: active band selects zero subcarriers");
    if (active.first + active.count > num_subcarriers)
        throw ConfigError("waveform: active band exceeds num_subcarriers");
    if (active != centered_band(num_subcarriers, active.count))
        throw ConfigError("waveform: active band must be centered on the carrier");
}

ActiveBand centered_band(std::size_t num_subcarriers, std::size_t count) {
    return {(num_subcarriers - std::min(count, num_subcarriers)) / 2, count};
}

BasebandSymbol build_waveform(const WaveformSpec& spec) {
    spec.validate();

    BasebandSymbol symbol;
    symbol.freq_domain.assign(spec.num_subcarriers, cd{0.0, 0.0});

    const auto k_active = static_cast<double>(spec.active.count);
    for (std::size_t m = 0; m < spec.active.count; ++m) {
        double phase = 0.0;
        if (spec.phase_profile == PhaseProfile::Quadratic) {
            // Reduce m^2 mod 2K first so the phase argument stays small.
            const auto two_k = 2 * spec.active.count;
            const auto m2 = (m % two_k) * (m % two_k) % two_k;
            phase = kPi * static_cast<double>(m2) / k_active;
        }
        symbol.freq_domain[spec.active.first + m] = std::polar(1.0, phase);
    }

    // Unitary inverse DFT over samples_per_pulse points.
    std::vector<cd> grid(spec.samples_per_pulse, cd{0.0, 0.0});
    for (std::size_t i = spec.active.first; i < spec.active.first + spec.active.count; ++i)
        grid[spec.subcarrier_bin(i)] = symbol.freq_domain[i];
    symbol.time_domain = fft::inverse(grid);
    const double scale = 1.0 / std::sqrt(static_cast<double>(spec.samples_per_pulse));
    for (auto& x : symbol.time_domain) x *= scale;
    return symbol;
}

double papr_db(const BasebandSymbol& symbol) {
    if (symbol.time_domain.empty()) throw ConfigError("papr: empty symbol");
    double peak = 0.0;
    double total = 0.0;
    for (const auto& x : symbol.time_domain) {
        const double p = std::norm(x);
        peak = std::max(peak, p);
        total += p;
    }
    if (total <= 0.0) throw ConfigError("papr: all-zero symbol");
    const double mean = total / static_cast<double>(symbol.time_domain.size());
    return std::max(0.0, db10(peak / mean));
}

WaveformSpec select_subcarriers(const WaveformSpec& spec, std::size_t count) {
    if (count < 1 || count > spec.num_subcarriers)
        throw ConfigError("select_subcarriers: count " + std::to_string(count) +
                          " outside [1, " + std::to_string(spec.num_subcarriers) + "]");
    WaveformSpec out = spec;
    out.active = centered_band(spec.num_subcarriers, count);
    return out;
}

}  // namespace jcv
