#include "jcv/vitals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "jcv/fft.hpp"

namespace jcv {
namespace {

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

double bandpass_gain(double f, double low, double high) {
    const double lo_stop = 0.5 * low;
    const double hi_stop = 1.5 * high;
    if (f <= lo_stop || f >= hi_stop) return 0.0;
    if (f < low) return 0.5 * (1.0 - std::cos(kPi * (f - lo_stop) / (low - lo_stop)));
    if (f > high) return 0.5 * (1.0 + std::cos(kPi * (f - high) / (hi_stop - high)));
    return 1.0;
}

struct BandPeak {
    bool found = false;
    std::size_t index = 0;
    double frequency_hz = 0.0;
    double magnitude = 0.0;
    double confidence = 0.0;
};

struct BandAnalysis {
    Spectrum spectrum;  // full half spectrum of the band-passed track
    std::size_t first = 0;
    std::size_t last = 0;  // inclusive band limits on the spectrum grid
    std::vector<std::size_t> peaks;  // local maxima in band, strongest first
    BandPeak top;
};

double interpolate_peak(const Spectrum& s, std::size_t i) {
    if (i == 0 || i + 1 >= s.magnitude.size()) return s.frequency_hz[i];
    const double a = s.magnitude[i - 1];
    const double b = s.magnitude[i];
    const double c = s.magnitude[i + 1];
    const double denom = a - 2.0 * b + c;
    if (!(denom < 0.0)) return s.frequency_hz[i];
    const double offset = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
    const double df = s.frequency_hz[1] - s.frequency_hz[0];
    return s.frequency_hz[i] + offset * df;
}

BandAnalysis analyse_band(const PhaseTrack& track, const FrequencyBand& band, const VitalsConfig& config) {
    BandAnalysis out;
    const auto filtered = bandpass(track, band.low_hz, band.high_hz);
    out.spectrum = magnitude_spectrum(filtered.unwrapped_phase, track.sample_rate_hz, config.zero_padding);
    const auto& f = out.spectrum.frequency_hz;
    const auto& m = out.spectrum.magnitude;
    out.first = static_cast<std::size_t>(std::lower_bound(f.begin(), f.end(), band.low_hz) - f.begin());
    out.last = static_cast<std::size_t>(std::upper_bound(f.begin(), f.end(), band.high_hz) - f.begin());
    if (out.last > 0) --out.last;
    if (out.last >= m.size() || out.first > out.last) return out;

    for (std::size_t i = std::max<std::size_t>(out.first, 1); i <= out.last && i + 1 < m.size(); ++i)
        if (m[i] > m[i - 1] && m[i] >= m[i + 1]) out.peaks.push_back(i);
    std::stable_sort(out.peaks.begin(), out.peaks.end(), [&](auto a, auto b) { return m[a] > m[b]; });
    if (out.peaks.empty()) return out;

    // Hann main lobe spans +-2 unpadded bins.
    const std::size_t half_lobe = 2 * config.zero_padding;
    double band_energy = 0.0;
    for (std::size_t i = out.first; i <= out.last; ++i) band_energy += m[i] * m[i];
    const std::size_t ipk = out.peaks.front();
    double lobe_energy = 0.0;
    for (std::size_t i = ipk > half_lobe ? ipk - half_lobe : 0; i <= std::min(ipk + half_lobe, out.last); ++i)
        if (i >= out.first) lobe_energy += m[i] * m[i];

    out.top.found = true;
    out.top.index = ipk;
    out.top.frequency_hz = interpolate_peak(out.spectrum, ipk);
    out.top.magnitude = m[ipk];
    out.top.confidence = band_energy > 0.0 ? std::clamp(lobe_energy / band_energy, 0.0, 1.0) : 0.0;
    return out;
}

Spectrum normalized_band(const BandAnalysis& a) {
    Spectrum s;
    if (a.first > a.last || a.last >= a.spectrum.magnitude.size()) return s;
    s.frequency_hz.assign(a.spectrum.frequency_hz.begin() + static_cast<std::ptrdiff_t>(a.first),
                          a.spectrum.frequency_hz.begin() + static_cast<std::ptrdiff_t>(a.last + 1));
    s.magnitude.assign(a.spectrum.magnitude.begin() + static_cast<std::ptrdiff_t>(a.first),
                       a.spectrum.magnitude.begin() + static_cast<std::ptrdiff_t>(a.last + 1));
    const double peak = s.magnitude.empty() ? 0.0 : *std::max_element(s.magnitude.begin(), s.magnitude.end());
    if (peak > 0.0)
        for (auto& v : s.magnitude) v /= peak;
    return s;
}

void check_band(const FrequencyBand& band, double fs, const char* name) {
    if (!(band.low_hz > 0.0 && band.low_hz < band.high_hz && band.high_hz < fs / 2.0))
        throw ConfigError(std::string(name) + " band must satisfy 0 < low < high < sample_rate/2");
}

}  // namespace

double VitalsEstimate::confidence() const {
    if (br_bpm && hr_bpm) return std::min(br_confidence, hr_confidence);
    if (br_bpm) return br_confidence;
    if (hr_bpm) return hr_confidence;
    return 0.0;
}

PhaseTrack phase_track(std::span<const cd> bin_series, double sample_rate_hz, bool detrend) {
    if (bin_series.size() < 2) throw ConfigError("phase_track: need at least two samples");
    if (!(sample_rate_hz > 0.0)) throw ConfigError("phase_track: sample rate must be positive");

    PhaseTrack track;
    track.sample_rate_hz = sample_rate_hz;
    track.unwrapped_phase.resize(bin_series.size());

    double previous_wrapped = 0.0;
    double offset = 0.0;
    for (std::size_t i = 0; i < bin_series.size(); ++i) {
        double wrapped;
        if (bin_series[i] == cd{0.0, 0.0} || !std::isfinite(std::abs(bin_series[i]))) {
            wrapped = previous_wrapped;
            ++track.zero_magnitude_samples;
        } else {
            wrapped = std::arg(bin_series[i]);
        }
        if (i > 0) {
            const double step = wrapped - previous_wrapped;
            if (step > kPi) offset -= 2.0 * kPi;
            else if (step < -kPi) offset += 2.0 * kPi;
        }
        track.unwrapped_phase[i] = wrapped + offset;
        previous_wrapped = wrapped;
    }
    if (detrend) {
        track.unwrapped_phase = linear_detrend(track.unwrapped_phase);
        track.detrended = true;
    }
    return track;
}

std::vector<double> phase_to_displacement(const PhaseTrack& track, double wavelength_m) {
    if (!(wavelength_m > 0.0)) throw ConfigError("phase_to_displacement: wavelength must be positive");
    const auto& phi = track.unwrapped_phase;
    if (phi.empty()) return {};
    const double mean = std::accumulate(phi.begin(), phi.end(), 0.0) / static_cast<double>(phi.size());
    std::vector<double> d(phi.size());
    const double scale = -wavelength_m / (4.0 * kPi);
    for (std::size_t i = 0; i < phi.size(); ++i) d[i] = scale * (phi[i] - mean);
    return d;
}

std::vector<double> linear_detrend(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<double> out(x.begin(), x.end());
    if (n < 2) {
        for (auto& v : out) v = 0.0;
        return out;
    }
    const double t_mean = 0.5 * static_cast<double>(n - 1);
    const double x_mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = static_cast<double>(i) - t_mean;
        sxy += dt * (x[i] - x_mean);
        sxx += dt * dt;
    }
    const double slope = sxy / sxx;
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - x_mean - slope * (static_cast<double>(i) - t_mean);
    return out;
}

PhaseTrack bandpass(const PhaseTrack& track, double low_hz, double high_hz) {
    const double fs = track.sample_rate_hz;
    if (!(low_hz > 0.0 && low_hz < high_hz && high_hz < fs / 2.0))
        throw ConfigError("bandpass: need 0 < low < high < sample_rate/2 (got " + std::to_string(low_hz) +
                          ", " + std::to_string(high_hz) + " at " + std::to_string(fs) + " Hz)");
    const std::size_t n = track.unwrapped_phase.size();
    PhaseTrack out = track;
    if (n == 0) return out;

    const std::size_t len = 2 * n;
    std::vector<cd> ext(len);
    for (std::size_t i = 0; i < n; ++i) {
        ext[i] = track.unwrapped_phase[i];
        ext[len - 1 - i] = track.unwrapped_phase[i];
    }
    auto spectrum = fft::forward(ext);
    const double df = fs / static_cast<double>(len);
    for (std::size_t k = 0; k < len; ++k) {
        const std::size_t kk = k <= len / 2 ? k : len - k;
        spectrum[k] *= bandpass_gain(static_cast<double>(kk) * df, low_hz, high_hz);
    }
    const auto filtered = fft::inverse(spectrum);
    for (std::size_t i = 0; i < n; ++i) out.unwrapped_phase[i] = filtered[i].real() / static_cast<double>(len);
    return out;
}

Spectrum magnitude_spectrum(std::span<const double> x, double sample_rate_hz, std::size_t zero_padding) {
    const std::size_t n = x.size();
    Spectrum s;
    if (n == 0) return s;
    const std::size_t nfft = n * std::max<std::size_t>(zero_padding, 1);
    std::vector<cd> buf(nfft, cd{0.0, 0.0});
    double wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = n > 1 ? 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n - 1)) : 1.0;
        buf[i] = w * x[i];
        wsum += w;
    }
    const auto spec = fft::forward(buf);
    const std::size_t half = nfft / 2 + 1;
    s.frequency_hz.resize(half);
    s.magnitude.resize(half);
    for (std::size_t k = 0; k < half; ++k) {
        s.frequency_hz[k] = static_cast<double>(k) * sample_rate_hz / static_cast<double>(nfft);
        // Single-sided amplitude: a tone of amplitude A peaks near A.
        s.magnitude[k] = 2.0 * std::abs(spec[k]) / wsum;
    }
    return s;
}

double spectral_correlation(const Spectrum& a, const Spectrum& b) {
    if (a.magnitude.size() != b.magnitude.size() || a.magnitude.empty())
        throw ConfigError("spectral_correlation: spectra must share a non-empty frequency grid");
    double ab = 0.0;
    double aa = 0.0;
    double bb = 0.0;
    for (std::size_t k = 0; k < a.magnitude.size(); ++k) {
        ab += a.magnitude[k] * b.magnitude[k];
        aa += a.magnitude[k] * a.magnitude[k];
        bb += b.magnitude[k] * b.magnitude[k];
    }
    if (!(aa > 0.0 && bb > 0.0)) return 0.0;
    return ab / std::sqrt(aa * bb);
}

VitalsEstimate estimate_vitals(const PhaseTrack& track, const VitalsConfig& config) {
    const double fs = track.sample_rate_hz;
    if (!(fs > 0.0)) throw ConfigError("estimate_vitals: sample rate must be positive");
    if (track.duration_s() < config.min_duration_s)
        throw DataError("estimate_vitals: track lasts " + std::to_string(track.duration_s()) +
                        " s, below the " + std::to_string(config.min_duration_s) + " s minimum");
    check_band(config.breathing_band, fs, "breathing");
    check_band(config.heart_band, fs, "heart");

    PhaseTrack work = track;
    if (config.detrend && !track.detrended) {
        work.unwrapped_phase = linear_detrend(track.unwrapped_phase);
        work.detrended = true;
    } else {
        const double mean = std::accumulate(work.unwrapped_phase.begin(), work.unwrapped_phase.end(), 0.0) /
                            static_cast<double>(work.unwrapped_phase.size());
        for (auto& v : work.unwrapped_phase) v -= mean;
    }

    VitalsEstimate est;

    const auto full = magnitude_spectrum(work.unwrapped_phase, fs, config.zero_padding);
    std::vector<double> reference;
    for (std::size_t k = 0; k < full.frequency_hz.size(); ++k)
        if (full.frequency_hz[k] >= config.noise_floor_min_hz) reference.push_back(full.magnitude[k]);
    est.noise_floor = median(reference);
    const double peak_threshold = est.noise_floor * std::pow(10.0, config.min_peak_snr_db / 20.0);

    const auto br = analyse_band(work, config.breathing_band, config);
    const auto hr = analyse_band(work, config.heart_band, config);
    est.br_spectrum = normalized_band(br);
    est.hr_spectrum = normalized_band(hr);

    auto accept = [&](const BandPeak& p) {
        return p.found && p.magnitude > peak_threshold && p.magnitude > 0.0 && p.confidence >= config.min_confidence;
    };

    est.br_peak_hz = br.top.frequency_hz;
    est.br_confidence = br.top.confidence;
    if (accept(br.top)) est.br_bpm = 60.0 * br.top.frequency_hz;

    est.hr_peak_hz = hr.top.frequency_hz;
    est.hr_confidence = hr.top.confidence;
    if (accept(hr.top)) est.hr_bpm = 60.0 * hr.top.frequency_hz;

    // A breathing line that clears the floor is enough to explain an HR-band
    // peak as its harmonic, even when its confidence is too low to report.
    const bool br_line = br.top.found && br.top.magnitude > peak_threshold;
    if (br_line && hr.top.found) {
        const double bin_hz = fs / static_cast<double>(work.unwrapped_phase.size() * std::max<std::size_t>(config.zero_padding, 1));
        const double tol = std::max(config.harmonic_tolerance_hz, bin_hz);
        auto harmonic_of = [&](double f) -> std::optional<std::size_t> {
            std::optional<std::size_t> best;
            double best_err = std::numeric_limits<double>::infinity();
            for (std::size_t k = 2; k <= config.max_harmonic_order; ++k) {
                const double err = std::abs(f - static_cast<double>(k) * est.br_peak_hz);
                if (err <= tol && err < best_err) {
                    best = k;
                    best_err = err;
                }
            }
            return best;
        };
        if (const auto k = harmonic_of(est.hr_peak_hz)) {
            // Ambiguous only when another HR-band line competes with the top one.
            const auto& m = hr.spectrum.magnitude;
            for (std::size_t idx = 1; idx < hr.peaks.size(); ++idx) {
                const auto i = hr.peaks[idx];
                if (m[i] < config.alternative_peak_ratio * hr.top.magnitude) break;
                if (m[i] <= peak_threshold) continue;
                est.harmonic_flag = true;
                est.harmonic_order = k;
                est.hr_alternative_hz = interpolate_peak(hr.spectrum, i);
                est.hr_bpm.reset();
                break;
            }
        }
    }
    return est;
}

}  // namespace jcv
