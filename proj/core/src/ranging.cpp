#include "jcv/ranging.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace jcv {
namespace {

std::vector<double> mean_power(const RealMatrix& profiles) {
    std::vector<double> acc(profiles.cols(), 0.0);
    for (std::size_t r = 0; r < profiles.rows(); ++r) {
        const auto row = profiles.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) acc[c] += row[c] * row[c];
    }
    if (profiles.rows() > 0)
        for (auto& v : acc) v /= static_cast<double>(profiles.rows());
    return acc;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

/// Circular distance in bins.
double bin_distance(double a, double b, double period) {
    double d = std::fmod(std::abs(a - b), period);
    return std::min(d, period - d);
}

/// Upper envelope of the squared rectangular-band point response at an
/// offset of `delta` bins.
double sidelobe_envelope_sq(double delta, double k_active, double p) {
    const double s = std::abs(std::sin(kPi * delta / p));
    if (s * k_active <= 1.0) return 1.0;
    return 1.0 / (k_active * k_active * s * s);
}

std::vector<cd> phasors(const WaveformSpec& spec, double delay_bin) {
    const double p = static_cast<double>(spec.samples_per_pulse);
    const double half = static_cast<double>(spec.num_subcarriers / 2);
    std::vector<cd> out(spec.active.count);
    for (std::size_t m = 0; m < out.size(); ++m) {
        const double k = static_cast<double>(spec.active.first + m) - half;
        out[m] = std::polar(1.0, 2.0 * kPi * k * delay_bin / p);
    }
    return out;
}

double slow_time_energy(const ChannelFrameSeries& series, double delay_bin) {
    const auto e = phasors(series.spec, delay_bin);
    double energy = 0.0;
    for (std::size_t r = 0; r < series.num_frames(); ++r) {
        const auto h = series.transfer.row(r);
        cd acc{0.0, 0.0};
        for (std::size_t m = 0; m < e.size(); ++m) acc += h[m] * e[m];
        energy += std::norm(acc);
    }
    return energy;
}

/// Solve the Hermitian system g x = b in place (small, well conditioned).
std::vector<cd> solve(std::vector<cd> g, std::vector<cd> b, std::size_t n) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(g[r * n + col]) > std::abs(g[pivot * n + col])) pivot = r;
        if (std::abs(g[pivot * n + col]) < 1e-12) throw DataError("extract_target_series: detections are not separable");
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(g[col * n + c], g[pivot * n + c]);
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const cd f = g[r * n + col] / g[col * n + col];
            for (std::size_t c = col; c < n; ++c) g[r * n + c] -= f * g[col * n + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<cd> x(n);
    for (std::size_t i = n; i-- > 0;) {
        cd acc = b[i];
        for (std::size_t c = i + 1; c < n; ++c) acc -= g[i * n + c] * x[c];
        x[i] = acc / g[i * n + i];
    }
    return x;
}

}  // namespace

std::vector<double> RangeProfileSeries::mean_power_db() const {
    auto power = mean_power(profiles);
    for (auto& v : power) v = 10.0 * std::log10(std::max(v, 1e-300));
    return power;
}

RangeProfileSeries to_range_profiles(const ChannelFrameSeries& series, double cable_offset_m) {
    if (!(cable_offset_m >= 0.0)) throw ConfigError("to_range_profiles: cable offset must be >= 0");
    const auto& spec = series.spec;
    RangeProfileSeries out;
    out.spec = spec;
    out.cable_offset_m = cable_offset_m;
    out.range_resolution_m = kSpeedOfLight / (2.0 * spec.occupied_bandwidth_hz());
    out.bin_width_m = kSpeedOfLight / (2.0 * spec.sample_rate_hz());
    out.range_axis.resize(spec.samples_per_pulse);
    for (std::size_t n = 0; n < out.range_axis.size(); ++n)
        out.range_axis[n] = out.range_of_bin(static_cast<double>(n));

    out.profiles = RealMatrix(series.impulse.rows(), series.impulse.cols());
    for (std::size_t r = 0; r < series.impulse.rows(); ++r) {
        const auto src = series.impulse.row(r);
        auto dst = out.profiles.row(r);
        for (std::size_t c = 0; c < src.size(); ++c) dst[c] = std::abs(src[c]);
    }
    return out;
}

std::vector<TargetDetection> detect_targets(const RangeProfileSeries& profiles,
                                            const DetectionOptions& options) {
    if (options.max_targets < 1) throw ConfigError("detect_targets: max_targets must be >= 1");
    const auto power = mean_power(profiles.profiles);
    const std::size_t p = power.size();
    if (p < 3) return {};

    const double peak_power = *std::max_element(power.begin(), power.end());
    if (!(peak_power > 0.0)) return {};
    double floor = median(power);
    if (!(floor > 0.0)) floor = peak_power * 1e-30;
    const double threshold = floor * std::pow(10.0, options.min_prominence_db / 10.0);

    std::vector<std::size_t> candidates;
    for (std::size_t n = 0; n < p; ++n) {
        const double left = power[(n + p - 1) % p];
        const double right = power[(n + 1) % p];
        if (power[n] > threshold && power[n] >= left && power[n] > right) candidates.push_back(n);
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t a, std::size_t b) { return power[a] > power[b]; });

    const double min_sep_bins = profiles.range_resolution_m / profiles.bin_width_m;
    const double k_active = static_cast<double>(profiles.spec.active.count);
    const double guard = std::pow(10.0, options.sidelobe_guard_db / 10.0);
    const auto period = static_cast<double>(p);

    std::vector<TargetDetection> out;
    for (const auto n : candidates) {
        if (out.size() >= options.max_targets) break;
        bool keep = true;
        double leak = 0.0;
        for (const auto& d : out) {
            const double dist = bin_distance(static_cast<double>(n), d.fractional_bin, period);
            if (dist < min_sep_bins) {
                keep = false;
                break;
            }
            leak += std::pow(10.0, d.mean_power_db / 10.0) * sidelobe_envelope_sq(dist, k_active, period);
        }
        if (!keep || power[n] < leak * guard) continue;

        // Parabolic interpolation on magnitude.
        const double a = std::sqrt(power[(n + p - 1) % p]);
        const double b = std::sqrt(power[n]);
        const double c = std::sqrt(power[(n + 1) % p]);
        const double denom = a - 2.0 * b + c;
        double offset = denom < 0.0 ? 0.5 * (a - c) / denom : 0.0;
        offset = std::clamp(offset, -0.5, 0.5);

        TargetDetection det;
        det.bin_index = n;
        det.fractional_bin = static_cast<double>(n) + offset;
        det.range_m = profiles.range_of_bin(det.fractional_bin);
        det.mean_power_db = 10.0 * std::log10(power[n]);
        det.prominence_db = 10.0 * std::log10(power[n] / floor);
        out.push_back(det);
    }
    return out;
}

std::vector<cd> extract_bin_series(const ChannelFrameSeries& series, const TargetDetection& detection) {
    if (detection.bin_index >= series.impulse.cols())
        throw ConfigError("extract_bin_series: bin " + std::to_string(detection.bin_index) +
                          " outside the " + std::to_string(series.impulse.cols()) + "-bin impulse response");
    return series.impulse.column(detection.bin_index);
}

double refine_delay_bin(const ChannelFrameSeries& series, std::size_t bin_index) {
    constexpr double kInvPhi = 0.6180339887498949;
    double lo = static_cast<double>(bin_index) - 1.0;
    double hi = static_cast<double>(bin_index) + 1.0;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = slow_time_energy(series, x1);
    double f2 = slow_time_energy(series, x2);
    while (hi - lo > 1e-4) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = slow_time_energy(series, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = slow_time_energy(series, x1);
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<cd> extract_target_series(const ChannelFrameSeries& series,
                                      const std::vector<TargetDetection>& detections,
                                      std::size_t which) {
    if (which >= detections.size()) throw ConfigError("extract_target_series: detection index out of range");
    for (const auto& d : detections)
        if (d.bin_index >= series.impulse.cols()) throw ConfigError("extract_target_series: bin out of range");

    const std::size_t m = detections.size();
    const std::size_t k = series.spec.active.count;
    // Columns of the model H_m = sum_j c_j exp(-j 2 pi k_m x_j / P); stored conjugated.
    std::vector<std::vector<cd>> cols(m);
    for (std::size_t j = 0; j < m; ++j)
        cols[j] = phasors(series.spec, refine_delay_bin(series, detections[j].bin_index));

    std::vector<cd> gram(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            cd acc{0.0, 0.0};
            for (std::size_t q = 0; q < k; ++q) acc += cols[i][q] * std::conj(cols[j][q]);
            gram[i * m + j] = acc;
        }

    std::vector<cd> out(series.num_frames());
    std::vector<cd> rhs(m);
    for (std::size_t r = 0; r < series.num_frames(); ++r) {
        const auto h = series.transfer.row(r);
        for (std::size_t i = 0; i < m; ++i) {
            cd acc{0.0, 0.0};
            for (std::size_t q = 0; q < k; ++q) acc += cols[i][q] * h[q];
            rhs[i] = acc;
        }
        out[r] = solve(gram, rhs, m)[which];
    }
    return out;
}

ChannelFrameSeries suppress_static_clutter(const ChannelFrameSeries& series) {
    ChannelFrameSeries out = series;
    for (auto* mat : {&out.transfer, &out.impulse}) {
        const std::size_t rows = mat->rows();
        if (rows == 0) continue;
        for (std::size_t c = 0; c < mat->cols(); ++c) {
            cd mean{0.0, 0.0};
            for (std::size_t r = 0; r < rows; ++r) mean += (*mat)(r, c);
            mean /= static_cast<double>(rows);
            for (std::size_t r = 0; r < rows; ++r) (*mat)(r, c) -= mean;
        }
    }
    return out;
}

}  // namespace jcv
