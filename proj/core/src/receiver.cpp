#include "jcv/receiver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jcv/fft.hpp"

namespace jcv {
namespace {

constexpr double kMinSymbolMagnitude = 1e-12;

std::vector<double> band_weights(std::size_t count, bool hann) {
    std::vector<double> w(count, 1.0);
    if (hann && count > 1) {
        for (std::size_t m = 0; m < count; ++m)
            w[m] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(m) / static_cast<double>(count - 1));
    }
    return w;
}

ComplexMatrix block_mean(const ComplexMatrix& in, std::size_t factor) {
    const std::size_t blocks = in.rows() / factor;
    ComplexMatrix out(blocks, in.cols());
    const double inv = 1.0 / static_cast<double>(factor);
    for (std::size_t b = 0; b < blocks; ++b) {
        auto dst = out.row(b);
        for (std::size_t r = b * factor; r < (b + 1) * factor; ++r) {
            const auto src = in.row(r);
            for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += src[c];
        }
        for (auto& v : dst) v *= inv;
    }
    return out;
}

void check_factor(std::size_t factor, std::size_t rows) {
    if (factor < 1) throw ConfigError("average_slow_time: factor must be >= 1");
    if (factor > rows)
        throw ConfigError("average_slow_time: factor " + std::to_string(factor) + " exceeds " +
                          std::to_string(rows) + " frames");
}

}  // namespace

ComplexMatrix impulse_from_transfer(const ComplexMatrix& transfer, const WaveformSpec& spec,
                                    bool hann_window) {
    const std::size_t p = spec.samples_per_pulse;
    const auto w = band_weights(spec.active.count, hann_window);
    double w_sum = 0.0;
    for (double v : w) w_sum += v;

    ComplexMatrix impulse(transfer.rows(), p);
    std::vector<cd> grid(p);
    for (std::size_t r = 0; r < transfer.rows(); ++r) {
        std::fill(grid.begin(), grid.end(), cd{0.0, 0.0});
        const auto h = transfer.row(r);
        for (std::size_t m = 0; m < spec.active.count; ++m)
            grid[spec.subcarrier_bin(spec.active.first + m)] = w[m] * h[m];
        auto dst = impulse.row(r);
        fft::inverse(grid, dst);
        for (auto& v : dst) v /= w_sum;
    }
    return impulse;
}

ChannelFrameSeries estimate_channel(const SlowFastMatrix& capture, const BasebandSymbol& symbol,
                                    const EstimateOptions& options) {
    const auto& spec = capture.spec;
    spec.validate();
    if (symbol.freq_domain.size() != spec.num_subcarriers ||
        symbol.time_domain.size() != spec.samples_per_pulse ||
        capture.frames.cols() != spec.samples_per_pulse)
        throw ConfigError("estimate_channel: capture and symbol disagree on the waveform layout");

    std::vector<cd> inv_x(spec.active.count);
    for (std::size_t m = 0; m < spec.active.count; ++m) {
        const cd x = symbol.freq_domain[spec.active.first + m];
        if (std::abs(x) < kMinSymbolMagnitude)
            throw ConfigError("estimate_channel: active subcarrier " + std::to_string(spec.active.first + m) +
                              " has no transmitted energy; capture and symbol specs differ");
        inv_x[m] = 1.0 / x;
    }

    const std::size_t n = capture.num_frames();
    const std::size_t p = spec.samples_per_pulse;
    const double unitary = 1.0 / std::sqrt(static_cast<double>(p));

    ChannelFrameSeries out;
    out.transfer = ComplexMatrix(n, spec.active.count);
    out.frame_rate_hz = capture.frame_rate_hz;
    out.spec = spec;
    out.hann_window = options.hann_window;

    std::vector<cd> spectrum(p);
    for (std::size_t r = 0; r < n; ++r) {
        fft::forward(capture.frames.row(r), spectrum);
        auto h = out.transfer.row(r);
        for (std::size_t m = 0; m < spec.active.count; ++m)
            h[m] = spectrum[spec.subcarrier_bin(spec.active.first + m)] * unitary * inv_x[m];
    }
    out.impulse = impulse_from_transfer(out.transfer, spec, options.hann_window);
    return out;
}

cd impulse_at(std::span<const cd> transfer_row, const WaveformSpec& spec, double delay_bin) {
    const double p = static_cast<double>(spec.samples_per_pulse);
    const double half = static_cast<double>(spec.num_subcarriers / 2);
    cd acc{0.0, 0.0};
    for (std::size_t m = 0; m < transfer_row.size(); ++m) {
        const double k = static_cast<double>(spec.active.first + m) - half;
        acc += transfer_row[m] * std::polar(1.0, 2.0 * kPi * k * delay_bin / p);
    }
    return acc / static_cast<double>(transfer_row.size());
}

ChannelFrameSeries restrict_band(const ChannelFrameSeries& series, std::size_t count) {
    const auto spec = select_subcarriers(series.spec, count);
    if (spec.active.first < series.spec.active.first ||
        spec.active.first + spec.active.count > series.spec.active.first + series.spec.active.count)
        throw ConfigError("restrict_band: " + std::to_string(count) + " subcarriers exceed the estimated band");
    const std::size_t offset = spec.active.first - series.spec.active.first;
    ChannelFrameSeries out;
    out.spec = spec;
    out.frame_rate_hz = series.frame_rate_hz;
    out.hann_window = series.hann_window;
    out.transfer = ComplexMatrix(series.num_frames(), count);
    for (std::size_t r = 0; r < series.num_frames(); ++r)
        for (std::size_t m = 0; m < count; ++m) out.transfer(r, m) = series.transfer(r, offset + m);
    out.impulse = impulse_from_transfer(out.transfer, spec, series.hann_window);
    return out;
}

Averaged<SlowFastMatrix> average_slow_time(const SlowFastMatrix& capture, std::size_t factor) {
    check_factor(factor, capture.num_frames());
    Averaged<SlowFastMatrix> out;
    out.series.frames = block_mean(capture.frames, factor);
    out.series.frame_rate_hz = capture.frame_rate_hz / static_cast<double>(factor);
    out.series.spec = capture.spec;
    out.dropped_frames = capture.num_frames() % factor;
    return out;
}

Averaged<ChannelFrameSeries> average_slow_time(const ChannelFrameSeries& series, std::size_t factor) {
    check_factor(factor, series.num_frames());
    Averaged<ChannelFrameSeries> out;
    out.series.transfer = block_mean(series.transfer, factor);
    out.series.impulse = block_mean(series.impulse, factor);
    out.series.frame_rate_hz = series.frame_rate_hz / static_cast<double>(factor);
    out.series.spec = series.spec;
    out.series.hann_window = series.hann_window;
    out.dropped_frames = series.num_frames() % factor;
    return out;
}

}  // namespace jcv
