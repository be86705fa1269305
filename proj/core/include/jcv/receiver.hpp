#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "jcv/channel.hpp"
#include "jcv/common.hpp"
#include "jcv/waveform.hpp"

namespace jcv {

/// Channel transfer function H (slow time x active subcarriers) and the
/// matching impulse response (slow time x delay bins).
struct ChannelFrameSeries {
    ComplexMatrix transfer;
    ComplexMatrix impulse;
    double frame_rate_hz = 0.0;
    WaveformSpec spec;
    bool hann_window = false;

    std::size_t num_frames() const { return transfer.rows(); }
};

struct EstimateOptions {
    /// Hann taper across the active band before the inverse transform.
    bool hann_window = false;
};

/// Per-frame H_k = Y_k / X_k over the active band, then an inverse DFT over
/// the frequency axis. A point reflector of amplitude a yields an impulse
/// peak of magnitude a.
ChannelFrameSeries estimate_channel(const SlowFastMatrix& capture, const BasebandSymbol& symbol,
                                    const EstimateOptions& options = {});

/// Impulse response rows from transfer rows (zero-filled outside the band).
ComplexMatrix impulse_from_transfer(const ComplexMatrix& transfer, const WaveformSpec& spec,
                                    bool hann_window);

/// Unwindowed impulse response of one transfer row evaluated at a fractional
/// delay bin (band-limited interpolation of the impulse row).
cd impulse_at(std::span<const cd> transfer_row, const WaveformSpec& spec, double delay_bin);

/// Keep only the centered `count` subcarriers of an estimate, as if the
/// remaining ones had not been used. The impulse response is recomputed.
ChannelFrameSeries restrict_band(const ChannelFrameSeries& series, std::size_t count);

template <typename Series>
struct Averaged {
    Series series;
    std::size_t dropped_frames = 0;
};

/// Coherent mean over consecutive blocks of `factor` frames. Trailing frames
/// that do not fill a block are dropped and counted.
Averaged<SlowFastMatrix> average_slow_time(const SlowFastMatrix& capture, std::size_t factor);

/// Same block averaging applied to channel estimates instead of raw frames.
Averaged<ChannelFrameSeries> average_slow_time(const ChannelFrameSeries& series, std::size_t factor);

}  // namespace jcv
