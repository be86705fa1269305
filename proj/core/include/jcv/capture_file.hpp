#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "jcv/channel.hpp"

namespace jcv {

inline constexpr std::uint32_t kCaptureVersion = 1;

/// Fixed-size little-endian header that precedes the I/Q payload.
///
///   off  size  field
///     0     4  magic "JCV1"
///     4     4  u32 format version
///     8     8  f64 carrier frequency, Hz
///    16     8  f64 fast-time sample rate, Hz
///    24     4  u32 samples per pulse
///    28     8  f64 frame rate, Hz
///    36     8  u64 frame count
///    44     4  u32 averaging factor to apply when processing
///    48     4  u32 number of subcarriers
///    52     4  u32 first active subcarrier
///    56     4  u32 active subcarrier count
///    60     4  u32 phase profile (0 quadratic, 1 zero)
///    64     8  u64 simulation seed
///    72        payload: frame_count * samples_per_pulse (f32 I, f32 Q)
struct CaptureHeader {
    std::uint32_t version = kCaptureVersion;
    double carrier_frequency_hz = 0.0;
    double sample_rate_hz = 0.0;
    std::uint32_t samples_per_pulse = 0;
    double frame_rate_hz = 0.0;
    std::uint64_t frame_count = 0;
    std::uint32_t averaging_factor = 1;
    std::uint32_t num_subcarriers = 0;
    std::uint32_t active_first = 0;
    std::uint32_t active_count = 0;
    std::uint32_t phase_profile = 0;
    std::uint64_t seed = 0;

    bool operator==(const CaptureHeader&) const = default;
};

inline constexpr std::size_t kCaptureHeaderBytes = 72;

struct CaptureFile {
    CaptureHeader header;
    SlowFastMatrix capture;
};

CaptureHeader make_capture_header(const SlowFastMatrix& capture, std::uint32_t averaging_factor,
                                  std::uint64_t seed);

/// Samples are stored as 32-bit floats; the matrix read back holds exactly
/// those values, so write(read(x)) reproduces x byte for byte.
void write_capture(std::ostream& out, const SlowFastMatrix& capture, std::uint32_t averaging_factor = 1,
                   std::uint64_t seed = 0);
CaptureFile read_capture(std::istream& in);

void write_capture_file(const std::filesystem::path& path, const SlowFastMatrix& capture,
                        std::uint32_t averaging_factor = 1, std::uint64_t seed = 0);
CaptureFile read_capture_file(const std::filesystem::path& path);

}  // namespace jcv
