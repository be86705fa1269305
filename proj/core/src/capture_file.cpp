#include "jcv/capture_file.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace jcv {
namespace {

constexpr std::array<char, 4> kMagic{'J', 'C', 'V', '1'};

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void u32(std::uint32_t v) { bytes(v, 4); }
    void u64(std::uint64_t v) { bytes(v, 8); }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void raw(const char* p, std::size_t n) { out_.write(p, static_cast<std::streamsize>(n)); }

private:
    void bytes(std::uint64_t v, int n) {
        char buf[8];
        for (int i = 0; i < n; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
        out_.write(buf, n);
    }

    std::ostream& out_;
};

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    std::uint32_t u32(const char* what) { return static_cast<std::uint32_t>(bytes(4, what)); }
    std::uint64_t u64(const char* what) { return bytes(8, what); }
    float f32(const char* what) { return std::bit_cast<float>(u32(what)); }
    double f64(const char* what) { return std::bit_cast<double>(u64(what)); }

    void raw(char* p, std::size_t n, const char* what) {
        in_.read(p, static_cast<std::streamsize>(n));
        const auto got = static_cast<std::size_t>(in_.gcount());
        if (got != n) truncated(offset_ + got, n - got, what);
        offset_ += n;
    }

    std::uint64_t offset() const { return offset_; }
    bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }

private:
    std::uint64_t bytes(std::size_t n, const char* what) {
        unsigned char buf[8];
        raw(reinterpret_cast<char*>(buf), n, what);
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
        return v;
    }

    [[noreturn]] static void truncated(std::uint64_t at, std::size_t missing, const char* what) {
        throw DataError("capture truncated at byte offset " + std::to_string(at) + " while reading " + what +
                        " (" + std::to_string(missing) + " bytes missing)");
    }

    std::istream& in_;
    std::uint64_t offset_ = 0;
};

WaveformSpec spec_from_header(const CaptureHeader& h) {
    if (h.samples_per_pulse == 0 || !(h.sample_rate_hz > 0.0))
        throw DataError("capture header: samples per pulse and sample rate must be positive");
    if (h.phase_profile > 1) throw DataError("capture header: unknown phase profile " + std::to_string(h.phase_profile));
    WaveformSpec spec;
    spec.carrier_frequency_hz = h.carrier_frequency_hz;
    spec.num_subcarriers = h.num_subcarriers;
    spec.samples_per_pulse = h.samples_per_pulse;
    spec.pulse_duration_s = static_cast<double>(h.samples_per_pulse) / h.sample_rate_hz;
    spec.active = {h.active_first, h.active_count};
    spec.phase_profile = h.phase_profile == 0 ? PhaseProfile::Quadratic : PhaseProfile::Zero;
    try {
        spec.validate();
    } catch (const ConfigError& e) {
        throw DataError(std::string("capture header: ") + e.what());
    }
    return spec;
}

}  // namespace

CaptureHeader make_capture_header(const SlowFastMatrix& capture, std::uint32_t averaging_factor,
                                  std::uint64_t seed) {
    const auto& spec = capture.spec;
    spec.validate();
    if (capture.frames.rows() > 0 && capture.frames.cols() != spec.samples_per_pulse)
        throw ConfigError("capture: frame length does not match samples_per_pulse");
    if (averaging_factor < 1) throw ConfigError("capture: averaging factor must be >= 1");
    CaptureHeader h;
    h.carrier_frequency_hz = spec.carrier_frequency_hz;
    h.sample_rate_hz = spec.sample_rate_hz();
    h.samples_per_pulse = static_cast<std::uint32_t>(spec.samples_per_pulse);
    h.frame_rate_hz = capture.frame_rate_hz;
    h.frame_count = capture.num_frames();
    h.averaging_factor = averaging_factor;
    h.num_subcarriers = static_cast<std::uint32_t>(spec.num_subcarriers);
    h.active_first = static_cast<std::uint32_t>(spec.active.first);
    h.active_count = static_cast<std::uint32_t>(spec.active.count);
    h.phase_profile = spec.phase_profile == PhaseProfile::Quadratic ? 0 : 1;
    h.seed = seed;
    return h;
}

void write_capture(std::ostream& out, const SlowFastMatrix& capture, std::uint32_t averaging_factor,
                   std::uint64_t seed) {
    const auto h = make_capture_header(capture, averaging_factor, seed);
    Writer w(out);
    w.raw(kMagic.data(), kMagic.size());
    w.u32(h.version);
    w.f64(h.carrier_frequency_hz);
    w.f64(h.sample_rate_hz);
    w.u32(h.samples_per_pulse);
    w.f64(h.frame_rate_hz);
    w.u64(h.frame_count);
    w.u32(h.averaging_factor);
    w.u32(h.num_subcarriers);
    w.u32(h.active_first);
    w.u32(h.active_count);
    w.u32(h.phase_profile);
    w.u64(h.seed);
    for (const auto& v : capture.frames.data()) {
        w.f32(static_cast<float>(v.real()));
        w.f32(static_cast<float>(v.imag()));
    }
    if (!out) throw DataError("capture: write failed");
}

CaptureFile read_capture(std::istream& in) {
    Reader r(in);
    std::array<char, 4> magic{};
    r.raw(magic.data(), magic.size(), "magic");
    if (magic != kMagic) throw DataError("capture: bad magic, not a JCV1 capture");

    CaptureFile f;
    auto& h = f.header;
    h.version = r.u32("version");
    if (h.version != kCaptureVersion)
        throw DataError("capture: unsupported format version " + std::to_string(h.version) + " (expected " +
                        std::to_string(kCaptureVersion) + ")");
    h.carrier_frequency_hz = r.f64("carrier frequency");
    h.sample_rate_hz = r.f64("sample rate");
    h.samples_per_pulse = r.u32("samples per pulse");
    h.frame_rate_hz = r.f64("frame rate");
    h.frame_count = r.u64("frame count");
    h.averaging_factor = r.u32("averaging factor");
    h.num_subcarriers = r.u32("subcarrier count");
    h.active_first = r.u32("active band start");
    h.active_count = r.u32("active band size");
    h.phase_profile = r.u32("phase profile");
    h.seed = r.u64("seed");
    if (!(h.frame_rate_hz > 0.0)) throw DataError("capture header: frame rate must be positive");
    if (h.averaging_factor < 1) throw DataError("capture header: averaging factor must be >= 1");

    f.capture.spec = spec_from_header(h);
    f.capture.frame_rate_hz = h.frame_rate_hz;
    // Guard the allocation against a corrupt frame count.
    constexpr std::uint64_t kMaxSamples = std::uint64_t{1} << 32;
    if (h.frame_count > kMaxSamples / h.samples_per_pulse)
        throw DataError("capture header: frame count " + std::to_string(h.frame_count) + " is implausible");
    f.capture.frames = ComplexMatrix(h.frame_count, h.samples_per_pulse);

    std::vector<char> row(static_cast<std::size_t>(h.samples_per_pulse) * 8);
    for (std::uint64_t n = 0; n < h.frame_count; ++n) {
        r.raw(row.data(), row.size(), "frame payload");
        auto dst = f.capture.frames.row(n);
        for (std::size_t c = 0; c < dst.size(); ++c) {
            std::uint32_t re = 0;
            std::uint32_t im = 0;
            for (int b = 0; b < 4; ++b) {
                re |= static_cast<std::uint32_t>(static_cast<unsigned char>(row[8 * c + b])) << (8 * b);
                im |= static_cast<std::uint32_t>(static_cast<unsigned char>(row[8 * c + 4 + b])) << (8 * b);
            }
            dst[c] = {std::bit_cast<float>(re), std::bit_cast<float>(im)};
        }
    }
    if (!r.at_end())
        throw DataError("capture: trailing bytes after byte offset " + std::to_string(r.offset()) +
                        "; header declares " + std::to_string(h.frame_count) + " frames");
    return f;
}

void write_capture_file(const std::filesystem::path& path, const SlowFastMatrix& capture,
                        std::uint32_t averaging_factor, std::uint64_t seed) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    write_capture(out, capture, averaging_factor, seed);
}

CaptureFile read_capture_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open capture " + path.string());
    return read_capture(in);
}

}  // namespace jcv
