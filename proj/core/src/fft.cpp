#include "jcv/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace jcv::fft {
namespace {

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// The FFTW planner is not thread safe; fftw_execute_dft is.
fftw_plan plan_for(std::size_t n, int sign) {
    static std::mutex mutex;
    static std::map<std::pair<std::size_t, int>, PlanHandle> cache;

    std::lock_guard lock(mutex);
    auto& slot = cache[{n, sign}];
    if (!slot) {
        auto* in = fftw_alloc_complex(n);
        auto* out = fftw_alloc_complex(n);
        slot.reset(fftw_plan_dft_1d(static_cast<int>(n), in, out, sign,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED));
        fftw_free(in);
        fftw_free(out);
        if (!slot) throw std::runtime_error("fftw: plan creation failed");
    }
    return slot.get();
}

void run(std::span<const cd> in, std::span<cd> out, int sign) {
    if (in.size() != out.size()) throw std::invalid_argument("fft: size mismatch");
    if (in.empty()) return;
    // FFTW plans are out-of-place here; copy when the caller aliases.
    std::vector<cd> scratch;
    const cd* src = in.data();
    if (src == out.data()) {
        scratch.assign(in.begin(), in.end());
        src = scratch.data();
    }
    fftw_execute_dft(plan_for(in.size(), sign),
                     reinterpret_cast<fftw_complex*>(const_cast<cd*>(src)),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

void forward(std::span<const cd> in, std::span<cd> out) { run(in, out, FFTW_FORWARD); }
void inverse(std::span<const cd> in, std::span<cd> out) { run(in, out, FFTW_BACKWARD); }

std::vector<cd> forward(std::span<const cd> in) {
    std::vector<cd> out(in.size());
    forward(in, out);
    return out;
}

std::vector<cd> inverse(std::span<const cd> in) {
    std::vector<cd> out(in.size());
    inverse(in, out);
    return out;
}

const char* backend_version() { return fftw_version; }

}  // namespace jcv::fft
