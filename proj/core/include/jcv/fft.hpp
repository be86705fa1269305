#pragma once

#include <span>
#include <vector>

#include "jcv/common.hpp"

namespace jcv::fft {

// Unnormalized transforms backed by FFTW. Plans are cached per (size,
// direction) and shared between threads; execution is reentrant.

/// X[k] = sum_n x[n] exp(-j 2 pi k n / N)
std::vector<cd> forward(std::span<const cd> in);

/// x[n] = sum_k X[k] exp(+j 2 pi k n / N)
std::vector<cd> inverse(std::span<const cd> in);

void forward(std::span<const cd> in, std::span<cd> out);
void inverse(std::span<const cd> in, std::span<cd> out);

/// Backend identification string, recorded in run manifests.
const char* backend_version();

}  // namespace jcv::fft
