#pragma once

#include <span>

#include "swnet/state.hpp"

namespace swnet::detail {

// In-place unnormalized FFT on 2^n points. sign = +1 uses e^{+2 pi i jk/N}.
// Plans are created once per (size, sign) under a lock; execution is
// reentrant and may run concurrently on distinct buffers.
void fft_unnormalized(std::span<cplx> data, int sign);

} // namespace swnet::detail
