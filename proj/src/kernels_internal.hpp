// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "uwbhar/kernels.hpp"

namespace uwbhar::kern {

#if defined(__x86_64__) || defined(_M_X64)
// Defined in kernels_avx2.cpp. Returns nullptr when the CPU lacks AVX2/FMA.
const Ops* avx2_ops_if_supported();
#elif defined(__aarch64__)
// Defined in kernels_neon.cpp. NEON is baseline on aarch64.
const Ops& neon_ops();
#endif

}  // namespace uwbhar::kern
