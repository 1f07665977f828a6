#pragma once

#include "voltspy/kernels.hpp"

// Internal: backend tables defined in per-ISA translation units. Only the
// dispatcher includes this.
namespace voltspy::kernels {

#if defined(__x86_64__) || defined(_M_X64)
const Ops& avx2_ops();
#endif

#if defined(__aarch64__)
const Ops& neon_ops();
#endif

}  // namespace voltspy::kernels
