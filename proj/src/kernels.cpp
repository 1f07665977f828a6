#include <cstdlib>
#include <cstring>
#include <mutex>

#include "kernels_backends.hpp"

namespace voltspy::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Ops* pick_backend() {
    const char* forced = std::getenv("VOLTSPY_SIMD");
    if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return &scalar_ops();
#if defined(__x86_64__) || defined(_M_X64)
    if (forced != nullptr && std::strcmp(forced, "avx2") == 0 && cpu_has_avx2()) return &avx2_ops();
    if (forced == nullptr || std::strcmp(forced, "auto") == 0)
        if (cpu_has_avx2()) return &avx2_ops();
#endif
#if defined(__aarch64__)
    if (forced == nullptr || std::strcmp(forced, "auto") == 0 || std::strcmp(forced, "neon") == 0)
        return &neon_ops();
#endif
    return &scalar_ops();
}

}  // namespace

const Ops& active() {
    static const Ops* ops = pick_backend();
    return *ops;
}

std::vector<const Ops*> available() {
    std::vector<const Ops*> out{&scalar_ops()};
#if defined(__x86_64__) || defined(_M_X64)
    if (cpu_has_avx2()) out.push_back(&avx2_ops());
#endif
#if defined(__aarch64__)
    out.push_back(&neon_ops());
#endif
    return out;
}

}  // namespace voltspy::kernels
