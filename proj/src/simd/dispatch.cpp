#include "dqssa/simd.hpp"

#include <cstdlib>
#include <string_view>

namespace dqssa::simd {

#if defined(DQSSA_HAVE_AVX2)
const KernelTable &avx2_table();
#endif

const KernelTable *avx2_kernels() {
#if defined(DQSSA_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? &avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable &kernels() {
    static const KernelTable *active = [] {
        const char *env = std::getenv("DQSSA_SIMD");
        if (env && std::string_view(env) == "scalar")
            return &scalar_kernels();
        if (auto *t = avx2_kernels())
            return t;
        return &scalar_kernels();
    }();
    return *active;
}

} // namespace dqssa::simd
