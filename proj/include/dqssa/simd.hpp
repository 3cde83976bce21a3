#pragma once

// Data-parallel kernels behind the swarm position updates and PageRank.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant selected at runtime. The elementwise kernels perform the same
// IEEE operations in the same order in both variants (no FMA contraction),
// so they agree bit for bit and the optimizers stay reproducible across
// machines. Reductions may differ in the last bits.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace dqssa::simd {

using CSpan = std::span<const double>;
using MSpan = std::span<double>;

struct KernelTable {
    std::string_view name;

    // x = min(max(x, lo), hi)
    void (*clamp)(MSpan x, CSpan lo, CSpan hi);

    // out = clamp(mu * (hi - lo) - x), or mu * (hi + lo) - x when sum_form.
    void (*reverse_learning)(CSpan x, CSpan lo, CSpan hi, double mu, bool sum_form, MSpan out);

    // out = clamp(upward[j] ? x + sigma * (hi - x) : x + sigma * (x - lo))
    void (*quantum_mutation)(CSpan x, CSpan lo, CSpan hi, std::span<const std::uint8_t> upward,
                             double sigma, MSpan out);

    // out = clamp(c3 < 0.5 ? food + c1 * ((hi - lo) * c2 + lo)
    //                      : food - c1 * ((hi - lo) * c2 + lo))
    void (*salp_leader)(CSpan food, CSpan lo, CSpan hi, CSpan c2, CSpan c3, double c1, MSpan out);

    // x = clamp((x + prev) * 0.5)
    void (*salp_follower)(MSpan x, CSpan prev, CSpan lo, CSpan hi);

    // v = clamp(w*v + (c1*r1)*(pbest - x) + (c2*r2)*(gbest - x), -vmax, vmax)
    // x = clamp(x + v)
    void (*pso_step)(MSpan x, MSpan v, CSpan pbest, CSpan gbest, CSpan r1, CSpan r2, double w,
                     double c1, double c2, CSpan vmax, CSpan lo, CSpan hi);

    // v = clamp(v + (x - best) * freq, -vmax, vmax); x = clamp(x + v)
    void (*bat_step)(MSpan x, MSpan v, CSpan best, double freq, CSpan vmax, CSpan lo, CSpan hi);

    // out = a * b
    void (*multiply)(CSpan a, CSpan b, MSpan out);

    // sum |a - b|
    double (*l1_distance)(CSpan a, CSpan b);

    // sum a
    double (*sum)(CSpan a);
};

const KernelTable &scalar_kernels();

// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2.
const KernelTable *avx2_kernels();

// The table in use: AVX2 when available unless DQSSA_SIMD=scalar is set.
const KernelTable &kernels();

} // namespace dqssa::simd
