// AVX2 variants. Built with -mavx2 and selected only after a CPUID check.

#include "dqssa/simd.hpp"

#if defined(DQSSA_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>

namespace dqssa::simd {
namespace {

constexpr std::size_t W = 4;

inline double clip1(double x, double lo, double hi) {
    double t = x > lo ? x : lo;
    return t < hi ? t : hi;
}

inline __m256d clip(__m256d x, __m256d lo, __m256d hi) {
    return _mm256_min_pd(_mm256_max_pd(x, lo), hi);
}

inline __m256d negate(__m256d x) { return _mm256_xor_pd(x, _mm256_set1_pd(-0.0)); }

// Four uint8 flags -> all-ones lanes where the flag is non-zero.
inline __m256d flag_mask(const std::uint8_t *p) {
    std::uint32_t bits;
    __builtin_memcpy(&bits, p, sizeof bits);
    __m256i wide = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(static_cast<int>(bits)));
    __m256i zero = _mm256_cmpeq_epi64(wide, _mm256_setzero_si256());
    return _mm256_castsi256_pd(_mm256_xor_si256(zero, _mm256_set1_epi64x(-1)));
}

void clamp(MSpan x, CSpan lo, CSpan hi) {
    std::size_t j = 0;
    for (; j + W <= x.size(); j += W) {
        __m256d r = clip(_mm256_loadu_pd(&x[j]), _mm256_loadu_pd(&lo[j]), _mm256_loadu_pd(&hi[j]));
        _mm256_storeu_pd(&x[j], r);
    }
    for (; j < x.size(); ++j)
        x[j] = clip1(x[j], lo[j], hi[j]);
}

void reverse_learning(CSpan x, CSpan lo, CSpan hi, double mu, bool sum_form, MSpan out) {
    const __m256d vmu = _mm256_set1_pd(mu);
    std::size_t j = 0;
    for (; j + W <= x.size(); j += W) {
        __m256d l = _mm256_loadu_pd(&lo[j]), h = _mm256_loadu_pd(&hi[j]);
        __m256d span = sum_form ? _mm256_add_pd(h, l) : _mm256_sub_pd(h, l);
        __m256d r = _mm256_sub_pd(_mm256_mul_pd(vmu, span), _mm256_loadu_pd(&x[j]));
        _mm256_storeu_pd(&out[j], clip(r, l, h));
    }
    for (; j < x.size(); ++j) {
        double span = sum_form ? hi[j] + lo[j] : hi[j] - lo[j];
        out[j] = clip1(mu * span - x[j], lo[j], hi[j]);
    }
}

void quantum_mutation(CSpan x, CSpan lo, CSpan hi, std::span<const std::uint8_t> upward,
                      double sigma, MSpan out) {
    const __m256d vs = _mm256_set1_pd(sigma);
    std::size_t j = 0;
    for (; j + W <= x.size(); j += W) {
        __m256d xv = _mm256_loadu_pd(&x[j]);
        __m256d l = _mm256_loadu_pd(&lo[j]), h = _mm256_loadu_pd(&hi[j]);
        __m256d up = _mm256_mul_pd(vs, _mm256_sub_pd(h, xv));
        __m256d down = _mm256_mul_pd(vs, _mm256_sub_pd(xv, l));
        __m256d step = _mm256_blendv_pd(down, up, flag_mask(&upward[j]));
        _mm256_storeu_pd(&out[j], clip(_mm256_add_pd(xv, step), l, h));
    }
    for (; j < x.size(); ++j) {
        double step = upward[j] ? sigma * (hi[j] - x[j]) : sigma * (x[j] - lo[j]);
        out[j] = clip1(x[j] + step, lo[j], hi[j]);
    }
}

void salp_leader(CSpan food, CSpan lo, CSpan hi, CSpan c2, CSpan c3, double c1, MSpan out) {
    const __m256d vc1 = _mm256_set1_pd(c1), half = _mm256_set1_pd(0.5);
    std::size_t j = 0;
    for (; j + W <= food.size(); j += W) {
        __m256d l = _mm256_loadu_pd(&lo[j]), h = _mm256_loadu_pd(&hi[j]);
        __m256d f = _mm256_loadu_pd(&food[j]);
        __m256d inner = _mm256_add_pd(_mm256_mul_pd(_mm256_sub_pd(h, l), _mm256_loadu_pd(&c2[j])), l);
        __m256d step = _mm256_mul_pd(vc1, inner);
        __m256d below = _mm256_cmp_pd(_mm256_loadu_pd(&c3[j]), half, _CMP_LT_OQ);
        __m256d x = _mm256_blendv_pd(_mm256_sub_pd(f, step), _mm256_add_pd(f, step), below);
        _mm256_storeu_pd(&out[j], clip(x, l, h));
    }
    for (; j < food.size(); ++j) {
        double step = c1 * ((hi[j] - lo[j]) * c2[j] + lo[j]);
        double x = c3[j] < 0.5 ? food[j] + step : food[j] - step;
        out[j] = clip1(x, lo[j], hi[j]);
    }
}

void salp_follower(MSpan x, CSpan prev, CSpan lo, CSpan hi) {
    const __m256d half = _mm256_set1_pd(0.5);
    std::size_t j = 0;
    for (; j + W <= x.size(); j += W) {
        __m256d m = _mm256_mul_pd(_mm256_add_pd(_mm256_loadu_pd(&x[j]), _mm256_loadu_pd(&prev[j])), half);
        _mm256_storeu_pd(&x[j], clip(m, _mm256_loadu_pd(&lo[j]), _mm256_loadu_pd(&hi[j])));
    }
    for (; j < x.size(); ++j)
        x[j] = clip1((x[j] + prev[j]) * 0.5, lo[j], hi[j]);
}

void pso_step(MSpan x, MSpan v, CSpan pbest, CSpan gbest, CSpan r1, CSpan r2, double w,
              double c1, double c2, CSpan vmax, CSpan lo, CSpan hi) {
    const __m256d vw = _mm256_set1_pd(w), vc1 = _mm256_set1_pd(c1), vc2 = _mm256_set1_pd(c2);
    std::size_t j = 0;
    for (; j + W <= x.size(); j += W) {
        __m256d xv = _mm256_loadu_pd(&x[j]);
        __m256d cognitive = _mm256_mul_pd(_mm256_mul_pd(vc1, _mm256_loadu_pd(&r1[j])),
                                          _mm256_sub_pd(_mm256_loadu_pd(&pbest[j]), xv));
        __m256d social = _mm256_mul_pd(_mm256_mul_pd(vc2, _mm256_loadu_pd(&r2[j])),
                                       _mm256_sub_pd(_mm256_loadu_pd(&gbest[j]), xv));
        __m256d vel = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(vw, _mm256_loadu_pd(&v[j])), cognitive),
                                    social);
        __m256d vm = _mm256_loadu_pd(&vmax[j]);
        vel = clip(vel, negate(vm), vm);
        _mm256_storeu_pd(&v[j], vel);
        _mm256_storeu_pd(&x[j], clip(_mm256_add_pd(xv, vel), _mm256_loadu_pd(&lo[j]),
                                     _mm256_loadu_pd(&hi[j])));
    }
    for (; j < x.size(); ++j) {
        double cognitive = (c1 * r1[j]) * (pbest[j] - x[j]);
        double social = (c2 * r2[j]) * (gbest[j] - x[j]);
        double vel = clip1((w * v[j] + cognitive) + social, -vmax[j], vmax[j]);
        v[j] = vel;
        x[j] = clip1(x[j] + vel, lo[j], hi[j]);
    }
}

void bat_step(MSpan x, MSpan v, CSpan best, double freq, CSpan vmax, CSpan lo, CSpan hi) {
    const __m256d vf = _mm256_set1_pd(freq);
    std::size_t j = 0;
    for (; j + W <= x.size(); j += W) {
        __m256d xv = _mm256_loadu_pd(&x[j]);
        __m256d vm = _mm256_loadu_pd(&vmax[j]);
        __m256d vel = _mm256_add_pd(_mm256_loadu_pd(&v[j]),
                                    _mm256_mul_pd(_mm256_sub_pd(xv, _mm256_loadu_pd(&best[j])), vf));
        vel = clip(vel, negate(vm), vm);
        _mm256_storeu_pd(&v[j], vel);
        _mm256_storeu_pd(&x[j], clip(_mm256_add_pd(xv, vel), _mm256_loadu_pd(&lo[j]),
                                     _mm256_loadu_pd(&hi[j])));
    }
    for (; j < x.size(); ++j) {
        double vel = clip1(v[j] + (x[j] - best[j]) * freq, -vmax[j], vmax[j]);
        v[j] = vel;
        x[j] = clip1(x[j] + vel, lo[j], hi[j]);
    }
}

void multiply(CSpan a, CSpan b, MSpan out) {
    std::size_t i = 0;
    for (; i + W <= a.size(); i += W)
        _mm256_storeu_pd(&out[i], _mm256_mul_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i])));
    for (; i < a.size(); ++i)
        out[i] = a[i] * b[i];
}

double horizontal_sum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v), hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double l1_distance(CSpan a, CSpan b) {
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + W <= a.size(); i += W) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i]));
        acc = _mm256_add_pd(acc, _mm256_and_pd(d, abs_mask));
    }
    double s = horizontal_sum(acc);
    for (; i < a.size(); ++i)
        s += std::abs(a[i] - b[i]);
    return s;
}

double sum(CSpan a) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + W <= a.size(); i += W)
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(&a[i]));
    double s = horizontal_sum(acc);
    for (; i < a.size(); ++i)
        s += a[i];
    return s;
}

} // namespace

const KernelTable &avx2_table() {
    static const KernelTable table{
        "avx2",   clamp,    reverse_learning, quantum_mutation, salp_leader, salp_follower,
        pso_step, bat_step, multiply,         l1_distance,      sum,
    };
    return table;
}

} // namespace dqssa::simd

#endif
