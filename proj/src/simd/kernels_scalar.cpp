#include "dqssa/simd.hpp"

#include <cmath>

namespace dqssa::simd {
namespace {

// Same selection rule as maxpd/minpd, including for signed zeros and NaN.
inline double clip(double x, double lo, double hi) {
    double t = x > lo ? x : lo;
    return t < hi ? t : hi;
}

void clamp(MSpan x, CSpan lo, CSpan hi) {
    for (std::size_t j = 0; j < x.size(); ++j)
        x[j] = clip(x[j], lo[j], hi[j]);
}

void reverse_learning(CSpan x, CSpan lo, CSpan hi, double mu, bool sum_form, MSpan out) {
    for (std::size_t j = 0; j < x.size(); ++j) {
        double span = sum_form ? hi[j] + lo[j] : hi[j] - lo[j];
        out[j] = clip(mu * span - x[j], lo[j], hi[j]);
    }
}

void quantum_mutation(CSpan x, CSpan lo, CSpan hi, std::span<const std::uint8_t> upward,
                      double sigma, MSpan out) {
    for (std::size_t j = 0; j < x.size(); ++j) {
        double step = upward[j] ? sigma * (hi[j] - x[j]) : sigma * (x[j] - lo[j]);
        out[j] = clip(x[j] + step, lo[j], hi[j]);
    }
}

void salp_leader(CSpan food, CSpan lo, CSpan hi, CSpan c2, CSpan c3, double c1, MSpan out) {
    for (std::size_t j = 0; j < food.size(); ++j) {
        double step = c1 * ((hi[j] - lo[j]) * c2[j] + lo[j]);
        double x = c3[j] < 0.5 ? food[j] + step : food[j] - step;
        out[j] = clip(x, lo[j], hi[j]);
    }
}

void salp_follower(MSpan x, CSpan prev, CSpan lo, CSpan hi) {
    for (std::size_t j = 0; j < x.size(); ++j)
        x[j] = clip((x[j] + prev[j]) * 0.5, lo[j], hi[j]);
}

void pso_step(MSpan x, MSpan v, CSpan pbest, CSpan gbest, CSpan r1, CSpan r2, double w,
              double c1, double c2, CSpan vmax, CSpan lo, CSpan hi) {
    for (std::size_t j = 0; j < x.size(); ++j) {
        double cognitive = (c1 * r1[j]) * (pbest[j] - x[j]);
        double social = (c2 * r2[j]) * (gbest[j] - x[j]);
        double vel = (w * v[j] + cognitive) + social;
        vel = clip(vel, -vmax[j], vmax[j]);
        v[j] = vel;
        x[j] = clip(x[j] + vel, lo[j], hi[j]);
    }
}

void bat_step(MSpan x, MSpan v, CSpan best, double freq, CSpan vmax, CSpan lo, CSpan hi) {
    for (std::size_t j = 0; j < x.size(); ++j) {
        double vel = clip(v[j] + (x[j] - best[j]) * freq, -vmax[j], vmax[j]);
        v[j] = vel;
        x[j] = clip(x[j] + vel, lo[j], hi[j]);
    }
}

void multiply(CSpan a, CSpan b, MSpan out) {
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = a[i] * b[i];
}

double l1_distance(CSpan a, CSpan b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += std::abs(a[i] - b[i]);
    return s;
}

double sum(CSpan a) {
    double s = 0.0;
    for (double x : a)
        s += x;
    return s;
}

} // namespace

const KernelTable &scalar_kernels() {
    static const KernelTable table{
        "scalar",      clamp,    reverse_learning, quantum_mutation, salp_leader, salp_follower,
        pso_step,      bat_step, multiply,         l1_distance,      sum,
    };
    return table;
}

} // namespace dqssa::simd
