#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "twophoton/parallel.hpp"

namespace twophoton {

// Pairwise (cascade) summation. The split points depend only on the length,
// so the result is reproducible bit for bit.
double pairwise_sum(std::span<const double> v);
std::complex<double> pairwise_sum(std::span<const std::complex<double>> v);

// Pairwise sum of term(i) for i in [0, n) without materializing the terms.
template <class T, class F>
T pairwise_sum_of(std::size_t begin, std::size_t end, const F& term) {
    constexpr std::size_t kLeaf = 64;
    if (end - begin <= kLeaf) {
        T acc{};
        for (std::size_t i = begin; i < end; ++i) acc += term(i);
        return acc;
    }
    const std::size_t mid = begin + (end - begin) / 2;
    return pairwise_sum_of<T>(begin, mid, term) + pairwise_sum_of<T>(mid, end, term);
}

// Sum of term(i), i in [0, n), evaluated in parallel over fixed-size blocks.
// Block boundaries do not depend on the thread count, so neither does the result.
template <class T, class F>
T parallel_pairwise_sum(std::size_t n, const F& term) {
    constexpr std::size_t kBlock = 8192;
    const std::size_t blocks = (n + kBlock - 1) / kBlock;
    std::vector<T> partial(blocks);
    parallel_for(blocks, [&](std::size_t b0, std::size_t b1) {
        for (std::size_t b = b0; b < b1; ++b)
            partial[b] = pairwise_sum_of<T>(b * kBlock, std::min(n, (b + 1) * kBlock), term);
    });
    return pairwise_sum_of<T>(0, blocks, [&](std::size_t b) { return partial[b]; });
}

// Controls the numerical transform of a spectral profile.
struct TransformOptions {
    double span_halfwidths = 50.0;   // body covers |x| <= span_halfwidths * halfwidth
    std::size_t body_points = 100001;  // Simpson nodes, odd
    bool tail_correction = true;     // add |x| beyond the body (non-compact profiles)
};

// Composite Simpson rule for f on [a, b] with n (odd) nodes.
double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n);

// Integral of p(x) cos(x tau) over the real line for an even profile p.
// The body [-X, X] uses composite Simpson; beyond X the tails are added with
// double-exponential rules (Ooura's method for tau != 0). For compact
// profiles X is the support edge and no tail is added.
double even_cosine_transform(const std::function<double(double)>& p, double tau,
                             double body_halfwidth, bool compact,
                             const TransformOptions& opt = {});

}  // namespace twophoton
