#pragma once

// Independent oracles and frozen reference values for the test suite.
// Everything in here is deliberately written against raw vectors, not the
// library types, so a bug in the library cannot leak into its own oracle.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace oracle {

// ---------------------------------------------------------------------------
// frozen reference values
// ---------------------------------------------------------------------------

// p-variation of the value sequence (0, 1, 0.5) at p = 2:
// best sub-partition is the full grid, 1^2 + 0.5^2.
inline constexpr double kPvar_01h_p2 = 1.25;

// p-variation of (0, 1, 0, 1) at p = 3: full grid, 1 + 1 + 1.
inline constexpr double kPvar_0101_p3 = 3.0;

// left-endpoint sum of f against itself for values (0, 1, 0.5) on the full
// grid: 0*(1-0) + 1*(0.5-1) = -0.5.
inline constexpr double kLcSum_01h = -0.5;

// standard normal CDF at +1 / -1 (published values, 16 digits).
inline constexpr double kPhiOf1 = 0.8413447460685429;
inline constexpr double kPhiOfMinus1 = 0.15865525393145707;

// classical European call reference: S=100, K=100, r=0.05, sigma=0.2, T=1.
inline constexpr double kBsCallRef = 10.450583572185565;

// binomial price for m=1 and increments (+1/2, -1/2): (1, 1.5, 0.75).
inline constexpr double kBinomM1[3] = {1.0, 1.5, 0.75};

// forward Doleans value at t=1 of the step path with left jumps
// +0.5 @ 0.25, -0.25 @ 0.5, +0.1 @ 0.75: product (1.5)(0.75)(1.1).
inline const double kDoleansStep1 = 1.5 * 0.75 * 1.1;

// two-sample Kolmogorov-Smirnov critical coefficient at the 1% level.
inline constexpr double kKs2Coeff1pct = 1.628;

// ---------------------------------------------------------------------------
// exhaustive p-variation
// ---------------------------------------------------------------------------

// Enumerates every sub-partition of the index grid (endpoints always kept)
// and returns the maximal sum of |increment|^p. Left-to-right accumulation,
// so a DP that walks the same way is comparable bit for bit. Only meant for
// small n (cost 2^(n-2) subsets).
inline double pvar_exhaustive(const std::vector<double>& v, double p) {
    const std::size_t n = v.size();
    if (n < 2) return 0.0;
    const std::size_t interior = n - 2;
    double best = 0.0;
    const std::uint64_t subsets = std::uint64_t(1) << interior;
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
        double sum = 0.0;
        double prev = v[0];
        for (std::size_t j = 0; j < interior; ++j) {
            if (mask & (std::uint64_t(1) << j)) {
                sum += std::pow(std::fabs(v[j + 1] - prev), p);
                prev = v[j + 1];
            }
        }
        sum += std::pow(std::fabs(v[n - 1] - prev), p);
        if (sum > best) best = sum;
    }
    return best;
}

// ---------------------------------------------------------------------------
// Kono self-affine function, direct series form
// ---------------------------------------------------------------------------

// w(t) for t given by its base-r digit expansion, evaluated straight from the
// series sum_{n>=1} y_{n-1} s(digit_n) r^{-nH} with s(j) = x(0)+...+x(j-1),
// y_n = prod_{k<=n} x(digit_k). Independent of the library's block recursion.
inline double kono_series(int r, double H, const std::vector<int>& x,
                          const std::vector<int>& digits) {
    std::vector<double> s(static_cast<std::size_t>(r) + 1, 0.0);
    for (int j = 1; j <= r; ++j) s[j] = s[j - 1] + x[j - 1];
    double y = 1.0;
    double w = 0.0;
    for (std::size_t n = 0; n < digits.size(); ++n) {
        const double scale = std::pow(double(r), -H * double(n + 1));
        w += y * s[digits[n]] * scale;
        y *= x[digits[n]];
    }
    return w;
}

// base-r digits of i / r^depth, most significant first.
inline std::vector<int> base_digits(std::uint64_t i, int r, int depth) {
    std::vector<int> d(depth, 0);
    for (int k = depth - 1; k >= 0; --k) {
        d[k] = int(i % std::uint64_t(r));
        i /= std::uint64_t(r);
    }
    return d;
}

// ---------------------------------------------------------------------------
// step-path telescopes
// ---------------------------------------------------------------------------

// product of (1 + jump) over a left-jump sequence: the exact forward Doleans
// value of a pure step path once every jump sits on the grid.
inline double step_doleans(const std::vector<double>& jumps) {
    double p = 1.0;
    for (double j : jumps) p *= 1.0 + j;
    return p;
}

// ---------------------------------------------------------------------------
// small numeric helpers used by several tests
// ---------------------------------------------------------------------------

inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= double(n); my /= double(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

inline double ks2_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) ++i; else ++j;
        const double fa = double(i) / double(a.size());
        const double fb = double(j) / double(b.size());
        d = std::max(d, std::fabs(fa - fb));
    }
    return d;
}

} // namespace oracle
