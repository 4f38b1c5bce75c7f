#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "partition.hpp"
#include "path.hpp"
#include "stieltjes.hpp"
#include "variation.hpp"

namespace pathcalc {

// ============================================================================
// product integral
// ============================================================================

// P(f; kappa) = prod (1 + increment of f). Zero factors are legitimate and
// make the whole product 0; log-space accumulation is used only when every
// factor is positive.
inline double partition_product(const SampledPath& f, const Partition& k) {
    if (k.is_degenerate()) return 1.0;
    bool all_positive = true;
    double prev = f.value(k[0]);
    for (std::size_t i = 1; i < k.size(); ++i) {
        const double cur = f.value(k[i]);
        if (!(1.0 + (cur - prev) > 0.0)) { all_positive = false; break; }
        prev = cur;
    }
    prev = f.value(k[0]);
    if (all_positive) {
        double ls = 0.0;
        for (std::size_t i = 1; i < k.size(); ++i) {
            const double cur = f.value(k[i]);
            ls += std::log1p(cur - prev);
            prev = cur;
        }
        return std::exp(ls);
    }
    double p = 1.0;
    for (std::size_t i = 1; i < k.size(); ++i) {
        const double cur = f.value(k[i]);
        p *= 1.0 + (cur - prev);
        prev = cur;
    }
    return p;
}

struct ProductEstimate {
    std::vector<LevelStat> per_level;
    double value = 0.0;
    bool converged = false;
    double s = 0.0, t = 0.0;
};

// product lambda-integral of (1 + d f) over [s,t]: per-level partition
// products along the traced levels
inline ProductEstimate product_lambda_integral(const SampledPath& f, const PartitionSequence& lambda,
                                               double s, double t, const ConvergenceOpts& opts = {}) {
    if (s > t) throw std::invalid_argument("product integral: need s <= t");
    const JumpSet js = f.jump_set();
    for (const auto& e : js.entries()) {
        const bool in_minus = e.t > s && e.t <= t && e.dminus == -1.0;
        const bool in_plus = e.t >= s && e.t < t && e.dplus == -1.0;
        if (in_minus || in_plus)
            throw std::invalid_argument("product integral: degenerate product, jump of -1 at t=" +
                                        std::to_string(e.t));
    }
    ProductEstimate out;
    out.s = s; out.t = t;
    for (int m = 1; m <= lambda.depth(); ++m) {
        const Partition k = trace_partition(lambda.level(m), s, t);
        out.per_level.push_back({m, k.is_degenerate() ? 0 : k.intervals(), partition_product(f, k)});
    }
    out.value = out.per_level.back().value;
    out.converged = detail::cauchy_tail(out.per_level, opts);
    return out;
}

inline ProductEstimate product_lambda_integral(const SampledPath& f, const PartitionSequence& lambda,
                                               const ConvergenceOpts& opts = {}) {
    return product_lambda_integral(f, lambda, lambda.a(), lambda.b(), opts);
}

// convergent jump factor: prod (1 + d-f) e^{-d-f} over (s,t] times
// prod (1 + d+f) e^{-d+f} over [s,t)
inline double jump_product(const SampledPath& f, double s, double t) {
    const JumpSet js = f.jump_set();
    double p = 1.0;
    for (const auto& e : js.entries()) {
        if (e.t > s && e.t <= t && e.dminus != 0.0) p *= (1.0 + e.dminus) * std::exp(-e.dminus);
        if (e.t >= s && e.t < t && e.dplus != 0.0) p *= (1.0 + e.dplus) * std::exp(-e.dplus);
    }
    return p;
}

// ============================================================================
// Doleans exponential
// ============================================================================

enum class DoleansDirection { forward, backward };

struct DoleansPath {
    SampledPath path;               // E on the finest grid, jump-decorated
    std::vector<double> jump_part;  // cumulative jump-product factor per grid point
    DoleansDirection direction = DoleansDirection::forward;
    double anchor = 0.0;            // a for forward, b for backward
};

// E_a(f; x) = exp{f(x) - f(a) - [f]^c(x)/2} prod_{[a,x]} (1+df) e^{-df}, resp.
// the backward mirror anchored at b. Jumps of E follow the first-order laws
//   d-E_a(x) = E_a(x-) d-f(x),   d+E_a(x) = E_a(x) d+f(x),
//   d-E_b(x) = -E_b(x) d-f(x),   d+E_b(x) = -E_b(x+) d+f(x),
// which is how the decorations are assembled.
inline DoleansPath doleans(const SampledPath& f, const PartitionSequence& lambda,
                           DoleansDirection dir = DoleansDirection::forward) {
    const BracketResult br = quadratic_variation(f, lambda);
    const Partition& fin = lambda.finest();
    const std::size_t n = fin.size();
    const JumpSet js = f.jump_set();

    std::vector<double> jp(n, 1.0);
    if (dir == DoleansDirection::forward) {
        // cumulative over (a, x] for d-, [a, x) for d+
        std::size_t jm = 0, jpp = 0;
        const auto& es = js.entries();
        double acc = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = fin[i];
            while (jpp < es.size() && es[jpp].t < t) {
                if (es[jpp].dplus != 0.0) acc *= (1.0 + es[jpp].dplus) * std::exp(-es[jpp].dplus);
                ++jpp;
            }
            while (jm < es.size() && es[jm].t <= t) {
                if (es[jm].t > fin.a() && es[jm].dminus != 0.0)
                    acc *= (1.0 + es[jm].dminus) * std::exp(-es[jm].dminus);
                ++jm;
            }
            jp[i] = acc;
        }
    } else {
        // backward: product over (x, b] for d-, [x, b) for d+
        for (std::size_t i = 0; i < n; ++i) jp[i] = jump_product(f, fin[i], fin.b());
    }

    std::vector<double> vals(n);
    const double fa = f.value(fin.a()), fb = f.value(fin.b());
    const double cb = br.continuous_path.value_at(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double fx = f.value(fin[i]);
        const double cx = br.continuous_path.value_at(i);
        if (dir == DoleansDirection::forward)
            vals[i] = std::exp(fx - fa - 0.5 * cx) * jp[i];
        else
            vals[i] = std::exp(fb - fx - 0.5 * (cb - cx)) * jp[i];
    }

    // decorate E's jumps from f's, via the first-order laws
    std::vector<Decoration> ds;
    for (const auto& e : js.entries()) {
        const auto& pts = fin.points();
        const std::size_t i = std::size_t(std::lower_bound(pts.begin(), pts.end(), e.t) - pts.begin());
        if (i >= n || pts[i] != e.t) continue;
        double l = vals[i], r = vals[i];
        if (dir == DoleansDirection::forward) {
            if (e.t > fin.a() && e.dminus != 0.0) l = vals[i] / (1.0 + e.dminus);
            if (e.t < fin.b() && e.dplus != 0.0) r = vals[i] * (1.0 + e.dplus);
        } else {
            if (e.t > fin.a() && e.dminus != 0.0) l = vals[i] * (1.0 + e.dminus);
            if (e.t < fin.b() && e.dplus != 0.0) r = vals[i] / (1.0 + e.dplus);
        }
        if (l != vals[i] || r != vals[i]) ds.push_back({e.t, l, r});
    }

    DoleansPath out{SampledPath::with_decorations(f.style(), fin, std::move(vals), std::move(ds)),
                    std::move(jp), dir, dir == DoleansDirection::forward ? fin.a() : fin.b()};
    return out;
}

// sup_t |E(t) - 1 - (LC) int_a^t E d f| at the finest level: how well the
// forward exponential solves its linear equation
struct LinearEquationReport {
    std::vector<double> residual;  // per finest grid point
    double sup = 0.0;
};

inline LinearEquationReport linear_equation_residual(const SampledPath& f,
                                                     const PartitionSequence& lambda) {
    const DoleansPath E = doleans(f, lambda, DoleansDirection::forward);
    const Partition& fin = lambda.finest();
    const std::vector<double> cum = cumulative_sum(E.path, f, fin, IntegralSide::left_cauchy);
    LinearEquationReport out;
    out.residual.resize(fin.size());
    for (std::size_t i = 0; i < fin.size(); ++i) {
        out.residual[i] = E.path.value_at(i) - 1.0 - cum[i];
        out.sup = std::max(out.sup, std::fabs(out.residual[i]));
    }
    return out;
}

// ============================================================================
// lambda-generator (the additive logarithm of an evolution)
// ============================================================================

struct GeneratorPath {
    SampledPath path;                    // L(t) = (LC) int_a^t U^{-1} d U
    std::vector<LevelStat> raw_sums;     // per-level sum of (U(x_i)/U(x_{i-1}) - 1)
    bool converged = false;
};

inline GeneratorPath lambda_generator(const SampledPath& U0, const PartitionSequence& lambda,
                                      const ConvergenceOpts& opts = {}) {
    if (std::fabs(U0.value(U0.a()) - 1.0) > 1e-12)
        throw std::invalid_argument("lambda_generator: not an evolution, U(a) must be 1");
    double lo = U0.values()[0];
    for (double v : U0.values()) lo = std::min(lo, v);
    for (const auto& d : U0.decorations()) lo = std::min({lo, d.left, d.right});
    if (!(lo > 0.0))
        throw std::invalid_argument("lambda_generator: not an evolution, path touches 0");

    const SampledPath inv = U0.transform([](double x) { return 1.0 / x; });
    const Partition& fin = lambda.finest();
    const std::vector<double> cum = cumulative_sum(inv, U0, fin, IntegralSide::left_cauchy);

    GeneratorPath out{SampledPath::continuous(fin, cum)};
    // decorate generator jumps: d-L = d-U/U(t-), d+L = d+U/U(t)
    std::vector<Decoration> ds;
    std::vector<double> vals = cum;
    const JumpSet js = U0.jump_set();
    for (const auto& e : js.entries()) {
        const auto& pts = fin.points();
        const std::size_t i = std::size_t(std::lower_bound(pts.begin(), pts.end(), e.t) - pts.begin());
        if (i >= fin.size() || pts[i] != e.t) continue;
        const double uv = U0.value(e.t);
        double l = vals[i], r = vals[i];
        if (e.t > fin.a() && e.dminus != 0.0) l = vals[i] - e.dminus / (uv - e.dminus);
        if (e.t < fin.b() && e.dplus != 0.0) r = vals[i] + e.dplus / uv;
        if (l != vals[i] || r != vals[i]) ds.push_back({e.t, l, r});
    }
    out.path = SampledPath::with_decorations(U0.style(), fin, std::move(vals), std::move(ds));

    for (int m = 1; m <= lambda.depth(); ++m) {
        const Partition& k = lambda.level(m);
        double s = 0.0;
        double prev = U0.value(k[0]);
        for (std::size_t i = 1; i < k.size(); ++i) {
            const double cur = U0.value(k[i]);
            s += cur / prev - 1.0;
            prev = cur;
        }
        out.raw_sums.push_back({m, k.intervals(), s});
    }
    out.converged = detail::cauchy_tail(out.raw_sums, opts);
    return out;
}

// ============================================================================
// duality: generator of the exponential, exponential of the generator
// ============================================================================

struct DualityReport {
    double gap_generator = 0.0;  // sup |L(E(g)) - g|
    double gap_product = 0.0;    // sup relative gap between Y(1 + d L) and f ratios
};

// Round trip g -> E = doleans(g) -> L = generator(E): gap_generator measures
// sup|L - g|. The product side re-builds f(t)/f(a) as the cumulative
// finest-level partition product of (1 + d L) and reports the sup ratio gap.
inline DualityReport duality_roundtrip(const SampledPath& g, const PartitionSequence& lambda) {
    DualityReport out;
    const DoleansPath E = doleans(g, lambda, DoleansDirection::forward);
    const GeneratorPath L = lambda_generator(E.path, lambda);
    const Partition& fin = lambda.finest();
    const double g0 = g.value(fin.a());
    for (std::size_t i = 0; i < fin.size(); ++i) {
        const double gap = std::fabs(L.path.value_at(i) - (g.value(fin[i]) - g0));
        out.gap_generator = std::max(out.gap_generator, gap);
    }
    // cumulative product along the finest level against the generator path
    double prod = 1.0;
    double prev = L.path.value_at(0);
    for (std::size_t i = 1; i < fin.size(); ++i) {
        const double cur = L.path.value_at(i);
        prod *= 1.0 + (cur - prev);
        prev = cur;
        const double target = E.path.value_at(i) / E.path.value_at(0);
        out.gap_product = std::max(out.gap_product, std::fabs(prod - target) / std::max(1.0, std::fabs(target)));
    }
    return out;
}

} // namespace pathcalc
