#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "partition.hpp"
#include "path.hpp"

namespace pathcalc {

// ============================================================================
// partition sums
// ============================================================================

// s_p(f; kappa) = sum |f(x_i) - f(x_{i-1})|^p
inline double sp_sum(const SampledPath& f, const Partition& k, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("sp_sum: p must be positive");
    if (k.is_degenerate()) return 0.0;
    double acc = 0.0;
    double prev = f.value(k[0]);
    for (std::size_t i = 1; i < k.size(); ++i) {
        const double cur = f.value(k[i]);
        const double d = std::fabs(cur - prev);
        acc += (p == 2.0) ? d * d : (p == 1.0 ? d : std::pow(d, p));
        prev = cur;
    }
    return acc;
}

// C(f,g; kappa) = sum (increment of f)(increment of g), signed
inline double covariation_sum(const SampledPath& f, const SampledPath& g, const Partition& k) {
    if (k.is_degenerate()) return 0.0;
    double acc = 0.0;
    double pf = f.value(k[0]), pg = g.value(k[0]);
    for (std::size_t i = 1; i < k.size(); ++i) {
        const double cf = f.value(k[i]), cg = g.value(k[i]);
        acc += (cf - pf) * (cg - pg);
        pf = cf; pg = cg;
    }
    return acc;
}

// ============================================================================
// p-variation
// ============================================================================

struct PVariation {
    double value = 0.0;
    double p = 0.0;
    // true: supremum over sub-partitions of the grid (p >= 1 dynamic program);
    // false: p < 1, the reported number is just the finest-grid partition sum
    bool sup_over_subpartitions = true;
};

namespace detail {

// indices of points that can appear in an optimal partition for p >= 1:
// endpoints plus strict direction changes (merging a monotone run never
// lowers the sum since (a+b)^p >= a^p + b^p for a,b >= 0)
inline std::vector<std::size_t> extrema_indices(const std::vector<double>& v) {
    std::vector<std::size_t> idx;
    idx.push_back(0);
    int dir = 0;  // -1 falling, +1 rising
    for (std::size_t i = 1; i < v.size(); ++i) {
        const double d = v[i] - v[i - 1];
        if (d == 0.0) continue;
        const int s = d > 0.0 ? 1 : -1;
        if (dir != 0 && s != dir) idx.push_back(i - 1);
        dir = s;
    }
    if (idx.back() != v.size() - 1) idx.push_back(v.size() - 1);
    return idx;
}

inline double pvar_dp(const std::vector<double>& v, double p) {
    const std::size_t n = v.size();
    std::vector<double> best(n, 0.0);
    for (std::size_t j = 1; j < n; ++j) {
        double m = 0.0;
        for (std::size_t i = 0; i < j; ++i) {
            const double cand = best[i] + std::pow(std::fabs(v[j] - v[i]), p);
            if (cand > m) m = cand;
        }
        best[j] = m;
    }
    return best[n - 1];
}

} // namespace detail

// v_p(f) over sub-partitions of f's own grid. The local-extrema pruning only
// kicks in above a size threshold so that small inputs take the exact same
// float paths as an exhaustive enumeration.
inline PVariation p_variation(const SampledPath& f, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("p_variation: p must be positive");
    PVariation out;
    out.p = p;
    if (p < 1.0) {
        out.value = sp_sum(f, f.grid(), p);
        out.sup_over_subpartitions = false;
        return out;
    }
    const auto& v = f.values();
    if (v.size() <= 64) {
        out.value = detail::pvar_dp(v, p);
        return out;
    }
    const auto idx = detail::extrema_indices(v);
    std::vector<double> w(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) w[i] = v[idx[i]];
    out.value = detail::pvar_dp(w, p);
    return out;
}

// sigma_p: sum of |jump|^p over both one-sided jump families
inline double sigma_p(const SampledPath& f, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("sigma_p: p must be positive");
    const JumpSet js = f.jump_set();
    double acc = 0.0;
    for (const auto& e : js.entries()) {
        if (e.dminus != 0.0) acc += std::pow(std::fabs(e.dminus), p);
        if (e.dplus != 0.0) acc += std::pow(std::fabs(e.dplus), p);
    }
    return acc;
}

// ============================================================================
// quadratic variation along a partition sequence
// ============================================================================

struct LevelStat {
    int m = 0;
    std::size_t intervals = 0;
    double value = 0.0;
};

struct ConvergenceOpts {
    double rel_tol = 1e-2;   // Cauchy tolerance across the trailing levels
    int check_levels = 3;
};

namespace detail {

inline bool cauchy_tail(const std::vector<LevelStat>& per_level, const ConvergenceOpts& o) {
    const int n = int(per_level.size());
    if (n < o.check_levels) return false;
    for (int i = n - o.check_levels + 1; i < n; ++i) {
        const double a = per_level[std::size_t(i) - 1].value;
        const double b = per_level[std::size_t(i)].value;
        if (std::fabs(b - a) > o.rel_tol * std::max(1.0, std::fabs(b))) return false;
    }
    return true;
}

inline void require_jumps_on_grid(const JumpSet& js, const Partition& finest, const char* who) {
    for (const auto& e : js.entries())
        if (!finest.contains(e.t))
            throw std::invalid_argument(std::string(who) +
                ": accessibility violation, jump at t=" + std::to_string(e.t) +
                " is not a point of the partition sequence");
}

} // namespace detail

// The bracket [f]_lambda: per-level partition sums, the finest-level bracket
// path (with the squared-jump decorations the limit laws prescribe), and the
// continuous/jump split of the total.
struct BracketResult {
    SampledPath path;             // [f](t) on the finest grid, jump-decorated
    SampledPath continuous_path;  // [f]^c(t), the jump staircase removed
    double total = 0.0;
    double continuous_part = 0.0;
    double jump_part = 0.0;
    std::vector<LevelStat> per_level;
    bool converged = false;
};

inline BracketResult quadratic_variation(const SampledPath& f, const PartitionSequence& lambda,
                                         const ConvergenceOpts& opts = {}) {
    const Partition& fin = lambda.finest();
    const JumpSet js = f.jump_set();
    detail::require_jumps_on_grid(js, fin, "quadratic_variation");

    BracketResult out{SampledPath::continuous(fin, std::vector<double>(fin.size(), 0.0)),
                      SampledPath::continuous(fin, std::vector<double>(fin.size(), 0.0))};

    out.per_level.reserve(std::size_t(lambda.depth()));
    for (int m = 1; m <= lambda.depth(); ++m) {
        const Partition& k = lambda.level(m);
        out.per_level.push_back({m, k.intervals(), sp_sum(f, k, 2.0)});
    }

    // cumulative finest-level sums give the bracket path
    std::vector<double> vals(fin.size(), 0.0);
    {
        double acc = 0.0;
        double prev = f.value(fin[0]);
        for (std::size_t i = 1; i < fin.size(); ++i) {
            const double cur = f.value(fin[i]);
            acc += (cur - prev) * (cur - prev);
            vals[i] = acc;
            prev = cur;
        }
    }
    out.total = vals.back();

    out.jump_part = js.sum_minus(fin.a(), fin.b(), [](const JumpEntry& e) { return e.dminus * e.dminus; })
                  + js.sum_plus(fin.a(), fin.b(), [](const JumpEntry& e) { return e.dplus * e.dplus; });
    out.continuous_part = std::max(0.0, out.total - out.jump_part);

    // jump decorations of the bracket path: left jump (d-)^2, right jump (d+)^2
    std::vector<Decoration> ds;
    for (const auto& e : js.entries()) {
        const std::size_t i = out.path.locate(e.t);
        const double v = vals[i];
        const double l = (e.t > fin.a()) ? v - e.dminus * e.dminus : v;
        const double r = (e.t < fin.b()) ? v + e.dplus * e.dplus : v;
        if (l != v || r != v) ds.push_back({e.t, l, r});
    }

    // continuous part as a path: [f]^c(t) = [f](t) - staircase, where the
    // staircase counts (d-)^2 for jump times <= t and (d+)^2 for times < t
    std::vector<double> cont(fin.size(), 0.0);
    {
        const auto& es = js.entries();
        std::size_t jm = 0, jp = 0;
        double stair_minus = 0.0, stair_plus = 0.0;
        for (std::size_t i = 0; i < fin.size(); ++i) {
            const double t = fin[i];
            while (jm < es.size() && es[jm].t <= t) {
                if (es[jm].t > fin.a()) stair_minus += es[jm].dminus * es[jm].dminus;
                ++jm;
            }
            while (jp < es.size() && es[jp].t < t) {
                stair_plus += es[jp].dplus * es[jp].dplus;
                ++jp;
            }
            cont[i] = std::max(0.0, vals[i] - stair_minus - stair_plus);
            if (i > 0 && cont[i] < cont[i - 1]) cont[i] = cont[i - 1];
        }
    }

    out.path = SampledPath::with_decorations(PathStyle::continuous_interpolant, fin,
                                             std::move(vals), std::move(ds));
    out.continuous_path = SampledPath::continuous(fin, std::move(cont));
    out.converged = detail::cauchy_tail(out.per_level, opts);
    return out;
}

// signed cross-variation [f,g]_lambda with the same decomposition
struct CovariationResult {
    SampledPath path;
    double total = 0.0;
    double continuous_part = 0.0;
    double jump_part = 0.0;
    std::vector<LevelStat> per_level;
    bool converged = false;
};

inline CovariationResult quadratic_covariation(const SampledPath& f, const SampledPath& g,
                                               const PartitionSequence& lambda,
                                               const ConvergenceOpts& opts = {}) {
    const Partition& fin = lambda.finest();
    const JumpSet jf = f.jump_set(), jg = g.jump_set();
    detail::require_jumps_on_grid(jf, fin, "quadratic_covariation");
    detail::require_jumps_on_grid(jg, fin, "quadratic_covariation");

    CovariationResult out{SampledPath::continuous(fin, std::vector<double>(fin.size(), 0.0))};
    out.per_level.reserve(std::size_t(lambda.depth()));
    for (int m = 1; m <= lambda.depth(); ++m) {
        const Partition& k = lambda.level(m);
        out.per_level.push_back({m, k.intervals(), covariation_sum(f, g, k)});
    }

    std::vector<double> vals(fin.size(), 0.0);
    {
        double acc = 0.0;
        double pf = f.value(fin[0]), pg = g.value(fin[0]);
        for (std::size_t i = 1; i < fin.size(); ++i) {
            const double cf = f.value(fin[i]), cg = g.value(fin[i]);
            acc += (cf - pf) * (cg - pg);
            vals[i] = acc;
            pf = cf; pg = cg;
        }
    }
    out.total = vals.back();

    // joint jumps: sum over times of (d-f)(d-g) + (d+f)(d+g); only times where
    // both paths jump contribute
    double jp = 0.0;
    for (const auto& ef : jf.entries()) {
        const std::size_t ig = g.locate(ef.t);
        if (g.grid().points()[ig] != ef.t) continue;
        const double gm = g.value_at(ig) - g.left_limit_at(ig);
        const double gp = g.right_limit_at(ig) - g.value_at(ig);
        if (ef.t > fin.a()) jp += ef.dminus * gm;
        if (ef.t < fin.b()) jp += ef.dplus * gp;
    }
    out.jump_part = jp;
    out.continuous_part = out.total - out.jump_part;

    out.path = SampledPath::continuous(fin, std::move(vals));
    out.converged = detail::cauchy_tail(out.per_level, opts);
    return out;
}

// ============================================================================
// scaling-index estimator
// ============================================================================

struct IndexLevel {
    int m = 0;
    double n_m = 0.0;      // intervals at the level
    double s2 = 0.0;
    double estimate = 0.0; // 1/2 - log(s2) / (2 log n_m)
};

struct IndexEstimate {
    std::vector<IndexLevel> per_level;
    double fitted = 0.0;  // 1/2 - OLS slope of log sqrt(s2) against log n_m
    int window = 0;
};

namespace detail {

inline std::pair<double, double> ols(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= double(n); my /= double(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("ols: degenerate abscissae");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

} // namespace detail

// Rescaled dyadic quadratic sums: per-level exponents and an OLS fit over the
// last `window` levels. s2 = 0 at any used level means the path cannot carry
// the estimator.
inline IndexEstimate gladyshev_index(const SampledPath& f, const PartitionSequence& lambda,
                                     int window = 4) {
    if (window < 2) throw std::invalid_argument("gladyshev_index: window must be >= 2");
    IndexEstimate out;
    out.window = std::min(window, lambda.depth());
    for (int m = 1; m <= lambda.depth(); ++m) {
        const Partition& k = lambda.level(m);
        IndexLevel lv;
        lv.m = m;
        lv.n_m = double(k.intervals());
        lv.s2 = sp_sum(f, k, 2.0);
        if (lv.s2 <= 0.0)
            throw std::invalid_argument("gladyshev_index: degenerate path, s2 vanishes at level " +
                                        std::to_string(m));
        lv.estimate = 0.5 - std::log(lv.s2) / (2.0 * std::log(lv.n_m));
        out.per_level.push_back(lv);
    }
    std::vector<double> xs, ys;
    for (std::size_t i = out.per_level.size() - std::size_t(out.window); i < out.per_level.size(); ++i) {
        xs.push_back(std::log(out.per_level[i].n_m));
        ys.push_back(0.5 * std::log(out.per_level[i].s2));
    }
    out.fitted = 0.5 - detail::ols(xs, ys).first;
    return out;
}

// ============================================================================
// Wiener-class diagnostic
// ============================================================================

// A path is consistent with the Wiener class when its refining quadratic sums
// settle at sigma_2(f), i.e. all the quadratic mass is jump mass. Brownian
// samples (s2 -> t, sigma_2 = 0) must come out inconsistent.
struct WienerDiagnostic {
    std::vector<LevelStat> per_level;
    double sigma2 = 0.0;
    double finest_s2 = 0.0;
    double gap = 0.0;
    bool cauchy = false;
    bool consistent = false;
};

inline WienerDiagnostic wiener_diagnostic(const SampledPath& f, const PartitionSequence& lambda,
                                          const ConvergenceOpts& opts = {}) {
    WienerDiagnostic out;
    for (int m = 1; m <= lambda.depth(); ++m) {
        const Partition& k = lambda.level(m);
        out.per_level.push_back({m, k.intervals(), sp_sum(f, k, 2.0)});
    }
    out.sigma2 = sigma_p(f, 2.0);
    out.finest_s2 = out.per_level.back().value;
    out.gap = std::fabs(out.finest_s2 - out.sigma2);
    out.cauchy = detail::cauchy_tail(out.per_level, opts);
    const double scale = std::max(out.finest_s2, out.sigma2);
    out.consistent = out.cauchy && out.gap <= std::max(1e-9, 5e-2 * scale);
    return out;
}

} // namespace pathcalc
