#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "partition.hpp"
#include "path.hpp"
#include "variation.hpp"

namespace pathcalc {

// ============================================================================
// endpoint-tagged partition sums
// ============================================================================

// S_LC(phi, g; kappa) = sum phi(x_{i-1}) (g(x_i) - g(x_{i-1}))
inline double lc_sum(const SampledPath& phi, const SampledPath& g, const Partition& k) {
    if (k.is_degenerate()) return 0.0;
    double acc = 0.0;
    double gp = g.value(k[0]);
    double fp = phi.value(k[0]);
    for (std::size_t i = 1; i < k.size(); ++i) {
        const double gc = g.value(k[i]);
        acc += fp * (gc - gp);
        gp = gc;
        fp = phi.value(k[i]);
    }
    return acc;
}

// S_RC(phi, g; kappa) = sum phi(x_i) (g(x_i) - g(x_{i-1}))
inline double rc_sum(const SampledPath& phi, const SampledPath& g, const Partition& k) {
    if (k.is_degenerate()) return 0.0;
    double acc = 0.0;
    double gp = g.value(k[0]);
    for (std::size_t i = 1; i < k.size(); ++i) {
        const double gc = g.value(k[i]);
        acc += phi.value(k[i]) * (gc - gp);
        gp = gc;
    }
    return acc;
}

enum class IntegralSide { left_cauchy, right_cauchy };

struct IntegralEstimate {
    std::vector<LevelStat> per_level;
    double value = 0.0;     // finest-level sum
    bool converged = false; // Cauchy over the trailing levels
    IntegralSide side = IntegralSide::left_cauchy;
};

// (LC)/(RC) integral of phi against g over [s,t] along lambda: the per-level
// sums over traced partitions, last level reported as the value.
inline IntegralEstimate lambda_integral(const SampledPath& phi, const SampledPath& g,
                                        const PartitionSequence& lambda, IntegralSide side,
                                        double s, double t, const ConvergenceOpts& opts = {}) {
    if (s > t) throw std::invalid_argument("lambda_integral: need s <= t");
    IntegralEstimate out;
    out.side = side;
    for (int m = 1; m <= lambda.depth(); ++m) {
        const Partition k = trace_partition(lambda.level(m), s, t);
        const double v = side == IntegralSide::left_cauchy ? lc_sum(phi, g, k) : rc_sum(phi, g, k);
        out.per_level.push_back({m, k.is_degenerate() ? 0 : k.intervals(), v});
    }
    out.value = out.per_level.back().value;
    out.converged = detail::cauchy_tail(out.per_level, opts);
    return out;
}

inline IntegralEstimate lambda_integral(const SampledPath& phi, const SampledPath& g,
                                        const PartitionSequence& lambda, IntegralSide side,
                                        const ConvergenceOpts& opts = {}) {
    return lambda_integral(phi, g, lambda, side, lambda.a(), lambda.b(), opts);
}

// cumulative endpoint-tagged sums along a single partition; entry i is the
// sum over [x_0, x_i], so entry 0 is 0
inline std::vector<double> cumulative_sum(const SampledPath& phi, const SampledPath& g,
                                          const Partition& k, IntegralSide side) {
    std::vector<double> out(k.size(), 0.0);
    double acc = 0.0;
    double gp = g.value(k[0]);
    for (std::size_t i = 1; i < k.size(); ++i) {
        const double gc = g.value(k[i]);
        const double tag = side == IntegralSide::left_cauchy ? phi.value(k[i - 1]) : phi.value(k[i]);
        acc += tag * (gc - gp);
        out[i] = acc;
        gp = gc;
    }
    return out;
}

// ============================================================================
// Stieltjes integrals against bounded-variation integrators
// ============================================================================

// refinement Riemann-Stieltjes sum with midpoint tags against a continuous
// integrator, evaluated on the integrator's grid restricted to [s,t]
inline double rs_midpoint(const SampledPath& psi, const SampledPath& Vc, double s, double t) {
    const Partition k = trace_partition(Vc.grid(), s, t);
    if (k.is_degenerate()) return 0.0;
    double acc = 0.0;
    double vp = Vc.value(k[0]);
    for (std::size_t i = 1; i < k.size(); ++i) {
        const double vc = Vc.value(k[i]);
        acc += psi.value(0.5 * (k[i - 1] + k[i])) * (vc - vp);
        vp = vc;
    }
    return acc;
}

namespace detail {

struct BvSplit {
    SampledPath continuous;  // V with the jump staircase removed
    JumpSet jumps;
};

inline BvSplit split_bv(const SampledPath& V) {
    const JumpSet js = V.jump_set();
    const auto& ts = V.grid().points();
    std::vector<double> cont(ts.size());
    const auto& es = js.entries();
    std::size_t jm = 0, jp = 0;
    double stair_minus = 0.0, stair_plus = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        while (jm < es.size() && es[jm].t <= ts[i]) { stair_minus += es[jm].dminus; ++jm; }
        while (jp < es.size() && es[jp].t < ts[i]) { stair_plus += es[jp].dplus; ++jp; }
        cont[i] = V.value_at(i) - stair_minus - stair_plus;
    }
    return {SampledPath::continuous(V.grid(), std::move(cont)), js};
}

} // namespace detail

// Left Young integral of psi against a BV path V over [s,t]:
//   (RS) against V^c + sum psi(t-) d-V over (s,t] + sum psi(t) d+V over [s,t)
inline double ly_integral_bv(const SampledPath& psi, const SampledPath& V, double s, double t) {
    const auto sp = detail::split_bv(V);
    double acc = rs_midpoint(psi, sp.continuous, s, t);
    acc += sp.jumps.sum_minus(s, t, [&](const JumpEntry& e) { return psi.left_limit(e.t) * e.dminus; });
    acc += sp.jumps.sum_plus(s, t, [&](const JumpEntry& e) { return psi.value(e.t) * e.dplus; });
    return acc;
}

inline double ly_integral_bv(const SampledPath& psi, const SampledPath& V) {
    return ly_integral_bv(psi, V, V.a(), V.b());
}

// Right Young integral: tags swap to psi(t) on the minus side, psi(t+) on plus
inline double ry_integral_bv(const SampledPath& psi, const SampledPath& V, double s, double t) {
    const auto sp = detail::split_bv(V);
    double acc = rs_midpoint(psi, sp.continuous, s, t);
    acc += sp.jumps.sum_minus(s, t, [&](const JumpEntry& e) { return psi.value(e.t) * e.dminus; });
    acc += sp.jumps.sum_plus(s, t, [&](const JumpEntry& e) { return psi.right_limit(e.t) * e.dplus; });
    return acc;
}

inline double ry_integral_bv(const SampledPath& psi, const SampledPath& V) {
    return ry_integral_bv(psi, V, V.a(), V.b());
}

// sum h(x_{i-1}) (increment of f)^2 (left tag) or h(x_i) (...)^2 (right tag)
// at a single level; these converge to the Left/Right Young integral of h
// against the bracket
inline double weighted_quadratic_sum(const SampledPath& h, const SampledPath& f,
                                     const PartitionSequence& lambda, int m, IntegralSide side) {
    const Partition& k = lambda.level(m);
    double acc = 0.0;
    double fp = f.value(k[0]);
    for (std::size_t i = 1; i < k.size(); ++i) {
        const double fc = f.value(k[i]);
        const double d = fc - fp;
        const double tag = side == IntegralSide::left_cauchy ? h.value(k[i - 1]) : h.value(k[i]);
        acc += tag * d * d;
        fp = fc;
    }
    return acc;
}

// ============================================================================
// chain rule
// ============================================================================

// phi with its first two derivatives; missing derivatives fall back to
// central finite differences with a value-scaled step
struct PhiC2 {
    std::function<double(double)> f0;
    std::function<double(double)> f1;
    std::function<double(double)> f2;

    static PhiC2 with_fd(std::function<double(double)> v) {
        PhiC2 p;
        p.f0 = std::move(v);
        const auto base = p.f0;
        p.f1 = [base](double x) {
            const double h = 1e-5 * std::max(1.0, std::fabs(x));
            return (base(x + h) - base(x - h)) / (2.0 * h);
        };
        p.f2 = [base](double x) {
            const double h = 1e-5 * std::max(1.0, std::fabs(x));
            return (base(x + h) - 2.0 * base(x) + base(x - h)) / (h * h);
        };
        return p;
    }
};

enum class ChainVariant { left, right };

struct ChainRuleReport {
    double lhs = 0.0;              // phi(f(y)) - phi(f(z))
    double integral_term = 0.0;    // endpoint-tagged lambda-integral of phi' o f
    double bracket_term = 0.0;     // +/- 1/2 (RS) integral of phi'' o f against [f]^c
    double jump_correction = 0.0;  // second-order jump sums
    double residual = 0.0;         // lhs - (integral + bracket + jumps)
};

namespace detail {

inline double chain_jump_correction(const PhiC2& phi, const SampledPath& f,
                                    double z, double y, ChainVariant variant) {
    const JumpSet js = f.jump_set();
    double acc = 0.0;
    for (const auto& e : js.entries()) {
        const double fv = f.value(e.t);
        if (e.t > z && e.t <= y && e.dminus != 0.0) {
            const double fl = fv - e.dminus;
            const double w = variant == ChainVariant::left ? phi.f1(fl) : phi.f1(fv);
            acc += phi.f0(fv) - phi.f0(fl) - w * e.dminus;
        }
        if (e.t >= z && e.t < y && e.dplus != 0.0) {
            const double fr = fv + e.dplus;
            const double w = variant == ChainVariant::left ? phi.f1(fv) : phi.f1(fr);
            acc += phi.f0(fr) - phi.f0(fv) - w * e.dplus;
        }
    }
    return acc;
}

} // namespace detail

// The two second-order chain rules along lambda. Left variant:
//   phi(f(y)) - phi(f(z)) = (LC) int phi' o f d f + 1/2 (RS) int phi'' o f d[f]^c
//                         + jump corrections with left-limit weights on d-;
// right variant mirrors with an RC integral, -1/2 on the bracket, and the
// limit weights moved to the d+ side.
inline ChainRuleReport chain_rule(const PhiC2& phi, const SampledPath& f,
                                  const PartitionSequence& lambda, double z, double y,
                                  ChainVariant variant = ChainVariant::left,
                                  const BracketResult* bracket = nullptr) {
    if (z > y) throw std::invalid_argument("chain_rule: need z <= y");
    ChainRuleReport r;
    r.lhs = phi.f0(f.value(y)) - phi.f0(f.value(z));

    const SampledPath dphi = f.transform(phi.f1);
    const IntegralSide side = variant == ChainVariant::left ? IntegralSide::left_cauchy
                                                            : IntegralSide::right_cauchy;
    r.integral_term = lambda_integral(dphi, f, lambda, side, z, y).value;

    std::optional<BracketResult> local;
    if (!bracket) { local.emplace(quadratic_variation(f, lambda)); bracket = &*local; }

    const SampledPath ddphi = f.transform(phi.f2);
    const double half = variant == ChainVariant::left ? 0.5 : -0.5;
    r.bracket_term = half * rs_midpoint(ddphi, bracket->continuous_path, z, y);

    r.jump_correction = detail::chain_jump_correction(phi, f, z, y, variant);
    r.residual = r.lhs - r.integral_term - r.bracket_term - r.jump_correction;
    return r;
}

// residuals of the chain rule from a to every finest grid point, for
// sup-norm diagnostics; returns one residual per grid point
inline std::vector<double> chain_rule_residual_path(const PhiC2& phi, const SampledPath& f,
                                                    const PartitionSequence& lambda,
                                                    ChainVariant variant = ChainVariant::left) {
    const Partition& fin = lambda.finest();
    const BracketResult br = quadratic_variation(f, lambda);
    const SampledPath dphi = f.transform(phi.f1);
    const SampledPath ddphi = f.transform(phi.f2);
    const IntegralSide side = variant == ChainVariant::left ? IntegralSide::left_cauchy
                                                            : IntegralSide::right_cauchy;
    const std::vector<double> integral = cumulative_sum(dphi, f, fin, side);

    const double half = variant == ChainVariant::left ? 0.5 : -0.5;
    std::vector<double> out(fin.size(), 0.0);
    const double phz = phi.f0(f.value(fin[0]));
    double bracket_acc = 0.0;
    double jump_acc = 0.0;
    const JumpSet js = f.jump_set();
    std::size_t jm = 0, jp = 0;
    const auto& es = js.entries();
    double vp = br.continuous_path.value_at(0);
    for (std::size_t i = 1; i < fin.size(); ++i) {
        const double vc = br.continuous_path.value_at(i);
        bracket_acc += ddphi.value(0.5 * (fin[i - 1] + fin[i])) * (vc - vp);
        vp = vc;
        // jumps with time in (a, t_i] on the minus side, [a, t_i) on the plus side
        while (jm < es.size() && es[jm].t <= fin[i]) {
            const auto& e = es[jm];
            if (e.dminus != 0.0 && e.t > fin[0]) {
                const double fv = f.value(e.t), fl = fv - e.dminus;
                const double w = variant == ChainVariant::left ? phi.f1(fl) : phi.f1(fv);
                jump_acc += phi.f0(fv) - phi.f0(fl) - w * e.dminus;
            }
            ++jm;
        }
        while (jp < es.size() && es[jp].t < fin[i]) {
            const auto& e = es[jp];
            if (e.dplus != 0.0) {
                const double fv = f.value(e.t), fr = fv + e.dplus;
                const double w = variant == ChainVariant::left ? phi.f1(fv) : phi.f1(fr);
                jump_acc += phi.f0(fr) - phi.f0(fv) - w * e.dplus;
            }
            ++jp;
        }
        const double lhs = phi.f0(f.value(fin[i])) - phz;
        out[i] = lhs - integral[i] - half * bracket_acc - jump_acc;
    }
    return out;
}

// ============================================================================
// improper tail of the Left Cauchy integral near b
// ============================================================================

struct ImproperTail {
    std::vector<double> u;       // evaluation points T(1 - base^-m)
    std::vector<double> value;   // (LC) integral over [a, u_m] at the finest level
    std::vector<double> gap;     // successive differences
    bool cauchy = false;
    double tol = 0.0;
};

// Evaluates the finest-level LC integral up to u_m = T - T base^-m and checks
// whether the tail is settling. A divergent tail is reported, not thrown.
inline ImproperTail improper_lc_tail(const SampledPath& phi, const SampledPath& g,
                                     const PartitionSequence& lambda, double tol = 1e-2) {
    if (lambda.kind() == SequenceKind::explicit_levels)
        throw std::invalid_argument("improper_lc_tail: needs a dyadic sequence");
    const double T = lambda.b();
    const Partition& fin = lambda.finest();
    const std::vector<double> cum = cumulative_sum(phi, g, fin, IntegralSide::left_cauchy);

    ImproperTail out;
    out.tol = tol;
    double scale = 1.0;
    for (int m = 1; m <= lambda.depth(); ++m) {
        scale /= lambda.base();
        const double um = T - T * scale;
        if (!fin.contains(um)) continue;
        const auto& pts = fin.points();
        const std::size_t idx = std::size_t(std::lower_bound(pts.begin(), pts.end(), um) - pts.begin());
        out.u.push_back(um);
        out.value.push_back(cum[idx]);
    }
    for (std::size_t i = 1; i < out.value.size(); ++i)
        out.gap.push_back(std::fabs(out.value[i] - out.value[i - 1]));
    const std::size_t ng = out.gap.size();
    out.cauchy = ng >= 2 && out.gap[ng - 1] <= tol && out.gap[ng - 2] <= tol;
    return out;
}

} // namespace pathcalc
