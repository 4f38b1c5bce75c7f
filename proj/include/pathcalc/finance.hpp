#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "generators.hpp"
#include "partition.hpp"
#include "path.hpp"
#include "product.hpp"
#include "stieltjes.hpp"
#include "variation.hpp"

namespace pathcalc {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }
inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

struct BsParams {
    double K = 1.0;
    double r = 0.0;
    double sigma = 1.0;
    double T = 1.0;

    void validate() const {
        if (!(K > 0.0)) throw std::invalid_argument("bs: strike K must be positive");
        if (!(r >= 0.0)) throw std::invalid_argument("bs: rate r must be nonnegative");
        if (!(sigma > 0.0)) throw std::invalid_argument("bs: sigma must be positive");
        if (!(T > 0.0)) throw std::invalid_argument("bs: horizon T must be positive");
    }
};

inline double bs_d1(const BsParams& p, double t, double x) {
    const double rt = std::sqrt(p.T - t);
    return (std::log(x / p.K) + (p.r + 0.5 * p.sigma * p.sigma) * (p.T - t)) / (p.sigma * rt);
}

inline double bs_d2(const BsParams& p, double t, double x) {
    return bs_d1(p, t, x) - p.sigma * std::sqrt(p.T - t);
}

// three-branch call value: strictly before expiry, at expiry, and at x = 0
inline double bs_price(const BsParams& p, double t, double x) {
    p.validate();
    if (!(t >= 0.0 && t <= p.T)) throw std::invalid_argument("bs: t outside [0,T]");
    if (!(x >= 0.0)) throw std::invalid_argument("bs: price x must be nonnegative");
    if (x == 0.0) return 0.0;
    if (t == p.T) return std::max(0.0, x - p.K);
    return x * normal_cdf(bs_d1(p, t, x)) -
           p.K * std::exp(-p.r * (p.T - t)) * normal_cdf(bs_d2(p, t, x));
}

struct BsDerivatives {
    double value = 0.0;
    double dt = 0.0;
    double dx = 0.0;
    double dxx = 0.0;
};

inline BsDerivatives bs_derivatives(const BsParams& p, double t, double x) {
    p.validate();
    if (!(t >= 0.0 && t < p.T)) throw std::invalid_argument("bs: t outside [0,T)");
    if (!(x > 0.0)) throw std::invalid_argument("bs: price x must be positive");
    const double rt = std::sqrt(p.T - t);
    const double d1 = bs_d1(p, t, x), d2 = d1 - p.sigma * rt;
    BsDerivatives g;
    g.value = x * normal_cdf(d1) - p.K * std::exp(-p.r * (p.T - t)) * normal_cdf(d2);
    g.dx = normal_cdf(d1);
    g.dxx = normal_pdf(d1) / (p.sigma * x * rt);
    g.dt = -0.5 * p.sigma * x / rt * normal_pdf(d1) -
           p.r * p.K * std::exp(-p.r * (p.T - t)) * normal_cdf(d2);
    return g;
}

// phi_t + (sigma^2/2) x^2 phi_xx + r x phi_x - r phi; identically zero for the
// closed-form call value
inline double bs_pde_residual(const BsParams& p, double t, double x) {
    const BsDerivatives g = bs_derivatives(p, t, x);
    return g.dt + 0.5 * p.sigma * p.sigma * x * x * g.dxx + p.r * x * g.dx - p.r * g.value;
}

// ============================================================================
// delta hedge along a single price path
// ============================================================================

struct HedgeReport {
    std::vector<double> grid;
    std::vector<double> alpha;  // bond position
    std::vector<double> beta;   // stock position
    std::vector<double> V;      // portfolio value = alpha Q + beta P
    std::vector<double> G;      // cumulative gain, bond RS leg + stock LC leg
    std::vector<double> residual;  // V - V(0) - G
    double terminal_payoff_gap = 0.0;

    double sup_residual() const {
        double s = 0.0;
        for (double v : residual) s = std::max(s, std::fabs(v));
        return s;
    }
};

// Self-financing check for the call hedge: beta = N(d1) along the path,
// alpha balances the books, and the gain integral is accumulated with the
// bond leg in closed form and the stock leg as a Left Cauchy sum. Left tags
// never touch beta(T), which is the improper-integral behaviour the hedge
// needs near expiry.
inline HedgeReport hedge(const BsParams& p, const SampledPath& P, const PartitionSequence& lam) {
    p.validate();
    if (P.style() != PathStyle::continuous_interpolant || !P.jump_set().empty())
        throw std::invalid_argument("hedge: price path must be continuous");
    if (std::fabs(P.value_at(0) - 1.0) > 1e-9)
        throw std::invalid_argument("hedge: price path must start at 1");
    for (double v : P.values())
        if (!(v > 0.0)) throw std::invalid_argument("invalid-price: path touches 0");

    const Partition& fin = lam.finest();
    for (double t : fin.points())
        if (!P.grid().contains(t))
            throw std::invalid_argument("hedge: price path missing grid point t=" + std::to_string(t));
    if (std::fabs(fin.b() - p.T) > 1e-12)
        throw std::invalid_argument("hedge: partition horizon differs from T");

    // bracket compatibility: [P] at T vs sigma^2 int_0^T P^2 ds within 5%
    const BracketResult br = quadratic_variation(P, lam);
    double target = 0.0;
    for (std::size_t i = 1; i < fin.size(); ++i) {
        const double pa = P.value(fin[i - 1]), pb = P.value(fin[i]);
        target += 0.5 * (pa * pa + pb * pb) * (fin[i] - fin[i - 1]);
    }
    target *= p.sigma * p.sigma;
    if (std::fabs(br.total - target) > 0.05 * target)
        throw std::invalid_argument("hedge: price bracket incompatible with sigma^2 int P^2 ds");

    const std::size_t n = fin.size() - 1;
    HedgeReport rep;
    rep.grid = fin.points();
    rep.alpha.resize(n + 1);
    rep.beta.resize(n + 1);
    rep.V.resize(n + 1);
    rep.G.assign(n + 1, 0.0);
    rep.residual.resize(n + 1);

    std::vector<double> pv(n + 1), qv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = rep.grid[i];
        pv[i] = P.value(t);
        qv[i] = std::exp(p.r * t);
        rep.V[i] = bs_price(p, std::min(t, p.T), pv[i]);
        rep.beta[i] = (i == n) ? 0.0 : normal_cdf(bs_d1(p, t, pv[i]));
        rep.alpha[i] = (rep.V[i] - pv[i] * rep.beta[i]) / qv[i];
    }

    // gain: bond leg integrates the linear interpolant of alpha against
    // dQ = r e^{rt} dt exactly, stock leg is the running LC sum of beta dP
    double bond = 0.0, stock = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        if (p.r > 0.0) {
            const double slope = (rep.alpha[i] - rep.alpha[i - 1]) / (rep.grid[i] - rep.grid[i - 1]);
            bond += rep.alpha[i] * qv[i] - rep.alpha[i - 1] * qv[i - 1] -
                    slope * (qv[i] - qv[i - 1]) / p.r;
        }
        stock += rep.beta[i - 1] * (pv[i] - pv[i - 1]);
        rep.G[i] = bond + stock;
    }
    for (std::size_t i = 0; i <= n; ++i) rep.residual[i] = rep.V[i] - rep.V[0] - rep.G[i];
    rep.terminal_payoff_gap = std::fabs(rep.V[n] - std::max(0.0, pv[n] - p.K));
    return rep;
}

// ============================================================================
// binomial price on a random-walk skeleton
// ============================================================================

inline SampledPath binomial_price(const Skeleton& sk) {
    if (sk.w.size() < 2) throw std::invalid_argument("binomial: empty skeleton");
    const double h = std::pow(2.0, -double(sk.m));
    std::vector<double> vals(sk.w.size());
    vals[0] = 1.0;
    for (std::size_t k = 1; k < sk.w.size(); ++k) {
        const double inc = sk.w[k] - sk.w[k - 1];
        if (std::fabs(std::fabs(inc) - h) > 1e-12)
            throw std::invalid_argument("binomial: skeleton increment is not +-2^-m at step " +
                                        std::to_string(k));
        vals[k] = vals[k - 1] * (1.0 + inc);
    }
    const double dt = std::pow(2.0, -2.0 * sk.m);
    std::vector<double> ts(vals.size());
    for (std::size_t k = 0; k < ts.size(); ++k) ts[k] = double(k) * dt;
    return SampledPath::continuous(Partition::from_points(std::move(ts)), std::move(vals));
}

// ============================================================================
// evolutionary system and its defining identities
// ============================================================================

struct EvolutionarySystem {
    std::vector<SampledPath> returns;
    std::vector<SampledPath> prices;
    PartitionSequence lambda;
};

inline EvolutionarySystem make_evolutionary_system(std::vector<SampledPath> returns,
                                                   const PartitionSequence& lam) {
    EvolutionarySystem sys{std::move(returns), {}, lam};
    sys.prices.reserve(sys.returns.size());
    for (const auto& g : sys.returns) {
        SampledPath price = doleans(g, lam).path;
        if (std::fabs(price.value_at(0) - 1.0) > 1e-12)
            throw std::logic_error("evolutionary system: price(0) != 1");
        for (double v : price.values())
            if (!(v > 0.0)) throw std::invalid_argument("evolutionary system: price not positive");
        sys.prices.push_back(std::move(price));
    }
    return sys;
}

struct ReflexivityGaps {
    std::vector<double> linear;     // sup |f - 1 - (LC) int f d g| per pair
    std::vector<double> generator;  // sup |L f - (g - g(0))| per pair
};

inline ReflexivityGaps reflexivity_check(const EvolutionarySystem& sys) {
    ReflexivityGaps gaps;
    for (std::size_t i = 0; i < sys.returns.size(); ++i) {
        gaps.linear.push_back(linear_equation_residual(sys.returns[i], sys.lambda).sup);
        const GeneratorPath L = lambda_generator(sys.prices[i], sys.lambda);
        const Partition& fin = sys.lambda.finest();
        const double g0 = sys.returns[i].value(fin.a());
        double s = 0.0;
        for (std::size_t k = 0; k < fin.size(); ++k)
            s = std::max(s, std::fabs(L.path.value_at(k) - (sys.returns[i].value(fin[k]) - g0)));
        gaps.generator.push_back(s);
    }
    return gaps;
}

} // namespace pathcalc
