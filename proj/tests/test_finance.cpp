#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "pathcalc/finance.hpp"

using namespace pathcalc;

TEST_CASE("normal distribution helpers") {
    CHECK(normal_cdf(1.0) == Catch::Approx(oracle::kPhiOf1).margin(1e-12));
    CHECK(normal_cdf(-1.0) == Catch::Approx(oracle::kPhiOfMinus1).margin(1e-12));
    CHECK(normal_cdf(0.0) == 0.5);
    for (double x : {0.3, 1.7, 4.2})
        CHECK(normal_cdf(x) + normal_cdf(-x) == Catch::Approx(1.0).margin(1e-15));
    CHECK(normal_pdf(0.0) == Catch::Approx(1.0 / std::sqrt(2.0 * M_PI)).margin(1e-15));
}

TEST_CASE("call price branches and reference value") {
    const BsParams ref{100.0, 0.05, 0.2, 1.0};
    CHECK(bs_price(ref, 0.0, 100.0) == Catch::Approx(oracle::kBsCallRef).margin(1e-10));

    const BsParams p{1.0, 0.0, 1.0, 1.0};
    CHECK(bs_price(p, 1.0, 1.5) == 0.5);   // expiry branch
    CHECK(bs_price(p, 1.0, 0.5) == 0.0);
    CHECK(bs_price(p, 0.3, 0.0) == 0.0);   // absorbed at zero

    // strictly above intrinsic value before expiry, increasing in x
    for (double x : {0.5, 1.0, 2.0}) {
        const double v = bs_price(ref, 0.5, 100.0 * x);
        CHECK(v > std::max(0.0, 100.0 * x - ref.K * std::exp(-ref.r * 0.5)) - 1e-15);
        CHECK(v < 100.0 * x);
    }
    CHECK(bs_price(ref, 0.5, 90.0) < bs_price(ref, 0.5, 110.0));

    CHECK_THROWS_AS(bs_price(ref, -0.1, 100.0), std::invalid_argument);
    CHECK_THROWS_AS(bs_price(ref, 1.1, 100.0), std::invalid_argument);
    CHECK_THROWS_AS(bs_price(ref, 0.5, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(bs_price({0.0, 0.0, 1.0, 1.0}, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(bs_price({1.0, 0.0, 0.0, 1.0}, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("closed-form derivatives satisfy the pricing pde") {
    for (const auto& p : {BsParams{1.0, 0.0, 1.0, 1.0}, BsParams{100.0, 0.05, 0.2, 1.0},
                          BsParams{1.1, 0.03, 0.4, 2.0}}) {
        for (double tf : {0.0, 0.25, 0.5, 0.9}) {
            for (double xf : {0.5, 1.0, 2.0}) {
                const double res = bs_pde_residual(p, tf * p.T, xf * p.K);
                CHECK(std::fabs(res) <= 1e-9);
            }
        }
    }
}

TEST_CASE("closed-form derivatives match finite differences") {
    const BsParams p{1.0, 0.05, 0.4, 1.0};
    const double t = 0.3, x = 1.2;
    const auto g = bs_derivatives(p, t, x);

    const double hx = 1e-5 * x;
    const double fd_dx = (bs_price(p, t, x + hx) - bs_price(p, t, x - hx)) / (2.0 * hx);
    CHECK(g.dx == Catch::Approx(fd_dx).margin(1e-6));

    const double hxx = 1e-4 * x;
    const double fd_dxx = (bs_price(p, t, x + hxx) - 2.0 * bs_price(p, t, x) +
                           bs_price(p, t, x - hxx)) / (hxx * hxx);
    CHECK(g.dxx == Catch::Approx(fd_dxx).margin(1e-4));

    const double ht = 1e-6;
    const double fd_dt = (bs_price(p, t + ht, x) - bs_price(p, t - ht, x)) / (2.0 * ht);
    CHECK(g.dt == Catch::Approx(fd_dt).margin(1e-4));

    CHECK_THROWS_AS(bs_derivatives(p, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(bs_derivatives(p, 0.3, 0.0), std::invalid_argument);
}

TEST_CASE("delta hedge along a rough deterministic price") {
    const auto lam = PartitionSequence::dyadic(1.0, 4, 6);
    const auto w = kono_path({4, 0.5, {1, 1, 1, -1}, 6});
    const auto P = doleans(w, lam).path;  // exp(w(t) - t/2), continuous, P(0)=1

    const BsParams p{std::exp(0.5), 0.0, 1.0, 1.0};
    const auto rep = hedge(p, P, lam);
    const std::size_t n = rep.grid.size() - 1;

    CHECK(rep.G[0] == 0.0);
    CHECK(rep.terminal_payoff_gap == 0.0);
    CHECK(rep.beta[n] == 0.0);
    for (std::size_t i = 0; i <= n; i += 41) {
        const double book = rep.alpha[i] * std::exp(p.r * rep.grid[i]) + rep.beta[i] * P.value_at(i);
        CHECK(rep.V[i] == Catch::Approx(book).margin(1e-12));
        CHECK(rep.beta[i] >= 0.0);
        CHECK(rep.beta[i] <= 1.0);
    }
    CHECK(rep.residual[0] == 0.0);
    CHECK(rep.sup_residual() < 0.5);
}

TEST_CASE("hedge input validation") {
    const auto lam = PartitionSequence::dyadic(1.0, 4, 6);
    const auto w = kono_path({4, 0.5, {1, 1, 1, -1}, 6});
    const auto P = doleans(w, lam).path;
    const BsParams p{std::exp(0.5), 0.0, 1.0, 1.0};

    // wrong volatility: the observed bracket cannot support sigma = 0.1
    CHECK_THROWS_AS(hedge({std::exp(0.5), 0.0, 0.1, 1.0}, P, lam), std::invalid_argument);

    // cadlag path
    const auto& fin = lam.finest();
    const auto step = SampledPath::cadlag(fin, std::vector<double>(fin.size(), 1.0));
    CHECK_THROWS_AS(hedge(p, step, lam), std::invalid_argument);

    // wrong start
    auto shifted = P.values();
    for (auto& v : shifted) v += 1.0;
    CHECK_THROWS_AS(hedge(p, SampledPath::continuous(fin, shifted), lam), std::invalid_argument);

    // nonpositive price
    auto touching = P.values();
    touching[touching.size() / 2] = 0.0;
    try {
        hedge(p, SampledPath::continuous(fin, touching), lam);
        FAIL("expected invalid-price error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("invalid-price") != std::string::npos);
    }

    // price sampled too coarsely for the partition sequence
    const auto coarse = PartitionSequence::dyadic(1.0, 4, 5);
    const auto Pc = doleans(kono_path({4, 0.5, {1, 1, 1, -1}, 5}), coarse).path;
    CHECK_THROWS_AS(hedge(p, Pc, lam), std::invalid_argument);
}

TEST_CASE("binomial prices on walk skeletons") {
    Skeleton sk;
    sk.m = 1;
    sk.tau = {0.0, 0.25, 0.5};
    sk.w = {0.0, 0.5, 0.0};
    const auto Q = binomial_price(sk);
    CHECK(Q.value_at(0) == oracle::kBinomM1[0]);
    CHECK(Q.value_at(1) == oracle::kBinomM1[1]);
    CHECK(Q.value_at(2) == oracle::kBinomM1[2]);
    CHECK(Q.grid()[1] == 0.25);

    Skeleton up;
    up.m = 2;
    for (int k = 0; k <= 16; ++k) {
        up.tau.push_back(double(k) / 16.0);
        up.w.push_back(double(k) * 0.25);
    }
    CHECK(binomial_price(up).value_at(16) == std::pow(1.25, 16));

    Skeleton bad;
    bad.m = 1;
    bad.tau = {0.0, 0.25};
    bad.w = {0.0, 0.3};
    CHECK_THROWS_AS(binomial_price(bad), std::invalid_argument);

    const auto B = brownian_dyadic(1.0, 16, 31);
    const auto walk = first_passage_skeleton(B, 2);
    const auto price = binomial_price(walk);
    CHECK(price.value_at(0) == 1.0);
    for (double v : price.values()) CHECK(v > 0.0);
}

TEST_CASE("evolutionary systems are reflexive") {
    const auto lam = PartitionSequence::dyadic(1.0, 2, 6);
    const auto& fin = lam.finest();

    std::vector<double> zero(fin.size(), 0.0);
    std::vector<double> jumpy(fin.size(), 0.0);
    for (std::size_t i = 0; i < fin.size(); ++i) {
        if (fin[i] >= 0.25) jumpy[i] = 0.2;
        if (fin[i] >= 0.5) jumpy[i] = 0.05;
    }
    std::vector<SampledPath> returns = {SampledPath::cadlag(fin, zero),
                                        SampledPath::cadlag(fin, jumpy)};
    const auto sys = make_evolutionary_system(returns, lam);
    REQUIRE(sys.prices.size() == 2);
    CHECK(sys.prices[0].value(1.0) == 1.0);
    CHECK(sys.prices[1].value_at(0) == 1.0);

    const auto gaps = reflexivity_check(sys);
    REQUIRE(gaps.linear.size() == 2);
    CHECK(gaps.linear[0] == 0.0);
    CHECK(gaps.generator[0] == 0.0);
    CHECK(gaps.linear[1] <= 1e-12);
    CHECK(gaps.generator[1] <= 1e-12);

    // a return jump of -1 or below kills the price
    std::vector<double> dead(fin.size(), 0.0);
    for (std::size_t i = 0; i < fin.size(); ++i)
        if (fin[i] >= 0.5) dead[i] = -1.5;
    CHECK_THROWS_AS(make_evolutionary_system({SampledPath::cadlag(fin, dead)}, lam),
                    std::invalid_argument);
}
