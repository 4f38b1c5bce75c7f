#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "pathcalc/rng.hpp"
#include "pathcalc/variation.hpp"

using namespace pathcalc;

namespace {
SampledPath on_unit_grid(const std::vector<double>& vals) {
    std::vector<double> ts(vals.size());
    for (std::size_t i = 0; i < ts.size(); ++i)
        ts[i] = double(i) / double(vals.size() - 1);
    return SampledPath::continuous(Partition::from_points(std::move(ts)), vals);
}
}

TEST_CASE("partition sums of powers") {
    const auto f = on_unit_grid({0.0, 1.0, 0.5, 1.5, 1.0});
    CHECK(sp_sum(f, f.grid(), 2.0) == 2.5);
    CHECK(sp_sum(f, f.grid(), 1.0) == 3.0);
    CHECK_THROWS_AS(sp_sum(f, f.grid(), 0.0), std::invalid_argument);
}

TEST_CASE("p-variation on pinned examples") {
    CHECK(p_variation(on_unit_grid({0.0, 1.0, 0.5}), 2.0).value == oracle::kPvar_01h_p2);
    CHECK(p_variation(on_unit_grid({0.0, 1.0, 0.0, 1.0}), 3.0).value == oracle::kPvar_0101_p3);
    const auto pv = p_variation(on_unit_grid({0.0, 1.0, 0.5}), 2.0);
    CHECK(pv.sup_over_subpartitions);
}

TEST_CASE("dynamic program equals exhaustive enumeration") {
    const Rng rng(7);
    std::uint64_t c = 0;
    for (int len = 5; len <= 10; ++len) {
        std::vector<double> v(std::size_t(len), 0.0);
        for (auto& x : v) x = 2.0 * rng.uniform_at(c++) - 1.0;
        const auto f = on_unit_grid(v);
        for (double p : {1.0, 1.5, 2.0, 3.0})
            CHECK(p_variation(f, p).value == oracle::pvar_exhaustive(v, p));  // bitwise
    }
}

TEST_CASE("extrema pruning is exact on long paths") {
    const Rng rng(13);
    std::vector<double> v(200, 0.0);
    for (std::size_t i = 1; i < v.size(); ++i)
        v[i] = v[i - 1] + (rng.uniform_at(i) < 0.5 ? -1.0 : 1.0) * 0.1 * rng.uniform_at(1000 + i);
    const auto f = on_unit_grid(v);
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
        const double pruned = p_variation(f, p).value;
        const double full = detail::pvar_dp(v, p);
        CHECK(pruned == Catch::Approx(full).epsilon(1e-12));
    }
}

TEST_CASE("sigma_p on step paths") {
    const auto g = SampledPath::cadlag(Partition::from_points({0.0, 0.25, 0.5, 1.0}),
                                       {0.0, 1.0, 0.5, 0.5});
    CHECK(sigma_p(g, 2.0) == 1.25);
    CHECK(p_variation(g, 2.0).value >= sigma_p(g, 2.0));
    CHECK(p_variation(g, 2.0).value == 1.25);
}

TEST_CASE("bracket of a pure-jump path") {
    const auto lam = PartitionSequence::dyadic(1.0, 2, 4);
    const auto g = SampledPath::cadlag(lam.finest(),
                                       [] {
                                           std::vector<double> v(17, 0.0);
                                           for (std::size_t i = 4; i < 17; ++i) v[i] = 1.0;   // +1 at 0.25
                                           for (std::size_t i = 8; i < 17; ++i) v[i] -= 0.5;  // -1/2 at 0.5
                                           return v;
                                       }());
    const auto br = quadratic_variation(g, lam);
    CHECK(br.total == 1.25);
    CHECK(br.jump_part == 1.25);
    CHECK(br.continuous_part == 0.0);
    CHECK(br.converged);

    // bracket jumps by the squared path jump
    CHECK(br.path.value(0.25) == 1.0);
    CHECK(br.path.left_limit(0.25) == 0.0);
    CHECK(br.path.value(0.5) == 1.25);
    CHECK(br.path.left_limit(0.5) == Catch::Approx(1.0).margin(1e-9));
    CHECK(br.continuous_path.value(1.0) == 0.0);
}

TEST_CASE("bracket accessibility requires jumps on the grid") {
    const auto lam = PartitionSequence::dyadic(1.0, 2, 3);
    const auto g = SampledPath::cadlag(Partition::from_points({0.0, 0.3, 1.0}), {0.0, 1.0, 1.0});
    try {
        quadratic_variation(g, lam);
        FAIL("expected accessibility error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("accessibility") != std::string::npos);
    }
}

TEST_CASE("two-sided jump laws via decorations") {
    const auto lam = PartitionSequence::dyadic(1.0, 2, 4);
    const auto f = SampledPath::with_decorations(PathStyle::continuous_interpolant, lam.finest(),
                                                 std::vector<double>(17, 0.0),
                                                 {{0.5, -0.3, 0.4}});
    const auto br = quadratic_variation(f, lam);
    // a removable oscillation is invisible to the partition sums, but the jump
    // families and the bracket path decorations still carry the squared jumps
    CHECK(br.jump_part == Catch::Approx(0.25).margin(1e-12));
    CHECK(br.path.left_limit(0.5) == Catch::Approx(br.path.value(0.5) - 0.09).margin(1e-9));
    CHECK(br.path.right_limit(0.5) == Catch::Approx(br.path.value(0.5) + 0.16).margin(1e-9));
    CHECK(sigma_p(f, 2.0) == Catch::Approx(0.25).margin(1e-12));
}

TEST_CASE("covariation polarization and bilinearity") {
    const auto lam = PartitionSequence::dyadic(1.0, 2, 5);
    std::vector<double> fv(33), gv(33);
    const Rng rng(21);
    for (std::size_t i = 0; i < 33; ++i) {
        fv[i] = std::sin(0.7 * double(i)) + 0.05 * rng.normal_at(i);
        gv[i] = std::cos(0.4 * double(i)) - 0.03 * rng.normal_at(100 + i);
    }
    const auto f = SampledPath::continuous(lam.finest(), fv);
    const auto g = SampledPath::continuous(lam.finest(), gv);

    const double cfg = quadratic_covariation(f, g, lam).total;
    const double pol = 0.25 * (quadratic_variation(f + g, lam).total -
                               quadratic_variation(f - g, lam).total);
    CHECK(cfg == Catch::Approx(pol).margin(1e-12));

    // bilinearity of the single-level sum
    const auto& k = lam.finest();
    const double lhs = covariation_sum(f + g, g, k);
    const double rhs = covariation_sum(f, g, k) + covariation_sum(g, g, k);
    CHECK(lhs == Catch::Approx(rhs).margin(1e-12));

    // symmetric: [f,f] recovers the bracket
    CHECK(quadratic_covariation(f, f, lam).total ==
          Catch::Approx(quadratic_variation(f, lam).total).margin(1e-12));
}

TEST_CASE("scaling index estimator") {
    // the identity path has s_2(level m) = 2^-m, so the estimate is exactly 1
    const auto lam = PartitionSequence::dyadic(1.0, 2, 8);
    const auto id = SampledPath::continuous(lam.finest(), lam.finest().points());
    const auto est = gladyshev_index(id, lam);
    for (const auto& lv : est.per_level) CHECK(lv.estimate == Catch::Approx(1.0).margin(1e-12));
    CHECK(est.fitted == Catch::Approx(1.0).margin(1e-12));

    const auto flat = SampledPath::continuous(lam.finest(), std::vector<double>(257, 2.0));
    CHECK_THROWS_AS(gladyshev_index(flat, lam), std::invalid_argument);
}

TEST_CASE("wiener class diagnostic on a step path") {
    const auto lam = PartitionSequence::dyadic(1.0, 2, 6);
    std::vector<double> v(65, 0.0);
    for (std::size_t i = 16; i < 65; ++i) v[i] = 1.0;
    for (std::size_t i = 32; i < 65; ++i) v[i] -= 0.5;
    const auto g = SampledPath::cadlag(lam.finest(), v);
    const auto w = wiener_diagnostic(g, lam);
    CHECK(w.sigma2 == 1.25);
    CHECK(w.finest_s2 == 1.25);
    CHECK(w.gap == Catch::Approx(0.0).margin(1e-12));
    CHECK(w.cauchy);
    CHECK(w.consistent);
}
