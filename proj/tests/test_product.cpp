#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "pathcalc/generators.hpp"
#include "pathcalc/product.hpp"
#include "pathcalc/rng.hpp"

using namespace pathcalc;

namespace {

bool close(double a, double b, double scale = 1e-12) {
    return std::fabs(a - b) <= scale * std::max({1.0, std::fabs(a), std::fabs(b)});
}

SampledPath step_on(const PartitionSequence& lam, const std::vector<std::pair<double, double>>& js,
                    double start = 0.0) {
    const auto& pts = lam.finest().points();
    std::vector<double> v(pts.size(), start);
    for (const auto& [t, d] : js)
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (pts[i] >= t) v[i] += d;
    return SampledPath::cadlag(lam.finest(), v);
}

} // namespace

TEST_CASE("partition products multiply over splits") {
    const auto lam = PartitionSequence::dyadic(1.0, 2, 5);
    const Rng rng(19);
    std::vector<double> v(lam.finest().size());
    v[0] = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) v[i] = v[i - 1] + 0.1 * rng.normal_at(i);
    const auto f = SampledPath::continuous(lam.finest(), v);

    const auto& fin = lam.finest();
    const double whole = partition_product(f, fin);
    const double split = partition_product(f, trace_partition(fin, 0.0, 0.5)) *
                         partition_product(f, trace_partition(fin, 0.5, 1.0));
    CHECK(close(whole, split));
    CHECK(partition_product(f, trace_partition(fin, 0.25, 0.25)) == 1.0);
}

TEST_CASE("product integral of a step path") {
    const auto lam = PartitionSequence::dyadic(1.0, 2, 6);
    const auto f = step_on(lam, {{0.25, 0.5}, {0.5, -0.25}, {0.75, 0.1}});
    const auto est = product_lambda_integral(f, lam);
    for (int m = 2; m <= lam.depth(); ++m)
        CHECK(close(est.per_level[std::size_t(m - 1)].value, oracle::kDoleansStep1));
    CHECK(close(est.value, oracle::kDoleansStep1));
    CHECK(est.converged);

    // a factor can be zero without blowing up the product itself
    const auto z = step_on(lam, {{0.5, -1.0}});
    CHECK(partition_product(z, lam.finest()) == 0.0);
    try {
        product_lambda_integral(z, lam);
        FAIL("expected degenerate-product error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("degenerate product") != std::string::npos);
    }
}

TEST_CASE("jump product over sub-intervals") {
    const auto lam = PartitionSequence::dyadic(1.0, 2, 5);
    const auto f = step_on(lam, {{0.25, 0.5}, {0.75, 0.2}});
    const double lhs = jump_product(f, 0.0, 1.0);
    const double rhs = jump_product(f, 0.0, 0.5) * jump_product(f, 0.5, 1.0);
    CHECK(close(lhs, rhs));
    CHECK(close(lhs, 1.5 * std::exp(-0.5) * 1.2 * std::exp(-0.2)));
    CHECK(jump_product(f, 0.3, 0.6) == 1.0);
}

TEST_CASE("forward doleans exponential of a step path") {
    const auto lam = PartitionSequence::dyadic(1.0, 2, 6);
    const auto f = step_on(lam, {{0.25, 0.5}, {0.5, -0.25}, {0.75, 0.1}});
    const auto E = doleans(f, lam, DoleansDirection::forward);

    CHECK(E.path.value(0.0) == 1.0);
    CHECK(close(E.path.value(0.30), 1.5));
    CHECK(close(E.path.value(0.60), 1.5 * 0.75));
    CHECK(close(E.path.value(1.0), oracle::kDoleansStep1));

    // first-order jump law: E(t)/E(t-) = 1 + jump of f
    for (double t : {0.25, 0.5, 0.75}) {
        const double ratio = E.path.value(t) / E.path.left_limit(t);
        const double dm = f.value(t) - f.left_limit(t);
        CHECK(close(ratio, 1.0 + dm));
    }
    CHECK(E.direction == DoleansDirection::forward);
    CHECK(E.anchor == 0.0);
}

TEST_CASE("backward doleans on a continuous self-affine path") {
    const auto w = kono_path({4, 0.5, {1, 1, 1, -1}, 5});
    const auto lam = PartitionSequence::dyadic(1.0, 4, 5);
    const auto E = doleans(w, lam, DoleansDirection::backward);

    // [w]^c(t) = t exactly, so E_b(x) = exp{w(1) - w(x) - (1-x)/2}
    const auto& fin = lam.finest();
    const double w1 = w.value(1.0);
    for (std::size_t i = 0; i < fin.size(); i += 37) {
        const double x = fin[i];
        const double ref = std::exp(w1 - w.value(x) - 0.5 * (1.0 - x));
        CHECK(close(E.path.value_at(i), ref));
    }
    CHECK(E.path.value(1.0) == 1.0);
    CHECK(E.anchor == 1.0);
    for (double jp : E.jump_part) CHECK(jp == 1.0);
}

TEST_CASE("the forward exponential solves its linear equation on steps") {
    const auto lam = PartitionSequence::dyadic(1.0, 2, 6);
    const auto f = step_on(lam, {{0.25, 0.5}, {0.5, -0.25}, {0.75, 0.1}});
    const auto rep = linear_equation_residual(f, lam);
    CHECK(rep.sup <= 1e-12);
    CHECK(rep.residual.size() == lam.finest().size());
}

TEST_CASE("lambda generator of a multiplicative step evolution") {
    const auto lam = PartitionSequence::dyadic(1.0, 2, 6);
    // U: 1 -> 1.2 -> 1.08, i.e. relative moves +0.2 then -0.1
    auto vals = std::vector<double>(lam.finest().size(), 1.0);
    const auto& pts = lam.finest().points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i] >= 0.25) vals[i] = 1.2;
        if (pts[i] >= 0.5) vals[i] = 1.08;
    }
    const auto U = SampledPath::cadlag(lam.finest(), vals);
    const auto L = lambda_generator(U, lam);

    CHECK(close(L.path.value(1.0), 0.1));
    for (int m = 2; m <= lam.depth(); ++m)
        CHECK(close(L.raw_sums[std::size_t(m - 1)].value, 0.1));
    CHECK(L.converged);
    CHECK(close(L.path.value(0.25) - L.path.left_limit(0.25), 0.2));
    CHECK(close(L.path.value(0.5) - L.path.left_limit(0.5), -0.1));

    const auto bad_start = SampledPath::cadlag(lam.finest(), std::vector<double>(pts.size(), 2.0));
    try {
        lambda_generator(bad_start, lam);
        FAIL("expected evolution error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("U(a) must be 1") != std::string::npos);
    }

    auto touching = vals;
    touching[touching.size() / 2] = 0.0;
    for (std::size_t i = touching.size() / 2; i < touching.size(); ++i) touching[i] = 0.0;
    try {
        lambda_generator(SampledPath::cadlag(lam.finest(), touching), lam);
        FAIL("expected touches-0 error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("touches 0") != std::string::npos);
    }
}

TEST_CASE("exponential and generator are inverse on pure jumps") {
    const auto lam = PartitionSequence::dyadic(1.0, 2, 6);
    const auto g = step_on(lam, {{0.25, 0.2}, {0.5, -0.1}, {0.75, 0.15}});
    const auto rep = duality_roundtrip(g, lam);
    CHECK(rep.gap_generator <= 1e-12);
    CHECK(rep.gap_product <= 1e-12);
}

TEST_CASE("duality on a rough continuous path is a finite-level approximation") {
    const auto w = kono_path({4, 0.5, {1, 1, 1, -1}, 5});
    const auto lam = PartitionSequence::dyadic(1.0, 4, 5);
    const auto rep = duality_roundtrip(w, lam);
    CHECK(rep.gap_generator <= 0.05);
    CHECK(rep.gap_product <= 0.05);
}
