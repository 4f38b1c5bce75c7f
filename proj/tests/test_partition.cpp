#include <catch2/catch_amalgamated.hpp>

#include "pathcalc/partition.hpp"

using namespace pathcalc;

TEST_CASE("partition construction and validation") {
    auto k = Partition::from_points({0.0, 0.25, 1.0});
    CHECK(k.size() == 3);
    CHECK(k.intervals() == 2);
    CHECK(k.a() == 0.0);
    CHECK(k.b() == 1.0);
    CHECK(k.mesh() == 0.75);
    CHECK(k.contains(0.25));
    CHECK_FALSE(k.contains(0.3));

    CHECK_THROWS_AS(Partition::from_points({0.0}), std::invalid_argument);
    CHECK_THROWS_AS(Partition::from_points({0.0, 0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(Partition::from_points({0.0, 0.5, 0.4}), std::invalid_argument);

    auto d = Partition::degenerate(0.5);
    CHECK(d.is_degenerate());
    CHECK(d.a() == 0.5);
    CHECK(d.b() == 0.5);
}

TEST_CASE("dyadic sequence is exactly nested") {
    const auto lam = PartitionSequence::dyadic(1.0, 2, 10);
    CHECK(lam.depth() == 10);
    CHECK(lam.base() == 2);
    CHECK(lam.kind() == SequenceKind::dyadic_base2);
    for (int m = 1; m < 10; ++m) {
        const auto& coarse = lam.level(m);
        const auto& fine = lam.level(m + 1);
        REQUIRE(fine.intervals() == 2 * coarse.intervals());
        for (std::size_t i = 0; i < coarse.size(); ++i)
            CHECK(coarse[i] == fine[2 * i]);  // bitwise
    }
    CHECK(lam.finest().b() == 1.0);
    CHECK(lam.level(1).points() == std::vector<double>{0.0, 0.5, 1.0});
}

TEST_CASE("base-4 sequence and odd horizon endpoints") {
    const auto lam = PartitionSequence::dyadic(0.7, 4, 5);
    CHECK(lam.kind() == SequenceKind::dyadic_base_r);
    for (int m = 1; m < 5; ++m)
        for (double p : lam.level(m).points())
            CHECK(lam.level(m + 1).contains(p));
    CHECK(lam.finest().a() == 0.0);
    CHECK(lam.finest().b() == 0.7);  // endpoint pinned exactly
    CHECK(lam.finest().intervals() == 1024);
}

TEST_CASE("trace partition") {
    const auto k = Partition::from_points({0.0, 0.25, 0.5, 0.75, 1.0});
    const auto tr = trace_partition(k, 0.1, 0.8);
    CHECK(tr.points() == std::vector<double>{0.1, 0.25, 0.5, 0.75, 0.8});

    const auto edge = trace_partition(k, 0.25, 0.75);
    CHECK(edge.points() == std::vector<double>{0.25, 0.5, 0.75});

    CHECK(trace_partition(k, 0.3, 0.3).is_degenerate());
    CHECK_THROWS_AS(trace_partition(k, 0.8, 0.2), std::invalid_argument);
}

TEST_CASE("explicit levels validate nesting") {
    std::vector<Partition> good = {Partition::from_points({0.0, 0.5, 1.0}),
                                   Partition::from_points({0.0, 0.25, 0.5, 0.75, 1.0})};
    const auto lam = PartitionSequence::from_levels(good);
    CHECK(lam.kind() == SequenceKind::explicit_levels);
    CHECK(lam.depth() == 2);

    std::vector<Partition> not_nested = {Partition::from_points({0.0, 0.4, 1.0}),
                                         Partition::from_points({0.0, 0.5, 1.0})};
    CHECK_THROWS_AS(PartitionSequence::from_levels(not_nested), std::invalid_argument);

    std::vector<Partition> bad_ends = {Partition::from_points({0.0, 1.0}),
                                       Partition::from_points({0.0, 0.5, 2.0})};
    CHECK_THROWS_AS(PartitionSequence::from_levels(bad_ends), std::invalid_argument);
}
