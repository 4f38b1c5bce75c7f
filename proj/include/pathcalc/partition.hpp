#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pathcalc {

// ============================================================================
// partitions and nested partition sequences
// ============================================================================

// A finite partition of [a,b]: strictly increasing points. A proper partition
// has at least two points; the one-point degenerate case only arises from
// tracing over [s,s] and is kept representable on purpose.
class Partition {
public:
    static Partition from_points(std::vector<double> pts) {
        if (pts.size() < 2)
            throw std::invalid_argument("partition: need at least two points");
        validate(pts);
        return Partition(std::move(pts));
    }

    static Partition degenerate(double t) {
        return Partition(std::vector<double>{t});
    }

    std::size_t size() const { return pts_.size(); }
    std::size_t intervals() const { return pts_.size() - 1; }
    bool is_degenerate() const { return pts_.size() == 1; }

    double operator[](std::size_t i) const { return pts_[i]; }
    double a() const { return pts_.front(); }
    double b() const { return pts_.back(); }
    const std::vector<double>& points() const { return pts_; }

    bool contains(double t) const {
        auto it = std::lower_bound(pts_.begin(), pts_.end(), t);
        return it != pts_.end() && *it == t;
    }

    double mesh() const {
        double m = 0.0;
        for (std::size_t i = 1; i < pts_.size(); ++i) m = std::max(m, pts_[i] - pts_[i - 1]);
        return m;
    }

private:
    explicit Partition(std::vector<double> pts) : pts_(std::move(pts)) {}

    static void validate(const std::vector<double>& pts) {
        for (std::size_t i = 1; i < pts.size(); ++i)
            if (!(pts[i] > pts[i - 1]))
                throw std::invalid_argument("partition: points must be strictly increasing");
    }

    std::vector<double> pts_;
};

// kappa traced onto [s,t]: {s} U (kappa intersect (s,t)) U {t}.
inline Partition trace_partition(const Partition& k, double s, double t) {
    if (s > t) throw std::invalid_argument("trace: need s <= t");
    if (s == t) return Partition::degenerate(s);
    std::vector<double> pts;
    pts.push_back(s);
    auto lo = std::upper_bound(k.points().begin(), k.points().end(), s);
    auto hi = std::lower_bound(k.points().begin(), k.points().end(), t);
    for (auto it = lo; it != hi; ++it) pts.push_back(*it);
    if (pts.back() != t) pts.push_back(t);
    return Partition::from_points(std::move(pts));
}

enum class SequenceKind { dyadic_base2, dyadic_base_r, explicit_levels };

// Nested refining sequence lambda = (kappa_1, kappa_2, ...). All the limits in
// the calculus are taken along one of these, so nestedness is validated, not
// assumed, for explicitly supplied levels.
class PartitionSequence {
public:
    static PartitionSequence dyadic(double T, int base, int depth) {
        if (!(T > 0.0)) throw std::invalid_argument("dyadic sequence: T must be positive");
        if (base < 2) throw std::invalid_argument("dyadic sequence: base must be >= 2");
        if (depth < 1) throw std::invalid_argument("dyadic sequence: depth must be >= 1");
        std::vector<Partition> lv;
        lv.reserve(depth);
        double n = 1.0;
        for (int m = 1; m <= depth; ++m) {
            n *= base;
            std::vector<double> pts(std::size_t(n) + 1);
            for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = double(i) * T / n;
            pts.back() = T;  // guard the endpoint against the last rounding
            lv.push_back(Partition::from_points(std::move(pts)));
        }
        return PartitionSequence(std::move(lv),
                                 base == 2 ? SequenceKind::dyadic_base2 : SequenceKind::dyadic_base_r,
                                 base);
    }

    static PartitionSequence from_levels(std::vector<Partition> lv) {
        if (lv.empty()) throw std::invalid_argument("sequence: need at least one level");
        for (std::size_t m = 0; m + 1 < lv.size(); ++m) {
            if (lv[m].a() != lv[m + 1].a() || lv[m].b() != lv[m + 1].b())
                throw std::invalid_argument("sequence: levels must share endpoints");
            for (double p : lv[m].points())
                if (!lv[m + 1].contains(p))
                    throw std::invalid_argument("sequence: levels must be nested");
        }
        return PartitionSequence(std::move(lv), SequenceKind::explicit_levels, 0);
    }

    int depth() const { return int(levels_.size()); }
    const Partition& level(int m) const {
        if (m < 1 || m > depth()) throw std::invalid_argument("sequence: level out of range");
        return levels_[std::size_t(m) - 1];
    }
    const Partition& finest() const { return levels_.back(); }
    double a() const { return levels_.front().a(); }
    double b() const { return levels_.front().b(); }
    SequenceKind kind() const { return kind_; }
    int base() const { return base_; }

private:
    PartitionSequence(std::vector<Partition> lv, SequenceKind k, int base)
        : levels_(std::move(lv)), kind_(k), base_(base) {}

    std::vector<Partition> levels_;
    SequenceKind kind_;
    int base_;
};

inline PartitionSequence make_dyadic_sequence(double T, int base, int depth) {
    return PartitionSequence::dyadic(T, base, depth);
}

} // namespace pathcalc
