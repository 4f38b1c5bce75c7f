#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "partition.hpp"

namespace pathcalc {

// ============================================================================
// regulated sample paths
// ============================================================================

// One-sided jumps of a regulated function at a single time:
//   dminus = f(t) - f(t-),  dplus = f(t+) - f(t).
struct JumpEntry {
    double t;
    double dminus;
    double dplus;
};

// All jumps of a path, at most one entry per time, (0,0) entries dropped.
class JumpSet {
public:
    JumpSet() = default;
    explicit JumpSet(std::vector<JumpEntry> entries) : entries_(std::move(entries)) {
        std::sort(entries_.begin(), entries_.end(),
                  [](const JumpEntry& x, const JumpEntry& y) { return x.t < y.t; });
        for (std::size_t i = 1; i < entries_.size(); ++i)
            if (entries_[i].t == entries_[i - 1].t)
                throw std::invalid_argument("jump set: duplicate time");
        entries_.erase(std::remove_if(entries_.begin(), entries_.end(),
                                      [](const JumpEntry& e) { return e.dminus == 0.0 && e.dplus == 0.0; }),
                       entries_.end());
    }

    const std::vector<JumpEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

    // sum of g(entry) over jumps with time in (s,t] (minus side) resp. [s,t) (plus side)
    template <class F>
    double sum_minus(double s, double t, F&& g) const {
        double acc = 0.0;
        for (const auto& e : entries_)
            if (e.t > s && e.t <= t && e.dminus != 0.0) acc += g(e);
        return acc;
    }
    template <class F>
    double sum_plus(double s, double t, F&& g) const {
        double acc = 0.0;
        for (const auto& e : entries_)
            if (e.t >= s && e.t < t && e.dplus != 0.0) acc += g(e);
        return acc;
    }

private:
    std::vector<JumpEntry> entries_;
};

// Optional one-sided limit override at a grid time.
struct Decoration {
    double t;
    double left;   // f(t-)
    double right;  // f(t+)
};

enum class PathStyle { continuous_interpolant, cadlag_step };

// A regulated function represented by samples on a grid plus jump
// decorations. Between grid points the path is linear (continuous style,
// running from right_limit(t_i) to left_limit(t_{i+1})) or constant at
// right_limit(t_i) (cadlag step style). Immutable once built.
class SampledPath {
public:
    static SampledPath continuous(Partition grid, std::vector<double> values) {
        return SampledPath(std::move(grid), std::move(values), {}, PathStyle::continuous_interpolant);
    }
    static SampledPath cadlag(Partition grid, std::vector<double> values) {
        return SampledPath(std::move(grid), std::move(values), {}, PathStyle::cadlag_step);
    }
    static SampledPath with_decorations(PathStyle style, Partition grid, std::vector<double> values,
                                        std::vector<Decoration> decos) {
        return SampledPath(std::move(grid), std::move(values), std::move(decos), style);
    }

    const Partition& grid() const { return grid_; }
    const std::vector<double>& values() const { return vals_; }
    const std::vector<Decoration>& decorations() const { return decos_; }
    PathStyle style() const { return style_; }
    std::size_t size() const { return vals_.size(); }
    double a() const { return grid_.a(); }
    double b() const { return grid_.b(); }
    double front() const { return vals_.front(); }
    double back() const { return vals_.back(); }

    // index of the greatest grid point <= t
    std::size_t locate(double t) const {
        const auto& p = grid_.points();
        auto it = std::upper_bound(p.begin(), p.end(), t);
        if (it == p.begin()) throw std::invalid_argument("path: time before domain");
        return std::size_t(it - p.begin()) - 1;
    }

    double value_at(std::size_t i) const { return vals_[i]; }

    double value(double t) const {
        if (t < a() || t > b()) throw std::invalid_argument("path: time outside domain");
        const std::size_t i = locate(t);
        const auto& p = grid_.points();
        if (p[i] == t) return vals_[i];
        if (style_ == PathStyle::cadlag_step) return right_limit_at(i);
        const double t0 = p[i], t1 = p[i + 1];
        const double v0 = right_limit_at(i), v1 = left_limit_at(i + 1);
        return v0 + (v1 - v0) * ((t - t0) / (t1 - t0));
    }

    double left_limit_at(std::size_t i) const {
        if (const Decoration* d = deco_at(i)) return d->left;
        if (i == 0) return vals_[0];
        if (style_ == PathStyle::cadlag_step) return right_limit_at(i - 1);
        return vals_[i];
    }

    double right_limit_at(std::size_t i) const {
        if (const Decoration* d = deco_at(i)) return d->right;
        return vals_[i];
    }

    double left_limit(double t) const { return left_limit_at(require_grid(t)); }
    double right_limit(double t) const { return right_limit_at(require_grid(t)); }

    JumpSet jump_set() const {
        std::vector<JumpEntry> es;
        const auto& p = grid_.points();
        for (std::size_t i = 0; i < vals_.size(); ++i) {
            const double dm = vals_[i] - left_limit_at(i);
            const double dp = right_limit_at(i) - vals_[i];
            if (dm != 0.0 || dp != 0.0) es.push_back({p[i], dm, dp});
        }
        return JumpSet(std::move(es));
    }

    // pointwise map; limits move through phi, so jumps are composed too
    SampledPath transform(const std::function<double(double)>& phi) const {
        std::vector<double> w(vals_.size());
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = phi(vals_[i]);
        std::vector<Decoration> ds;
        ds.reserve(decos_.size());
        for (const auto& d : decos_) ds.push_back({d.t, phi(d.left), phi(d.right)});
        return SampledPath(grid_, std::move(w), std::move(ds), style_);
    }

    // linear combination on an identical grid; decorations carry over from
    // either parent, everything else follows from the shared style
    static SampledPath combine(const SampledPath& f, const SampledPath& g, double cf, double cg) {
        if (f.grid_.points() != g.grid_.points())
            throw std::invalid_argument("path combine: grids differ");
        if (f.style_ != g.style_)
            throw std::invalid_argument("path combine: styles differ");
        std::vector<double> w(f.size());
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = cf * f.vals_[i] + cg * g.vals_[i];
        std::vector<std::size_t> idx;
        idx.reserve(f.deco_idx_.size() + g.deco_idx_.size());
        std::set_union(f.deco_idx_.begin(), f.deco_idx_.end(),
                       g.deco_idx_.begin(), g.deco_idx_.end(), std::back_inserter(idx));
        std::vector<Decoration> ds;
        ds.reserve(idx.size());
        for (std::size_t i : idx) {
            const double ll = cf * f.left_limit_at(i) + cg * g.left_limit_at(i);
            const double rr = cf * f.right_limit_at(i) + cg * g.right_limit_at(i);
            ds.push_back({f.grid_.points()[i], ll, rr});
        }
        return SampledPath(f.grid_, std::move(w), std::move(ds), f.style_);
    }

private:
    SampledPath(Partition grid, std::vector<double> values, std::vector<Decoration> decos, PathStyle style)
        : grid_(std::move(grid)), vals_(std::move(values)), decos_(std::move(decos)), style_(style) {
        if (vals_.size() != grid_.size())
            throw std::invalid_argument("path: values/grid size mismatch");
        if (grid_.size() < 2)
            throw std::invalid_argument("path: need at least two samples");
        std::sort(decos_.begin(), decos_.end(),
                  [](const Decoration& x, const Decoration& y) { return x.t < y.t; });
        deco_idx_.reserve(decos_.size());
        for (std::size_t k = 0; k < decos_.size(); ++k) {
            if (k > 0 && decos_[k].t == decos_[k - 1].t)
                throw std::invalid_argument("path: duplicate decoration time");
            if (!grid_.contains(decos_[k].t))
                throw std::invalid_argument("path: decoration time off the grid");
            const std::size_t i = locate(decos_[k].t);
            if (i == 0 && decos_[k].left != vals_[0])
                throw std::invalid_argument("path: left limit at the left endpoint must equal the value");
            if (i + 1 == vals_.size() && decos_[k].right != vals_.back())
                throw std::invalid_argument("path: right limit at the right endpoint must equal the value");
            deco_idx_.push_back(i);
        }
    }

    std::size_t require_grid(double t) const {
        const std::size_t i = locate(t);
        if (grid_.points()[i] != t) throw std::invalid_argument("path: limits only defined at grid times");
        return i;
    }

    const Decoration* deco_at(std::size_t i) const {
        auto it = std::lower_bound(deco_idx_.begin(), deco_idx_.end(), i);
        if (it != deco_idx_.end() && *it == i) return &decos_[std::size_t(it - deco_idx_.begin())];
        return nullptr;
    }

    Partition grid_;
    std::vector<double> vals_;
    std::vector<Decoration> decos_;
    std::vector<std::size_t> deco_idx_;
    PathStyle style_;
};

inline SampledPath operator+(const SampledPath& f, const SampledPath& g) {
    return SampledPath::combine(f, g, 1.0, 1.0);
}
inline SampledPath operator-(const SampledPath& f, const SampledPath& g) {
    return SampledPath::combine(f, g, 1.0, -1.0);
}

// f restricted/evaluated on the points of a partition
inline std::vector<double> values_on(const SampledPath& f, const Partition& k) {
    std::vector<double> v(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) v[i] = f.value(k[i]);
    return v;
}

} // namespace pathcalc
