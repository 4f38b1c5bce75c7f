#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "partition.hpp"
#include "path.hpp"
#include "rng.hpp"

namespace pathcalc {

// Exact-covariance fractional Brownian motion on a uniform grid via dense
// Cholesky. The factorization is the expensive part, so it lives in a sampler
// object that can be reused across seeds. Kept out of the umbrella header:
// this is the only part of the library that needs Eigen.
class FbmSampler {
  public:
    FbmSampler(double H, int N, double T = 1.0) : H_(H), N_(N), T_(T) {
        if (!(H > 0.0 && H < 1.0)) throw std::invalid_argument("fbm: H must be in (0,1)");
        if (N < 1 || N > 4096) throw std::invalid_argument("fbm: N must be in [1,4096]");
        if (!(T > 0.0)) throw std::invalid_argument("fbm: T must be positive");

        // cov(t_i, t_j) = (t_i^{2H} + t_j^{2H} - |t_i - t_j|^{2H}) / 2 on the
        // inner grid points i = 1..N; |t_i - t_j| only depends on i - j
        std::vector<double> d2h(std::size_t(N) + 1, 0.0);
        for (int d = 1; d <= N; ++d) d2h[std::size_t(d)] = std::pow(double(d) * T / N, 2.0 * H);
        mat_.resize(N, N);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j <= i; ++j)
                mat_(i, j) = mat_(j, i) =
                    0.5 * (d2h[std::size_t(i) + 1] + d2h[std::size_t(j) + 1] - d2h[std::size_t(i - j)]);
        mat_.diagonal().array() += 1e-12;

        Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>> llt(mat_);  // factor in place
        if (llt.info() != Eigen::Success) throw std::runtime_error("fbm: Cholesky factorization failed");
    }

    double H() const { return H_; }
    int N() const { return N_; }

    SampledPath sample(std::uint64_t seed) const {
        const Rng rng(seed);
        Eigen::VectorXd z(N_);
        for (int i = 0; i < N_; ++i) z(i) = rng.normal_at(std::uint64_t(i));
        const Eigen::VectorXd v = mat_.triangularView<Eigen::Lower>() * z;

        std::vector<double> pts(std::size_t(N_) + 1), vals(std::size_t(N_) + 1);
        pts[0] = 0.0;
        vals[0] = 0.0;
        for (int i = 1; i <= N_; ++i) {
            pts[std::size_t(i)] = double(i) * T_ / N_;
            vals[std::size_t(i)] = v(i - 1);
        }
        pts.back() = T_;
        return SampledPath::continuous(Partition::from_points(std::move(pts)), std::move(vals));
    }

  private:
    double H_;
    int N_;
    double T_;
    Eigen::MatrixXd mat_;  // lower triangle holds the Cholesky factor
};

inline SampledPath fbm_cholesky(double H, int N, double T, std::uint64_t seed) {
    return FbmSampler(H, N, T).sample(seed);
}

} // namespace pathcalc
