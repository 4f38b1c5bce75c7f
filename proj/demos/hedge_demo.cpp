// Delta hedge along a single rough path, no probability involved: the price
// is the multiplicative exponential of the self-affine path, whose quadratic
// variation is exactly t, so the vol input is 1 and the books must balance
// pathwise. With K = sqrt(e) the path pins the delta to N(1) or N(-1) at the
// checkpoints 1 - 4^-m, alternating with the parity of m.

#include <cmath>
#include <cstdio>
#include <fstream>

#include "pathcalc/pathcalc.hpp"

namespace pc = pathcalc;

int main() {
    const int depth = 7;
    const auto lam = pc::PartitionSequence::dyadic(1.0, 4, depth);
    const auto w = pc::kono_path({4, 0.5, {1, 1, 1, -1}, depth});
    const auto P = pc::doleans(w, lam).path;

    const pc::BsParams params{std::exp(0.5), 0.0, 1.0, 1.0};
    const auto rep = pc::hedge(params, P, lam);

    std::printf("strike sqrt(e), rate 0, vol 1, %zu grid points\n\n", rep.grid.size());
    std::printf("initial value     %.10f\n", rep.V.front());
    std::printf("terminal value    %.10f\n", rep.V.back());
    std::printf("terminal payoff   %.10f\n", std::max(0.0, P.value(1.0) - params.K));
    std::printf("sup |V - V0 - G|  %.3e\n", rep.sup_residual());
    std::printf("payoff gap        %.3e\n\n", rep.terminal_payoff_gap);

    // the delta does not settle: at t = 1 - 4^-m it alternates between
    // N(-1) and N(1) as m runs through even and odd values
    const std::size_t n = rep.grid.size() - 1;
    std::printf("%3s %14s %14s %14s %14s\n", "m", "t", "beta", "target", "gain to t");
    for (int m = 3; m <= depth; ++m) {
        const std::size_t i = n - (std::size_t(1) << (2 * (depth - m)));
        const double target = m % 2 ? pc::normal_cdf(1.0) : pc::normal_cdf(-1.0);
        std::printf("%3d %14.10f %14.10f %14.10f %14.10f\n", m, rep.grid[i], rep.beta[i], target,
                    rep.G[i]);
    }

    pc::CsvTable t;
    t.header = {"t", "alpha", "beta", "V", "G", "residual"};
    for (std::size_t i = 0; i < rep.grid.size(); i += 64)
        t.rows.push_back({rep.grid[i], rep.alpha[i], rep.beta[i], rep.V[i], rep.G[i],
                          rep.residual[i]});
    std::ofstream out("hedge_report.csv");
    t.write(out);
    std::printf("\nwrote hedge_report.csv (every 64th grid point)\n");
    return 0;
}
