// pathcalc: command-line front end for the pathwise calculus library.
// Subcommands generate sample paths, estimate variations and integrals along
// refining partition sequences, and run the built-in verification suite.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pathcalc/fbm.hpp"
#include "pathcalc/pathcalc.hpp"

namespace pc = pathcalc;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// plumbing
// ---------------------------------------------------------------------------

struct OutputTarget {
    std::ofstream file;
    std::ostream* os = &std::cout;

    explicit OutputTarget(const std::string& path) {
        if (path.empty()) return;
        file.open(path);
        if (!file) throw std::invalid_argument("cannot open '" + path + "' for writing");
        os = &file;
    }
    std::ostream& stream() { return *os; }
};

pc::SampledPath load_path(const std::string& file) {
    if (file.empty()) throw std::invalid_argument("missing input path, use -i FILE");
    return pc::read_path_csv(file);
}

// analysis commands measure along a dyadic tower over the path's own horizon;
// depth 0 means "match the input resolution" so a 512-increment file is not
// probed below its own grid (interpolation at finer levels only dilutes s2)
pc::PartitionSequence make_lambda(const pc::SampledPath& f, int base, int depth) {
    if (f.a() != 0.0)
        throw std::invalid_argument("analysis expects paths on [0,T], got a = " +
                                    std::to_string(f.a()));
    if (depth == 0) {
        const double n = double(f.size() - 1);
        depth = std::clamp(int(std::floor(std::log(n + 0.5) / std::log(double(base)))), 1, 14);
    }
    return pc::PartitionSequence::dyadic(f.b(), base, depth);
}

void emit(OutputTarget& out, const pc::CsvTable& table, const json& report, bool as_json) {
    if (as_json)
        out.stream() << report.dump(2) << "\n";
    else
        table.write(out.stream());
}

json level_stats_json(const std::vector<pc::LevelStat>& per_level) {
    json a = json::array();
    for (const auto& lv : per_level)
        a.push_back({{"m", lv.m}, {"intervals", lv.intervals}, {"value", lv.value}});
    return a;
}

std::vector<std::pair<double, double>> parse_jump_list(const std::string& s) {
    std::vector<std::pair<double, double>> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("bad jump '" + item + "', expected time:jump");
        out.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
    }
    if (out.empty()) throw std::invalid_argument("empty jump list");
    return out;
}

std::vector<int> parse_signs(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

// ---------------------------------------------------------------------------
// gen subcommands
// ---------------------------------------------------------------------------

struct GenOpts {
    std::string output;
    std::uint64_t seed = 0;
    double T = 1.0;
    int depth = 10;
    double H = 0.5;
    int N = 256;
    int base = 4;
    std::string signs = "1,1,1,-1";
    std::string jumps = "0.25:0.5,0.5:-0.25";
    double start = 0.0;
    int m = 4;
    int n = 16;
    int kmax = 1 << 14;
    bool literal = false;
    std::string format = "csv";
};

void write_path(const GenOpts& o, const pc::SampledPath& f) {
    OutputTarget out(o.output);
    pc::write_path_csv(out.stream(), f);
}

void run_gen_brownian(const GenOpts& o) { write_path(o, pc::brownian_dyadic(o.T, o.depth, o.seed)); }

void run_gen_fbm(const GenOpts& o) { write_path(o, pc::fbm_cholesky(o.H, o.N, o.T, o.seed)); }

void run_gen_kono(const GenOpts& o) {
    pc::KonoSpec spec;
    spec.r = o.base;
    spec.H = o.H;
    spec.x = parse_signs(o.signs);
    spec.depth = o.depth;
    write_path(o, pc::kono_path(spec, o.T));
}

void run_gen_step(const GenOpts& o) {
    write_path(o, pc::step_path(o.T, parse_jump_list(o.jumps), o.start));
}

void run_gen_skeleton(const GenOpts& o) {
    const int depth = o.depth > 0 ? o.depth : std::min(24, 2 * o.m + 4);
    const auto B = pc::brownian_dyadic(o.T, depth, o.seed);
    const auto sk = pc::first_passage_skeleton(B, o.m);
    write_path(o, sk.path());
}

void run_gen_fourier(const GenOpts& o) {
    const pc::FourierPairSpec spec{o.n, o.kmax, o.seed};
    const auto s = o.literal ? pc::fourier_pair_sums_literal(spec) : pc::fourier_pair_sums(spec);
    pc::CsvTable t;
    t.header = {"n", "k_max", "G", "F", "Z_lc", "Z_rc", "exact_mean"};
    t.rows.push_back({double(o.n), double(o.kmax), s.G, s.F, s.Z_lc, s.Z_rc, s.exact_mean});
    json j{{"n", o.n},       {"k_max", o.kmax}, {"seed", o.seed},  {"G", s.G},
           {"F", s.F},       {"Z_lc", s.Z_lc},  {"Z_rc", s.Z_rc},  {"exact_mean", s.exact_mean}};
    OutputTarget out(o.output);
    emit(out, t, j, o.format == "json");
}

// ---------------------------------------------------------------------------
// analysis subcommands
// ---------------------------------------------------------------------------

struct RunOpts {
    std::string input;
    std::string with;  // second path for cov / integrate
    std::string output;
    std::string format = "csv";
    int base = 2;
    int depth = 0;  // 0: match input resolution
    double p = 2.0;
    int window = 4;
    bool levels = false;
    std::string side = "lc";
    std::string variant = "left";
    std::string phi = "exp";
    std::string direction = "forward";
    double from = 0.0, to = -1.0;  // to < 0: whole horizon
    double K = 1.0, r = 0.0, sigma = 1.0;
    int m = 4;
    std::uint64_t seed = 0;
    std::vector<int> n_list = {16, 64, 256, 1024};
    int kmax = 1 << 14;
    int reps = 100;
};

void run_pvar(const RunOpts& o) {
    const auto f = load_path(o.input);
    const auto pv = pc::p_variation(f, o.p);
    pc::CsvTable t;
    t.header = {"p", "value", "sup_over_subpartitions"};
    t.rows.push_back({pv.p, pv.value, pv.sup_over_subpartitions ? 1.0 : 0.0});
    json j{{"p", pv.p}, {"value", pv.value}, {"sup_over_subpartitions", pv.sup_over_subpartitions}};
    OutputTarget out(o.output);
    emit(out, t, j, o.format == "json");
}

void run_bracket(const RunOpts& o) {
    const auto f = load_path(o.input);
    const auto lam = make_lambda(f, o.base, o.depth);
    const auto br = pc::quadratic_variation(f, lam);
    if (o.format == "json") {
        json j{{"total", br.total},
               {"continuous_part", br.continuous_part},
               {"jump_part", br.jump_part},
               {"converged", br.converged},
               {"per_level", level_stats_json(br.per_level)}};
        OutputTarget out(o.output);
        out.stream() << j.dump(2) << "\n";
        return;
    }
    OutputTarget out(o.output);
    if (o.levels) {
        pc::CsvTable t;
        t.header = {"m", "intervals", "s2"};
        for (const auto& lv : br.per_level)
            t.rows.push_back({double(lv.m), double(lv.intervals), lv.value});
        t.write(out.stream());
    } else {
        pc::write_path_csv(out.stream(), br.path);
    }
}

void run_cov(const RunOpts& o) {
    const auto f = load_path(o.input);
    if (o.with.empty()) throw std::invalid_argument("cov needs a second path, use --with FILE");
    const auto g = pc::read_path_csv(o.with);
    const auto lam = make_lambda(f, o.base, o.depth);
    const auto cv = pc::quadratic_covariation(f, g, lam);
    pc::CsvTable t;
    t.header = {"m", "intervals", "C"};
    for (const auto& lv : cv.per_level)
        t.rows.push_back({double(lv.m), double(lv.intervals), lv.value});
    json j{{"total", cv.total},
           {"continuous_part", cv.continuous_part},
           {"jump_part", cv.jump_part},
           {"converged", cv.converged},
           {"per_level", level_stats_json(cv.per_level)}};
    OutputTarget out(o.output);
    emit(out, t, j, o.format == "json");
}

void run_index(const RunOpts& o) {
    const auto f = load_path(o.input);
    const auto lam = make_lambda(f, o.base, o.depth);
    const auto est = pc::gladyshev_index(f, lam, o.window);
    pc::CsvTable t;
    t.header = {"m", "intervals", "s2", "estimate"};
    for (const auto& lv : est.per_level)
        t.rows.push_back({double(lv.m), lv.n_m, lv.s2, lv.estimate});
    json j{{"fitted", est.fitted}, {"window", est.window}};
    j["per_level"] = json::array();
    for (const auto& lv : est.per_level)
        j["per_level"].push_back({{"m", lv.m}, {"intervals", lv.n_m}, {"s2", lv.s2},
                                  {"estimate", lv.estimate}});
    OutputTarget out(o.output);
    emit(out, t, j, o.format == "json");
}

void run_integrate(const RunOpts& o) {
    const auto phi = load_path(o.input);
    if (o.with.empty()) throw std::invalid_argument("integrate needs an integrator, use --with FILE");
    const auto g = pc::read_path_csv(o.with);
    const auto lam = make_lambda(g, o.base, o.depth);
    const auto side = o.side == "rc" ? pc::IntegralSide::right_cauchy : pc::IntegralSide::left_cauchy;
    const double to = o.to < 0.0 ? lam.b() : o.to;
    const auto est = pc::lambda_integral(phi, g, lam, side, o.from, to);
    pc::CsvTable t;
    t.header = {"m", "intervals", "value"};
    for (const auto& lv : est.per_level)
        t.rows.push_back({double(lv.m), double(lv.intervals), lv.value});
    json j{{"value", est.value},
           {"converged", est.converged},
           {"side", o.side},
           {"from", o.from},
           {"to", to},
           {"per_level", level_stats_json(est.per_level)}};
    OutputTarget out(o.output);
    emit(out, t, j, o.format == "json");
}

pc::PhiC2 named_phi(const std::string& name) {
    pc::PhiC2 phi;
    if (name == "exp") {
        phi.f0 = [](double x) { return std::exp(x); };
        phi.f1 = phi.f0;
        phi.f2 = phi.f0;
    } else if (name == "square") {
        phi.f0 = [](double x) { return x * x; };
        phi.f1 = [](double x) { return 2.0 * x; };
        phi.f2 = [](double) { return 2.0; };
    } else if (name == "sin") {
        phi.f0 = [](double x) { return std::sin(x); };
        phi.f1 = [](double x) { return std::cos(x); };
        phi.f2 = [](double x) { return -std::sin(x); };
    } else {
        throw std::invalid_argument("unknown phi '" + name + "', pick exp|square|sin");
    }
    return phi;
}

void run_chainrule(const RunOpts& o) {
    const auto f = load_path(o.input);
    const auto lam = make_lambda(f, o.base, o.depth);
    const auto variant = o.variant == "right" ? pc::ChainVariant::right : pc::ChainVariant::left;
    const double to = o.to < 0.0 ? lam.b() : o.to;
    const auto rep = pc::chain_rule(named_phi(o.phi), f, lam, o.from, to, variant);
    pc::CsvTable t;
    t.header = {"lhs", "integral", "bracket", "jumps", "residual"};
    t.rows.push_back({rep.lhs, rep.integral_term, rep.bracket_term, rep.jump_correction, rep.residual});
    json j{{"phi", o.phi},
           {"variant", o.variant},
           {"lhs", rep.lhs},
           {"integral_term", rep.integral_term},
           {"bracket_term", rep.bracket_term},
           {"jump_correction", rep.jump_correction},
           {"residual", rep.residual}};
    OutputTarget out(o.output);
    emit(out, t, j, o.format == "json");
}

void run_doleans(const RunOpts& o) {
    const auto g = load_path(o.input);
    const auto lam = make_lambda(g, o.base, o.depth);
    const auto dir = o.direction == "backward" ? pc::DoleansDirection::backward
                                               : pc::DoleansDirection::forward;
    const auto E = pc::doleans(g, lam, dir);
    OutputTarget out(o.output);
    pc::write_path_csv(out.stream(), E.path);
}

void run_generator(const RunOpts& o) {
    const auto U = load_path(o.input);
    const auto lam = make_lambda(U, o.base, o.depth);
    const auto L = pc::lambda_generator(U, lam);
    OutputTarget out(o.output);
    if (o.levels) {
        pc::CsvTable t;
        t.header = {"m", "intervals", "raw_sum"};
        for (const auto& lv : L.raw_sums)
            t.rows.push_back({double(lv.m), double(lv.intervals), lv.value});
        t.write(out.stream());
    } else {
        pc::write_path_csv(out.stream(), L.path);
    }
}

void run_duality(const RunOpts& o) {
    const auto g = load_path(o.input);
    const auto lam = make_lambda(g, o.base, o.depth);
    const auto rep = pc::duality_roundtrip(g, lam);
    pc::CsvTable t;
    t.header = {"gap_generator", "gap_product"};
    t.rows.push_back({rep.gap_generator, rep.gap_product});
    json j{{"gap_generator", rep.gap_generator}, {"gap_product", rep.gap_product}};
    OutputTarget out(o.output);
    emit(out, t, j, o.format == "json");
}

void run_hedge(const RunOpts& o) {
    const auto P = load_path(o.input);
    const auto lam = make_lambda(P, o.base, o.depth);
    const pc::BsParams params{o.K, o.r, o.sigma, lam.b()};
    const auto rep = pc::hedge(params, P, lam);
    if (o.format == "json") {
        json j{{"V0", rep.V.front()},
               {"sup_residual", rep.sup_residual()},
               {"terminal_payoff_gap", rep.terminal_payoff_gap},
               {"K", o.K},
               {"r", o.r},
               {"sigma", o.sigma}};
        OutputTarget out(o.output);
        out.stream() << j.dump(2) << "\n";
        return;
    }
    pc::CsvTable t;
    t.header = {"t", "alpha", "beta", "V", "G", "residual"};
    for (std::size_t i = 0; i < rep.grid.size(); ++i)
        t.rows.push_back({rep.grid[i], rep.alpha[i], rep.beta[i], rep.V[i], rep.G[i], rep.residual[i]});
    OutputTarget out(o.output);
    t.write(out.stream());
}

void run_binomial(const RunOpts& o) {
    const int depth = o.depth > 0 ? o.depth : std::min(24, 2 * o.m + 4);
    const auto B = pc::brownian_dyadic(1.0, depth, o.seed);
    const auto sk = pc::first_passage_skeleton(B, o.m);
    const auto price = pc::binomial_price(sk);
    OutputTarget out(o.output);
    pc::write_path_csv(out.stream(), price);
}

void run_nonex(const RunOpts& o) {
    pc::CsvTable t;
    t.header = {"n", "exact_mean", "sample_mean", "sample_var", "lower_bound"};
    json rows = json::array();
    std::vector<double> lns, means;
    for (int n : o.n_list) {
        const pc::FourierPairSpec probe{n, o.kmax, 0};
        pc::validate(probe);
        std::vector<double> z(std::size_t(o.reps), 0.0);
        pc::run_parallel(std::size_t(o.reps), [&](std::size_t i) {
            z[i] = pc::fourier_pair_sums({n, o.kmax, o.seed + i}).Z_lc;
        });
        double mean = 0.0;
        for (double v : z) mean += v;
        mean /= double(o.reps);
        double var = 0.0;
        for (double v : z) var += (v - mean) * (v - mean);
        var /= double(std::max(1, o.reps - 1));
        const double exact = pc::fourier_pair_sums({n, o.kmax, 0}).exact_mean;
        const double bound = 2.0 / (M_PI * M_PI) * (std::log(double(n)) - 1.0);
        t.rows.push_back({double(n), exact, mean, var, bound});
        rows.push_back({{"n", n}, {"exact_mean", exact}, {"sample_mean", mean},
                        {"sample_var", var}, {"lower_bound", bound}});
        lns.push_back(std::log(double(n)));
        means.push_back(exact);
    }
    json j{{"k_max", o.kmax}, {"reps", o.reps}, {"rows", rows}};
    if (lns.size() >= 2) {
        // least-squares growth rate of the exact means against ln n
        const std::size_t k = lns.size();
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < k; ++i) { mx += lns[i]; my += means[i]; }
        mx /= double(k); my /= double(k);
        double sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < k; ++i) {
            sxx += (lns[i] - mx) * (lns[i] - mx);
            sxy += (lns[i] - mx) * (means[i] - my);
        }
        j["slope_vs_ln_n"] = sxy / sxx;
    }
    OutputTarget out(o.output);
    emit(out, t, j, o.format == "json");
}

// ---------------------------------------------------------------------------
// verify: the built-in identity suite
// ---------------------------------------------------------------------------

struct Verifier {
    int fails = 0;
    int total = 0;

    void check(bool ok, const std::string& name, const std::string& detail = "") {
        ++total;
        if (ok) {
            std::cout << "ok   " << name << "\n";
        } else {
            ++fails;
            std::cout << "FAIL " << name << (detail.empty() ? "" : " (" + detail + ")") << "\n";
        }
    }
};

bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

void verify_kono(Verifier& v, int depth) {
    const auto w = pc::kono_path({4, 0.5, {1, 1, 1, -1}, depth});
    const auto lam = pc::PartitionSequence::dyadic(1.0, 4, depth);
    double worst = 0.0;
    for (int m = 1; m <= depth; ++m) {
        const auto& k = lam.level(m);
        double acc = 0.0, prev = w.value(k[0]);
        for (std::size_t i = 1; i < k.size(); ++i) {
            const double cur = w.value(k[i]);
            acc += (cur - prev) * (cur - prev);
            prev = cur;
            worst = std::max(worst, std::fabs(acc - k[i]));
        }
    }
    v.check(worst <= 1e-9, "kono bracket is the identity", "sup gap " + std::to_string(worst));
    const auto est = pc::gladyshev_index(w, lam);
    bool exact = true;
    for (const auto& lv : est.per_level) exact = exact && near(lv.estimate, 0.5, 1e-9);
    v.check(exact, "kono index estimates are exactly 1/2");
}

void verify_identities(Verifier& v, int paths) {
    const pc::Rng rng(2024);
    double worst = 0.0;
    for (int pth = 0; pth < paths; ++pth) {
        const int depth = 4 + pth % 5;
        const auto lam = pc::PartitionSequence::dyadic(1.0, 2, depth);
        const auto& fin = lam.finest();
        std::vector<double> fv(fin.size()), gv(fin.size());
        for (std::size_t i = 0; i < fin.size(); ++i) {
            fv[i] = (i ? fv[i - 1] : 0.0) + 0.3 * rng.normal_at(std::uint64_t(pth) * 4096 + i);
            gv[i] = (i ? gv[i - 1] : 0.0) + 0.2 * rng.normal_at(std::uint64_t(pth) * 4096 + 2048 + i);
        }
        const bool steps = pth % 3 == 2;
        const auto f = steps ? pc::SampledPath::cadlag(fin, fv) : pc::SampledPath::continuous(fin, fv);
        const auto g = steps ? pc::SampledPath::cadlag(fin, gv) : pc::SampledPath::continuous(fin, gv);
        for (int m = 1; m <= lam.depth(); ++m) {
            const auto& k = lam.level(m);
            const double lc = pc::lc_sum(f, g, k), rc = pc::rc_sum(f, g, k);
            const double C = pc::covariation_sum(f, g, k);
            const double dfg = f.value(k.b()) * g.value(k.b()) - f.value(k.a()) * g.value(k.a());
            const double df2 = f.value(k.b()) * f.value(k.b()) - f.value(k.a()) * f.value(k.a());
            const double s2 = pc::sp_sum(f, k, 2.0);
            const double scale = std::max({1.0, std::fabs(lc), std::fabs(rc)});
            worst = std::max({worst,
                              std::fabs(rc - lc - C) / scale,
                              std::fabs(lc + pc::lc_sum(g, f, k) + C - dfg) / scale,
                              std::fabs(pc::lc_sum(f, f, k) - 0.5 * (df2 - s2)) / scale,
                              std::fabs(pc::rc_sum(f, f, k) - 0.5 * (df2 + s2)) / scale,
                              std::fabs(C - 0.25 * (pc::sp_sum(f + g, k, 2.0) -
                                                    pc::sp_sum(f - g, k, 2.0))) / scale});
        }
    }
    v.check(worst <= 1e-12, "endpoint-sum identities hold per level",
            "worst relative gap " + std::to_string(worst));
}

void verify_pvar(Verifier& v, int len) {
    // all {-1,0,1}-valued sequences of the given length starting at 0
    const int interior = len - 1;
    std::uint64_t count = 1;
    for (int i = 0; i < interior; ++i) count *= 3;
    std::vector<double> ts(std::size_t(len), 0.0);
    for (int i = 0; i < len; ++i) ts[std::size_t(i)] = double(i) / double(len - 1);
    const auto grid = pc::Partition::from_points(ts);
    bool all = true;
    for (std::uint64_t code = 0; code < count && all; ++code) {
        std::vector<double> vals(std::size_t(len), 0.0);
        std::uint64_t c = code;
        for (int i = 1; i < len; ++i) { vals[std::size_t(i)] = double(int(c % 3) - 1); c /= 3; }
        const auto f = pc::SampledPath::continuous(grid, vals);
        for (double p : {1.0, 1.5, 2.0, 3.0}) {
            // exhaustive enumeration over endpoint-containing subsets
            double best = 0.0;
            const std::uint64_t subsets = std::uint64_t(1) << (len - 2);
            for (std::uint64_t mask = 0; mask < subsets; ++mask) {
                double sum = 0.0, prev = vals[0];
                for (int j = 0; j < len - 2; ++j)
                    if (mask & (std::uint64_t(1) << j)) {
                        sum += std::pow(std::fabs(vals[std::size_t(j) + 1] - prev), p);
                        prev = vals[std::size_t(j) + 1];
                    }
                sum += std::pow(std::fabs(vals[std::size_t(len) - 1] - prev), p);
                best = std::max(best, sum);
            }
            if (pc::p_variation(f, p).value != best) all = false;
        }
    }
    v.check(all, "p-variation dynamic program matches exhaustive search");
}

void verify_pure_jumps(Verifier& v) {
    const auto lam = pc::PartitionSequence::dyadic(1.0, 2, 6);
    const auto& fin = lam.finest();
    std::vector<double> gv(fin.size(), 0.0);
    for (std::size_t i = 0; i < fin.size(); ++i) {
        if (fin[i] >= 0.25) gv[i] = 0.2;
        if (fin[i] >= 0.5) gv[i] = -0.1;
        if (fin[i] >= 0.75) gv[i] = 0.3;
    }
    const auto g = pc::SampledPath::cadlag(fin, gv);

    const auto lin = pc::linear_equation_residual(g, lam);
    v.check(lin.sup <= 1e-12, "doleans solves the linear equation on steps",
            "sup residual " + std::to_string(lin.sup));

    const auto dual = pc::duality_roundtrip(g, lam);
    v.check(dual.gap_generator <= 1e-12 && dual.gap_product <= 1e-12,
            "generator and exponential invert each other on steps");

    pc::PhiC2 phi;
    phi.f0 = [](double x) { return std::exp(x); };
    phi.f1 = phi.f0;
    phi.f2 = phi.f0;
    const auto rep = pc::chain_rule(phi, g, lam, 0.0, 1.0, pc::ChainVariant::left);
    v.check(std::fabs(rep.residual) <= 1e-12, "chain rule telescopes on steps",
            "residual " + std::to_string(rep.residual));

    const auto br = pc::quadratic_variation(g, lam);
    const double sig2 = pc::sigma_p(g, 2.0);
    v.check(near(br.total, sig2, 1e-12) && near(br.jump_part, sig2, 1e-12) &&
                br.continuous_part == 0.0,
            "step bracket is pure jump mass");
}

void verify_pricing(Verifier& v) {
    v.check(near(pc::normal_cdf(1.0), 0.8413447460685429, 1e-12) &&
                near(pc::normal_cdf(-1.0), 0.15865525393145707, 1e-12),
            "normal cdf matches published values");

    const pc::BsParams ref{100.0, 0.05, 0.2, 1.0};
    v.check(near(pc::bs_price(ref, 0.0, 100.0), 10.450583572185565, 1e-10),
            "call price matches the classical reference");

    double worst = 0.0;
    for (double tf : {0.0, 0.3, 0.6, 0.9})
        for (double xf : {0.5, 1.0, 2.0})
            worst = std::max(worst, std::fabs(pc::bs_pde_residual(ref, tf, 100.0 * xf)));
    v.check(worst <= 1e-9, "closed form solves the pricing pde", std::to_string(worst));

    pc::Skeleton sk;
    sk.m = 1;
    sk.tau = {0.0, 0.25, 0.5};
    sk.w = {0.0, 0.5, 0.0};
    const auto Q = pc::binomial_price(sk);
    v.check(Q.value_at(0) == 1.0 && Q.value_at(1) == 1.5 && Q.value_at(2) == 0.75,
            "one-step binomial prices are exact");
}

void verify_pipeline(Verifier& v) {
    namespace fs = std::filesystem;
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    const fs::path tmp = fs::temp_directory_path() / ("pathcalc_verify_" + std::to_string(stamp) + ".csv");

    const auto w = pc::kono_path({4, 0.5, {1, 1, 1, -1}, 4});
    pc::write_path_csv(tmp.string(), w);
    const auto back = pc::read_path_csv(tmp.string());
    std::error_code ec;
    fs::remove(tmp, ec);

    bool bitwise = back.values().size() == w.values().size();
    if (bitwise)
        for (std::size_t i = 0; i < w.values().size(); ++i)
            bitwise = bitwise && back.value_at(i) == w.value_at(i) &&
                      back.grid()[i] == w.grid()[i];
    v.check(bitwise, "csv round trip is bit-exact");

    const auto lam = pc::PartitionSequence::dyadic(1.0, 4, 4);
    const auto br = pc::quadratic_variation(back, lam);
    double worst = 0.0;
    for (std::size_t i = 0; i < lam.finest().size(); ++i)
        worst = std::max(worst, std::fabs(br.path.value_at(i) - lam.finest()[i]));
    v.check(worst <= 1e-9, "re-read path has identity bracket", std::to_string(worst));

    const auto pv = pc::p_variation(back, 2.0);
    v.check(pv.value >= pc::sp_sum(back, lam.finest(), 2.0), "p-variation dominates s2");
}

void verify_statistics(Verifier& v, bool full) {
    const int depth = full ? 14 : 12;
    const int seeds = full ? 50 : 20;
    int ok_bracket = 0;
    const auto lam = pc::PartitionSequence::dyadic(1.0, 2, depth);
    for (int s = 0; s < seeds; ++s) {
        const auto B = pc::brownian_dyadic(1.0, depth, 7000 + std::uint64_t(s));
        if (std::fabs(pc::sp_sum(B, lam.finest(), 2.0) - 1.0) <= 0.05) ++ok_bracket;
    }
    v.check(ok_bracket >= seeds * 9 / 10, "brownian bracket settles near t",
            std::to_string(ok_bracket) + "/" + std::to_string(seeds));

    // grouped and literal pair sums agree
    bool agree = true;
    for (int n : {5, 8, 16}) {
        const auto a = pc::fourier_pair_sums({n, 512, 11});
        const auto b = pc::fourier_pair_sums_literal({n, 512, 11});
        agree = agree && near(a.G, b.G, 1e-12 * std::max(1.0, std::fabs(a.G))) &&
                near(a.F, b.F, 1e-12 * std::max(1.0, std::fabs(a.F)));
    }
    v.check(agree, "pair-sum regrouping is exact");

    if (full) {
        pc::PhiC2 phi;
        phi.f0 = [](double x) { return std::exp(x); };
        phi.f1 = phi.f0;
        phi.f2 = phi.f0;
        int ok_chain = 0;
        for (int s = 0; s < 20; ++s) {
            const auto B = pc::brownian_dyadic(1.0, 14, 8100 + std::uint64_t(s));
            const auto res = pc::chain_rule_residual_path(phi, B, lam);
            double sup = 0.0;
            for (double x : res) sup = std::max(sup, std::fabs(x));
            if (sup <= 0.02) ++ok_chain;
        }
        v.check(ok_chain >= 18, "chain rule residual is small on brownian paths",
                std::to_string(ok_chain) + "/20");
    }
}

int run_verify(bool quick, bool full) {
    Verifier v;
    verify_kono(v, quick ? 5 : 7);
    verify_pvar(v, quick ? 8 : 10);
    verify_pure_jumps(v);
    verify_pricing(v);
    verify_pipeline(v);
    if (!quick) {
        verify_identities(v, 60);
        verify_statistics(v, full);
    }
    std::cout << (v.fails == 0 ? "all " : "") << (v.total - v.fails) << "/" << v.total
              << " checks passed\n";
    return v.fails == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pathwise quadratic-variation calculus"};
    app.require_subcommand(1);

    GenOpts g;
    RunOpts r;
    bool quick = false, full = false;

    auto* gen = app.add_subcommand("gen", "generate sample paths");
    gen->require_subcommand(1);
    auto add_gen_common = [&](CLI::App* c) {
        c->add_option("-o,--output", g.output, "output file (default stdout)");
        c->add_option("--seed", g.seed, "rng seed");
        c->add_option("--T", g.T, "horizon")->check(CLI::PositiveNumber);
    };
    auto* gb = gen->add_subcommand("brownian", "midpoint-refined brownian path");
    add_gen_common(gb);
    gb->add_option("--depth", g.depth, "dyadic depth")->check(CLI::Range(1, 24));
    gb->callback([&] { run_gen_brownian(g); });

    auto* gf = gen->add_subcommand("fbm", "fractional brownian path (cholesky)");
    add_gen_common(gf);
    gf->add_option("--H", g.H, "Hurst index in (0,1)");
    gf->add_option("--n", g.N, "number of increments")->check(CLI::Range(1, 4096));
    gf->callback([&] { run_gen_fbm(g); });

    auto* gk = gen->add_subcommand("kono", "self-affine deterministic path");
    add_gen_common(gk);
    gk->add_option("--base", g.base, "block base r");
    gk->add_option("--H", g.H, "scaling exponent");
    gk->add_option("--depth", g.depth, "recursion depth");
    gk->add_option("--signs", g.signs, "comma-separated block signs");
    gk->callback([&] {
        if (!gk->count("--depth")) g.depth = 7;
        run_gen_kono(g);
    });

    auto* gs = gen->add_subcommand("step", "cadlag step path");
    add_gen_common(gs);
    gs->add_option("--jumps", g.jumps, "list time:jump,time:jump,...");
    gs->add_option("--start", g.start, "starting value");
    gs->callback([&] { run_gen_step(g); });

    auto* gw = gen->add_subcommand("skeleton", "first-passage walk of a brownian path");
    add_gen_common(gw);
    gw->add_option("--m", g.m, "ladder exponent, moves are 2^-m")->check(CLI::Range(1, 10));
    gw->add_option("--depth", g.depth, "brownian depth (default 2m+4)")->check(CLI::Range(0, 24));
    gw->callback([&] {
        if (!gw->count("--depth")) g.depth = 0;
        run_gen_skeleton(g);
    });

    auto* gp = gen->add_subcommand("fourier", "random fourier pair sums");
    add_gen_common(gp);
    gp->add_option("--n", g.n, "partition size parameter");
    gp->add_option("--kmax", g.kmax, "series truncation");
    gp->add_flag("--literal", g.literal, "use the literal pair iteration");
    gp->add_option("--format", g.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    gp->callback([&] { run_gen_fourier(g); });

    auto add_run_common = [&](CLI::App* c, bool needs_input = true) {
        if (needs_input) c->add_option("-i,--input", r.input, "input path csv")->required();
        c->add_option("-o,--output", r.output, "output file (default stdout)");
        c->add_option("--base", r.base, "partition base")->check(CLI::Range(2, 16));
        c->add_option("--depth", r.depth, "partition depth (default: match input resolution)")
            ->check(CLI::Range(1, 24));
        c->add_option("--format", r.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    };

    auto* pv = app.add_subcommand("pvar", "p-variation over sub-partitions");
    pv->add_option("-i,--input", r.input, "input path csv")->required();
    pv->add_option("-o,--output", r.output, "output file (default stdout)");
    pv->add_option("--p", r.p, "variation exponent")->check(CLI::PositiveNumber);
    pv->add_option("--format", r.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    pv->callback([&] { run_pvar(r); });

    auto* br = app.add_subcommand("bracket", "quadratic variation along the dyadic tower");
    add_run_common(br);
    br->add_flag("--levels", r.levels, "emit per-level sums instead of the bracket path");
    br->callback([&] { run_bracket(r); });

    auto* cv = app.add_subcommand("cov", "quadratic covariation of two paths");
    add_run_common(cv);
    cv->add_option("--with", r.with, "second path csv")->required();
    cv->callback([&] { run_cov(r); });

    auto* ix = app.add_subcommand("index", "scaling index estimate");
    add_run_common(ix);
    ix->add_option("--window", r.window, "levels in the regression")->check(CLI::Range(2, 24));
    ix->callback([&] { run_index(r); });

    auto* ig = app.add_subcommand("integrate", "endpoint-tagged lambda integral");
    add_run_common(ig);
    ig->add_option("--with", r.with, "integrator path csv")->required();
    ig->add_option("--side", r.side, "lc|rc")->check(CLI::IsMember({"lc", "rc"}));
    ig->add_option("--from", r.from, "lower endpoint");
    ig->add_option("--to", r.to, "upper endpoint (default horizon)");
    ig->callback([&] { run_integrate(r); });

    auto* cr = app.add_subcommand("chainrule", "second-order chain rule report");
    add_run_common(cr);
    cr->add_option("--phi", r.phi, "exp|square|sin");
    cr->add_option("--variant", r.variant, "left|right")->check(CLI::IsMember({"left", "right"}));
    cr->add_option("--from", r.from, "lower endpoint");
    cr->add_option("--to", r.to, "upper endpoint (default horizon)");
    cr->callback([&] { run_chainrule(r); });

    auto* dl = app.add_subcommand("doleans", "doleans exponential path");
    add_run_common(dl);
    dl->add_option("--direction", r.direction, "forward|backward")
        ->check(CLI::IsMember({"forward", "backward"}));
    dl->callback([&] { run_doleans(r); });

    auto* du = app.add_subcommand("duality", "exponential/generator round trip gaps");
    add_run_common(du);
    du->callback([&] { run_duality(r); });

    auto* ge = app.add_subcommand("generator", "lambda generator of an evolution");
    add_run_common(ge);
    ge->add_flag("--levels", r.levels, "emit per-level raw sums instead of the path");
    ge->callback([&] { run_generator(r); });

    auto* hd = app.add_subcommand("hedge", "delta hedge along a price path");
    hd->add_option("-i,--input,--path", r.input, "price path csv")->required();
    hd->add_option("-o,--output", r.output, "output file (default stdout)");
    hd->add_option("--base", r.base, "partition base")->check(CLI::Range(2, 16));
    hd->add_option("--depth", r.depth, "partition depth (default: match input resolution)")->check(CLI::Range(1, 24));
    hd->add_option("--format", r.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    hd->add_option("--K", r.K, "strike")->check(CLI::PositiveNumber);
    hd->add_option("--r", r.r, "rate");
    hd->add_option("--sigma", r.sigma, "volatility")->check(CLI::PositiveNumber);
    hd->callback([&] { run_hedge(r); });

    auto* bi = app.add_subcommand("binomial", "binomial price on a walk skeleton");
    bi->add_option("-o,--output", r.output, "output file (default stdout)");
    bi->add_option("--m", r.m, "ladder exponent")->check(CLI::Range(1, 10));
    bi->add_option("--seed", r.seed, "rng seed");
    bi->add_option("--depth", r.depth, "brownian depth (default 2m+4)")->check(CLI::Range(0, 24));
    bi->callback([&] {
        if (!bi->count("--depth")) r.depth = 0;
        run_binomial(r);
    });

    auto* nx = app.add_subcommand("nonex", "fourier pair-sum growth summary");
    nx->add_option("-o,--output", r.output, "output file (default stdout)");
    nx->add_option("--n-list", r.n_list, "partition sizes")->delimiter(',');
    nx->add_option("--kmax", r.kmax, "series truncation");
    nx->add_option("--reps", r.reps, "seeds per n")->check(CLI::PositiveNumber);
    nx->add_option("--seed", r.seed, "first seed");
    nx->add_option("--format", r.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    nx->callback([&] { run_nonex(r); });

    auto* vf = app.add_subcommand("verify", "run the built-in identity suite");
    vf->add_flag("--quick", quick, "trimmed deterministic checks");
    vf->add_flag("--full", full, "add the heavier statistical checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "pathcalc: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "pathcalc: " << e.what() << "\n";
        return 2;
    }

    if (app.got_subcommand(vf)) {
        try {
            return run_verify(quick, full);
        } catch (const std::exception& e) {
            std::cerr << "pathcalc: verify crashed: " << e.what() << "\n";
            return 1;
        }
    }
    return 0;
}
