#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "groundstate/io.hpp"
#include "groundstate/nonlinearity.hpp"
#include "groundstate/selfcheck.hpp"
#include "groundstate/shooting.hpp"

namespace gs = groundstate;

namespace {

void print_kv(const char* key, const std::string& value) {
    std::printf("%-16s = %s\n", key, value.c_str());
}

int run_thresholds(double p, double q, const std::string& output) {
    const double w = gs::omega_crit(p, q);
    const double e = gs::eta_crit(p, q);
    if (output == "json") {
        gs::write_sweep_row_json(std::cout, {p, q, w, e, e - w});
    } else {
        print_kv("omega_crit", gs::fmt17(w));
        print_kv("eta_crit", gs::fmt17(e));
        print_kv("gap", gs::fmt17(e - w));
    }
    return 0;
}

int run_classify(double a, double b, double c, double p, double q, double r) {
    const gs::TriplePowerParams tp(a, b, c, p, q, r);
    const gs::SignClass sc = gs::classify_triple(tp);
    print_kv("case", gs::to_string(sc.kind));
    print_kv("a_crit", gs::fmt17(gs::triple_threshold(b, c, p, q, r)));
    print_kv("margin", gs::fmt17(sc.margin));
    print_kv("u_star", gs::fmt17(gs::tangent_point(tp)));
    return 0;
}

struct ShootArgs {
    double omega = 0.0, p = 0.0, q = 0.0;
    gs::ShootingConfig cfg;
    std::string profile_path;
    int scan = 0;
    bool show_config = false;
};

int run_shoot(const ShootArgs& args) {
    const gs::DoublePowerParams dp(args.omega, args.p, args.q);
    if (args.show_config) {
        const gs::ShootingConfig c = args.cfg.resolved(dp);
        print_kv("config n", std::to_string(c.n));
        print_kv("config rel_tol", gs::fmt17(c.rel_tol));
        print_kv("config abs_tol", gs::fmt17(c.abs_tol));
        print_kv("config h0", gs::fmt17(c.h0));
        print_kv("config r_max", gs::fmt17(c.r_max));
        print_kv("config conv_eps", gs::fmt17(c.conv_eps));
        print_kv("config alpha_tol", gs::fmt17(c.alpha_tol));
        print_kv("config max_bisect", std::to_string(c.max_bisect));
    }

    const gs::GroundState g = gs::find_ground_state(dp, args.cfg);
    print_kv("alpha", gs::fmt17(g.alpha));
    print_kv("bracket_lo", gs::fmt17(g.bracket.first));
    print_kv("bracket_hi", gs::fmt17(g.bracket.second));
    print_kv("residual", gs::fmt17(g.residuals));
    print_kv("final_kind", gs::to_string(g.final_kind));

    if (!args.profile_path.empty()) {
        std::ofstream f(args.profile_path);
        gs::detail::require(f.is_open(), "cannot open profile output file");
        gs::write_profile_csv(f, g.profile);
    }

    if (args.scan > 0) {
        const gs::ScanReport rep = gs::uniqueness_scan(dp, args.cfg, args.scan);
        long turned = 0, crossed = 0, other = 0;
        for (gs::TrajectoryKind k : rep.outcomes) {
            if (k == gs::TrajectoryKind::TurnedBack) ++turned;
            else if (k == gs::TrajectoryKind::Crossed) ++crossed;
            else ++other;
        }
        print_kv("scan_points", std::to_string(rep.grid.size()));
        print_kv("scan_turned_back", std::to_string(turned));
        print_kv("scan_crossed", std::to_string(crossed));
        print_kv("scan_other", std::to_string(other));
        print_kv("scan_transitions", std::to_string(rep.transitions));
    }
    return 0;
}

int run_sweep(const std::string& p_spec, const std::string& q_spec,
              const std::string& output) {
    const gs::Range pr = gs::parse_range(p_spec);
    const gs::Range qr = gs::parse_range(q_spec);
    gs::detail::require(pr.min > 1.0 && qr.min > 1.0, "exponent ranges must lie in (1, inf)");

    std::vector<gs::SweepRow> rows;
    for (double p : pr.values())
        for (double q : qr.values())
            if (p < q) rows.push_back({p, q, 0.0, 0.0, 0.0});

    // cells are independent; fill strided slices from worker threads, then
    // emit buffered rows so output order never depends on scheduling
    const std::size_t workers =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), rows.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&rows, w, workers] {
            for (std::size_t i = w; i < rows.size(); i += workers) {
                rows[i].omega_crit = gs::omega_crit(rows[i].p, rows[i].q);
                rows[i].eta_crit = gs::eta_crit(rows[i].p, rows[i].q);
                rows[i].gap = rows[i].eta_crit - rows[i].omega_crit;
            }
        });
    for (std::thread& t : pool) t.join();

    const bool json = output == "json";
    if (!json) std::cout << gs::sweep_csv_header << '\n';
    for (const gs::SweepRow& row : rows) {
        if (!(row.gap > 0.0)) {
            std::cerr << "invariant violation: gap <= 0 at p=" << gs::fmt17(row.p)
                      << " q=" << gs::fmt17(row.q) << "\n";
            return 5;
        }
        if (json) gs::write_sweep_row_json(std::cout, row);
        else gs::write_sweep_row_csv(std::cout, row);
    }
    return 0;
}

int run_selfcheck(std::uint64_t seed, long cases) {
    if (cases == 0)
        std::cerr << "warning: --cases 0 makes every check vacuous\n";
    bool all = true;
    for (const gs::CheckResult& r : gs::run_selfchecks(seed, cases)) {
        std::printf("%-24s %s (%ld cases)%s%s\n", r.name.c_str(),
                    r.passed() ? "pass" : "FAIL", r.cases,
                    r.note.empty() ? "" : " ", r.note.c_str());
        all = all && r.passed();
    }
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ground-state tools for the double-power nonlinearity "
                 "f(u) = -omega*u + u^p - u^q"};
    app.require_subcommand(1);

    double p = 0.0, q = 0.0;
    std::string output = "text";
    CLI::App* thresholds = app.add_subcommand(
        "thresholds", "Existence and uniqueness thresholds omega_crit, eta_crit");
    thresholds->add_option("--p", p, "lower exponent")->required();
    thresholds->add_option("--q", q, "upper exponent")->required();
    thresholds->add_option("--output", output, "text or json");

    double ca = 0.0, cb = 0.0, cc = 0.0, cp = 0.0, cq = 0.0, cr = 0.0;
    CLI::App* classify = app.add_subcommand(
        "classify", "Sign trichotomy of -a*u^p + b*u^q - c*u^r");
    classify->add_option("--a", ca, "coefficient a")->required();
    classify->add_option("--b", cb, "coefficient b")->required();
    classify->add_option("--c", cc, "coefficient c")->required();
    classify->add_option("--p", cp, "exponent p")->required();
    classify->add_option("--q", cq, "exponent q")->required();
    classify->add_option("--r", cr, "exponent r")->required();

    ShootArgs sa;
    CLI::App* shoot = app.add_subcommand(
        "shoot", "Locate the ground state by shooting on u(0)");
    shoot->add_option("--omega", sa.omega, "linear coefficient")->required();
    shoot->add_option("--p", sa.p, "lower exponent")->required();
    shoot->add_option("--q", sa.q, "upper exponent")->required();
    shoot->add_option("--n", sa.cfg.n, "space dimension");
    shoot->add_option("--rel-tol", sa.cfg.rel_tol, "integrator relative tolerance");
    shoot->add_option("--abs-tol", sa.cfg.abs_tol, "integrator absolute tolerance");
    shoot->add_option("--h0", sa.cfg.h0, "series start offset");
    shoot->add_option("--r-max", sa.cfg.r_max, "integration horizon (0 = auto)");
    shoot->add_option("--conv-eps", sa.cfg.conv_eps, "convergence smallness threshold");
    shoot->add_option("--alpha-tol", sa.cfg.alpha_tol, "bisection width target");
    shoot->add_option("--max-bisect", sa.cfg.max_bisect, "bisection iteration cap");
    shoot->add_option("--profile", sa.profile_path, "write profile samples as CSV");
    shoot->add_option("--scan", sa.scan, "append a uniqueness scan of this many points");
    shoot->add_flag("--show-config", sa.show_config, "print the resolved configuration");

    std::string p_spec, q_spec, sweep_output = "csv";
    CLI::App* sweep = app.add_subcommand(
        "sweep", "Threshold phase diagram over a (p, q) grid");
    sweep->add_option("--p", p_spec, "p range min:max:count")->required();
    sweep->add_option("--q", q_spec, "q range min:max:count")->required();
    sweep->add_option("--output", sweep_output, "csv or json");

    std::uint64_t seed = 12345;
    long cases = 1000;
    CLI::App* selfcheck = app.add_subcommand(
        "selfcheck", "Run the embedded invariant suite");
    selfcheck->add_option("--seed", seed, "random seed");
    selfcheck->add_option("--cases", cases, "cases per randomized check")
        ->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*thresholds) return run_thresholds(p, q, output);
        if (*classify) return run_classify(ca, cb, cc, cp, cq, cr);
        if (*shoot) return run_shoot(sa);
        if (*sweep) return run_sweep(p_spec, q_spec, sweep_output);
        if (*selfcheck) return run_selfcheck(seed, cases);
    } catch (const gs::NoExistenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const gs::BracketFailureError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
