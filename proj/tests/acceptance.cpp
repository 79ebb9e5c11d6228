// Acceptance gate: one line per criterion, pass/fail, nonzero exit on any
// failure. Criterion 11 drives the installed CLI end to end and needs its
// path as argv[1].

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "groundstate/io.hpp"
#include "groundstate/nonlinearity.hpp"
#include "groundstate/shooting.hpp"
#include "oracles.hpp"

using namespace groundstate;

namespace {

struct Criterion {
    int id;
    bool pass;
    std::string label;
    std::string detail;
};

std::vector<Criterion> results;

void report(int id, bool pass, const std::string& label, const std::string& detail = "") {
    results.push_back({id, pass, label, detail});
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct ExecResult {
    int code = -1;
    std::string out;
};

ExecResult run_cmd(const std::string& cmd) {
    ExecResult res;
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    if (!pipe) return res;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) res.out.append(buf, n);
    const int rc = pclose(pipe);
    if (WIFEXITED(rc)) res.code = WEXITSTATUS(rc);
    return res;
}

// --- criteria 1-6: algebra ---------------------------------------------

void criterion_1() {
    const bool ok = std::abs(omega_crit(3, 5) - 0.1875) <= 1e-12 * 0.1875 &&
                    std::abs(eta_crit(3, 5) - 0.25) <= 1e-12 * 0.25 &&
                    std::abs(omega_crit(2, 3) - 2.0 / 9.0) <= 1e-12 * (2.0 / 9.0);
    report(1, ok, "closed-form thresholds at (3,5) and (2,3)");
}

void criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    oracles::Rng rng(1002);
    long violations = 0;
    for (long i = 0; i < 100000; ++i) {
        const double p = 1.0 + 19.0 * rng.in(1e-12, 1.0);
        const double q = p + (20.0 - p) * rng.in(1e-12, 1.0);
        const double w = omega_crit(p, q);
        const double e = eta_crit(p, q);
        if (!(0.0 < w && w < e)) ++violations;
    }
    const double secs = seconds_since(t0);
    report(2, violations == 0 && secs < 5.0,
           "0 < omega_crit < eta_crit on 1e5 random (p, q)",
           "violations=" + std::to_string(violations) + " time=" + std::to_string(secs) + "s");
}

void criterion_3() {
    oracles::Rng rng(1003);
    long bad = 0;
    for (long i = 0; i < 1000; ++i) {
        const double p = rng.in(0.3, 4.0);
        const double q = p + rng.in(0.15, 3.0);
        const double r = q + rng.in(0.15, 3.0);
        const double b = rng.log_in(0.05, 20.0);
        const double c = rng.log_in(0.05, 20.0);
        const double thr = triple_threshold(b, c, p, q, r);
        const double ref = oracles::golden_max(b, c, p, q, r);
        if (!(std::abs(thr - ref) <= 1e-8 * std::abs(ref))) ++bad;
    }
    report(3, bad == 0, "triple_threshold equals the golden-section maximum",
           "bad=" + std::to_string(bad));
}

void criterion_4() {
    oracles::Rng rng(1004);
    long bad = 0, checked = 0;
    for (long i = 0; i < 10000; ++i) {
        const double p = rng.in(0.6, 4.0);
        const double q = p + rng.in(0.1, 3.0);
        const double r = q + rng.in(0.1, 3.0);
        const TriplePowerParams tp(rng.log_in(0.05, 20.0), rng.log_in(0.05, 20.0),
                                   rng.log_in(0.05, 20.0), p, q, r);
        const SignClass sc = classify_triple(tp);
        if (std::abs(sc.margin) <= 1e-6) continue;
        ++checked;
        const SignClass st = classify_triple(tilde_triple(tp));
        const bool swapped = (sc.kind == SignCase::positive_part &&
                              st.kind == SignCase::strictly_negative) ||
                             (sc.kind == SignCase::strictly_negative &&
                              st.kind == SignCase::positive_part);
        if (!swapped) ++bad;
    }
    const TriplePowerParams tangent(0.25, 1, 1, 1, 2, 3);
    const bool tangent_ok = classify_triple(tangent).kind == SignCase::tangent &&
                            std::abs(tangent.eval(0.5)) <= 1e-10 &&
                            std::abs(tilde_triple(tangent).eval(0.5)) <= 1e-10;
    report(4, bad == 0 && tangent_ok && checked > 9000,
           "tilde transform swaps cases a and c, fixes the tangent case",
           "checked=" + std::to_string(checked) + " bad=" + std::to_string(bad));
}

void criterion_5() {
    oracles::Rng rng(1005);
    long bad = 0;
    for (int set = 0; set < 100; ++set) {
        const double p = rng.in(0.6, 3.0);
        const double q = p + rng.in(0.2, 2.5);
        const double r = q + rng.in(0.2, 2.5);
        const TriplePowerParams tp(rng.log_in(0.1, 10.0), rng.log_in(0.1, 10.0),
                                   rng.log_in(0.1, 10.0), p, q, r);
        const TriplePowerParams tt = tilde_triple(tp);
        for (double u : oracles::centered_log_grid(tangent_point(tp), 1000)) {
            const auto ref = oracles::fd_f_tilde(tp, u);
            if (!(std::abs(tt.eval(u) - ref.value) <= 1e-6 * std::max(ref.scale, 1e-300)))
                ++bad;
        }
    }
    for (int set = 0; set < 100; ++set) {
        const double p = rng.in(1.05, 4.0);
        const double q = p + rng.in(0.1, 3.0);
        const DoublePowerParams dp(rng.log_in(1e-3, 2.0), p, q);
        const double center = tangent_point(tilde_triple(antiderivative_triple(dp)));
        for (double u : oracles::centered_log_grid(center, 1000)) {
            const auto ref = oracles::fd_F_tilde(dp, u);
            if (!(std::abs(eval_F_tilde(dp, u) - ref.value) <=
                  1e-6 * std::max(ref.scale, 1e-300)))
                ++bad;
        }
    }
    report(5, bad == 0, "tilde evaluation matches finite differences on log grids",
           "bad=" + std::to_string(bad));
}

void criterion_6() {
    oracles::Rng rng(1006);
    long bad = 0, skipped = 0;
    for (long i = 0; i < 1000; ++i) {
        const double p = rng.in(1.05, 4.0);
        const double q = p + rng.in(0.1, 3.0);
        const double wc = omega_crit(p, q);
        const double ec = eta_crit(p, q);
        const double omega = rng.log_in(0.05 * wc, 3.0 * ec);
        const DoublePowerParams dp(omega, p, q);

        if (std::abs(omega - wc) > 1e-6 * wc) {
            const TriplePowerParams Ft = tilde_triple(antiderivative_triple(dp));
            bool all_negative = true;
            for (double u : oracles::centered_log_grid(tangent_point(Ft)))
                all_negative = all_negative && Ft.eval(u) < 0.0;
            if (existence_holds(dp) != all_negative) ++bad;
        } else {
            ++skipped;
        }
        if (std::abs(omega - ec) > 1e-6 * ec) {
            bool positive_somewhere = false;
            for (double u : oracles::centered_log_grid(tangent_point(as_triple(dp))))
                positive_somewhere = positive_somewhere || eval_f(dp, u) > 0.0;
            if (uniqueness_condition_holds(dp) != positive_somewhere) ++bad;
        } else {
            ++skipped;
        }
    }
    report(6, bad == 0, "existence/uniqueness predicates agree with sign sampling",
           "bad=" + std::to_string(bad) + " near-threshold skips=" + std::to_string(skipped));
}

// --- criteria 7-10: shooting ---------------------------------------------

const DoublePowerParams kRef(0.1, 3, 5);

struct DissipationAudit {
    long trajectories = 0;
    double worst_step_increase = -1e300;   // n >= 2
    double worst_drift_excess = -1e300;    // n = 1: drift minus its bound
};

TrajectoryObserver audit_observer(const DoublePowerParams& dp, const ShootingConfig& cfg,
                                  DissipationAudit& audit) {
    return [&dp, cfg, &audit](double, const TrajectoryOutcome& out) {
        if (out.profile.empty()) return;
        ++audit.trajectories;
        const double e0 = energy(dp, out.profile.front());
        double prev = e0;
        double drift = 0.0;
        for (const StateVector& s : out.profile) {
            const double e = energy(dp, s);
            if (cfg.n >= 2)
                audit.worst_step_increase = std::max(audit.worst_step_increase, e - prev);
            drift = std::max(drift, std::abs(e - e0));
            prev = e;
        }
        if (cfg.n == 1) {
            const double bound = 1e3 * cfg.rel_tol * std::abs(e0) + 10.0 * cfg.abs_tol;
            audit.worst_drift_excess = std::max(audit.worst_drift_excess, drift - bound);
        }
    };
}

DissipationAudit audit_n1, audit_n3, audit_scan9;

void criterion_7() {
    const auto t0 = std::chrono::steady_clock::now();
    ShootingConfig cfg;
    cfg.n = 1;
    const GroundState gs = find_ground_state(kRef, cfg, audit_observer(kRef, cfg, audit_n1));
    const double ref = detail::bisect([&](double u) { return eval_F(kRef, u); }, 0.1, 0.6, 60);
    const double secs = seconds_since(t0);
    const bool ok = std::abs(gs.alpha - 0.487496) <= 1e-4 && std::abs(gs.alpha - ref) <= 1e-4 &&
                    std::abs(ref - 0.487496) <= 1e-5 && secs < 5.0;
    report(7, ok, "n=1 ground state matches the energy-conservation oracle",
           "alpha=" + fmt17(gs.alpha) + " ref=" + fmt17(ref) +
               " time=" + std::to_string(secs) + "s");
}

void criterion_8() {
    const auto t0 = std::chrono::steady_clock::now();
    ShootingConfig cfg;
    cfg.n = 3;
    const auto obs = audit_observer(kRef, cfg, audit_n3);
    const ScanReport rep = uniqueness_scan(kRef, cfg, 200, obs);
    const GroundState gs = find_ground_state(kRef, cfg, obs);

    bool decreasing = !gs.profile.empty();
    double max_f = 0.0;
    for (std::size_t i = 0; i < gs.profile.size(); ++i) {
        if (!(gs.profile[i].u > 0.0) ||
            (i > 0 && !(gs.profile[i].u < gs.profile[i - 1].u)))
            decreasing = false;
        max_f = std::max(max_f, std::abs(eval_f(kRef, gs.profile[i].u)));
    }
    const double residual_bound = 1e3 * cfg.rel_tol * std::max(1.0, max_f);
    const double secs = seconds_since(t0);
    const bool ok = rep.transitions == 1 && gs.alpha > 0.487496 && gs.alpha < 0.941965 &&
                    decreasing && gs.residuals <= residual_bound && secs < 60.0;
    report(8, ok, "n=3 scan has one transition and the ground state checks out",
           "transitions=" + std::to_string(rep.transitions) + " alpha=" + fmt17(gs.alpha) +
               " residual=" + fmt17(gs.residuals) + " time=" + std::to_string(secs) + "s");
}

void criterion_9() {
    ShootingConfig cfg;
    cfg.n = 3;
    const DoublePowerParams none(0.2, 3, 5);
    const ScanReport rep = uniqueness_scan(none, cfg, 200, audit_observer(none, cfg, audit_scan9));
    long crossed = 0;
    for (TrajectoryKind k : rep.outcomes)
        if (k == TrajectoryKind::Crossed) ++crossed;
    report(9, crossed == 0, "no crossings when existence fails (omega = 0.2)",
           "crossed=" + std::to_string(crossed));
}

void criterion_10() {
    const ShootingConfig defaults;
    const double step_bound = 10.0 * defaults.abs_tol;
    const bool ok = audit_n1.trajectories > 0 && audit_n3.trajectories > 0 &&
                    audit_scan9.trajectories > 0 &&
                    audit_n1.worst_drift_excess <= 0.0 &&
                    audit_n3.worst_step_increase <= step_bound &&
                    audit_scan9.worst_step_increase <= step_bound;
    report(10, ok, "energy dissipation invariant along all criteria 7-9 trajectories",
           "n1 drift excess=" + fmt17(audit_n1.worst_drift_excess) +
               " n3 step increase=" + fmt17(audit_n3.worst_step_increase) +
               " scan9 step increase=" + fmt17(audit_scan9.worst_step_increase));
}

// --- criterion 11: CLI ----------------------------------------------------

void criterion_11(const std::string& cli) {
    if (cli.empty()) {
        report(11, false, "CLI contract", "no CLI path given on the command line");
        return;
    }
    const std::string bin = "'" + cli + "'";
    std::string why;
    bool ok = true;
    auto expect = [&](bool cond, const std::string& what) {
        if (!cond && why.empty()) why = what;
        ok = ok && cond;
    };

    const ExecResult t35 = run_cmd(bin + " thresholds --p 3 --q 5");
    expect(t35.code == 0 && t35.out.find("omega_crit") != std::string::npos &&
               t35.out.find("0.1875") != std::string::npos,
           "thresholds 3 5");
    expect(run_cmd(bin + " thresholds --p 3 --q 3").code == 2, "equal exponents exit 2");
    expect(run_cmd(bin + " classify --a 1 --b 1 --c 1 --p 3 --q 2 --r 5").code == 2,
           "swapped exponents exit 2");

    const ExecResult cls = run_cmd(bin + " classify --a 0.25 --b 1 --c 1 --p 1 --q 2 --r 3");
    expect(cls.code == 0 && cls.out.find("= b") != std::string::npos &&
               cls.out.find("0.5") != std::string::npos,
           "classify tangent case");

    expect(run_cmd(bin + " shoot --omega 0.2 --p 3 --q 5 --n 3").code == 3,
           "non-existence exit 3");
    expect(run_cmd(bin + " shoot --omega 0.1 --p 3 --q 5 --n 3 --r-max 0.01").code == 4,
           "bracket failure exit 4");
    expect(run_cmd(bin + " sweep --p 3:2:2 --q 4:5:2").code == 2, "descending range exit 2");

    const ExecResult shoot1 = run_cmd(bin + " shoot --omega 0.1 --p 3 --q 5 --n 1");
    expect(shoot1.code == 0 && shoot1.out.find("alpha") != std::string::npos &&
               shoot1.out.find("0.4874") != std::string::npos,
           "shoot n=1");

    // sweep: cell count, gap > 0, bit-exact round-trip through a file,
    // point/sweep consistency against the thresholds subcommand
    const ExecResult sweep = run_cmd(bin + " sweep --p 1.5:4:6 --q 2:6:9 --output csv");
    expect(sweep.code == 0, "sweep exit 0");
    const std::string path = "/tmp/acceptance_sweep.csv";
    std::ofstream(path) << sweep.out;
    std::ifstream in(path);
    std::vector<SweepRow> rows;
    try {
        rows = parse_sweep_csv(in);
    } catch (const std::exception& e) {
        expect(false, std::string("sweep CSV parse: ") + e.what());
    }
    expect(rows.size() == 39, "sweep cell count 39");
    for (const SweepRow& row : rows) {
        const double w = omega_crit(row.p, row.q);
        const double e = eta_crit(row.p, row.q);
        const double gap = e - w;
        expect(row.gap > 0.0, "sweep gap positive");
        expect(std::memcmp(&row.omega_crit, &w, sizeof w) == 0 &&
                   std::memcmp(&row.eta_crit, &e, sizeof e) == 0 &&
                   std::memcmp(&row.gap, &gap, sizeof gap) == 0,
               "sweep round-trip bit-exact");
        const ExecResult pt = run_cmd(bin + " thresholds --p " + fmt17(row.p) + " --q " +
                                      fmt17(row.q) + " --output json");
        std::stringstream want;
        write_sweep_row_json(want, row);
        expect(pt.code == 0 && pt.out == want.str(), "point/sweep consistency");
    }

    const ExecResult sc0 = run_cmd(bin + " selfcheck --cases 0");
    expect(sc0.code == 0 && sc0.out.find("warning") != std::string::npos,
           "selfcheck --cases 0 vacuous pass");
    const ExecResult sc_a = run_cmd(bin + " selfcheck --seed 42 --cases 60");
    const ExecResult sc_b = run_cmd(bin + " selfcheck --seed 42 --cases 60");
    expect(sc_a.code == 0 && sc_a.out == sc_b.out, "selfcheck deterministic");

    report(11, ok, "CLI contract (exit codes, consistency, round-trip)", why);
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";

    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11(cli);

    bool all = true;
    for (const Criterion& c : results) {
        std::printf("criterion %2d: %s  %s%s%s\n", c.id, c.pass ? "PASS" : "FAIL",
                    c.label.c_str(), c.detail.empty() ? "" : "  | ", c.detail.c_str());
        all = all && c.pass;
    }
    std::printf("%s\n", all ? "all criteria passed" : "ACCEPTANCE FAILURES PRESENT");
    return all ? 0 : 1;
}
