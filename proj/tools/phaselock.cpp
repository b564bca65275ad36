// phaselock: reduce coupled-oscillator models to the large-delay phase model,
// enumerate phase-locked solutions, sweep bifurcation diagrams and validate
// against direct DDE integration.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "phaselock/bifurcation.hpp"
#include "phaselock/ddesim.hpp"
#include "phaselock/errors.hpp"
#include "phaselock/manifest.hpp"
#include "phaselock/models.hpp"
#include "phaselock/oscillator.hpp"
#include "phaselock/phasemodel.hpp"

namespace fs = std::filesystem;
using namespace phaselock;

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void write_solutions_csv(const std::string& path, double tau,
                         const std::vector<PhaseLockedSolution>& sols) {
    std::ofstream out(path);
    if (!out) fail("IoFailure", "cannot write " + path);
    out << "tau,psi,omega,kind,a,b,region,stable\n";
    for (const auto& s : sols) {
        out << fmt(tau) << ',' << fmt(s.psi) << ',' << fmt(s.omega) << ',' << to_string(s.kind)
            << ',' << fmt(s.a) << ',' << fmt(s.b) << ',' << to_string(s.region) << ','
            << to_string(s.stable) << "\n";
    }
}

struct GlobalArgs {
    std::string out_dir = ".";
    unsigned seed = 0;
    int threads = 1;
};

int cmd_reduce(const GlobalArgs& g, const std::string& model_path, int K, int n_phi,
               const std::string& out_name) {
    ModelConfig mc = load_model_config(model_path);
    LimitCycle lc = find_limit_cycle(mc.vf, mc.guess, mc.t_transient, mc.cycle_tol,
                                     {.dt = mc.dt});
    AdjointSolution adj = solve_adjoint(mc.vf, lc);
    InteractionFunction h = compute_H(lc, adj, mc.coupling, n_phi, K);

    fs::create_directories(g.out_dir);
    std::string h_path = join_path(g.out_dir, out_name);
    h.save(h_path);

    nlohmann::json rep;
    rep["model"] = mc.model_name;
    rep["period"] = lc.period();
    rep["omega"] = lc.omega();
    rep["a"] = h.cos_coeffs();
    rep["b"] = h.sin_coeffs();
    std::string rep_path = join_path(g.out_dir, "reduce_report.json");
    std::ofstream rep_out(rep_path);
    rep_out << rep.dump(1) << "\n";

    std::printf("model %s: T = %.6f, Omega = %.6f\n", mc.model_name.c_str(), lc.period(),
                lc.omega());
    std::printf("  k   a_k            b_k\n");
    std::printf("  0   %+ .7f\n", h.cos_coeffs()[0]);
    for (int k = 1; k <= h.modes(); ++k)
        std::printf("  %d   %+ .7f   %+ .7f\n", k, h.cos_coeffs()[size_t(k)],
                    h.sin_coeffs()[size_t(k) - 1]);

    RunManifest man;
    man.command = "reduce";
    man.config = {{"model", model_path}, {"K", std::to_string(K)},
                  {"n_phi", std::to_string(n_phi)}, {"out", h_path}};
    man.add_input(model_path);
    man.outputs = {h_path, rep_path};
    man.write(join_path(g.out_dir, "manifest_reduce.json"));
    return 0;
}

int cmd_solve(const GlobalArgs& g, const std::string& h_path, double eps, double Om, double tau,
              const std::string& out_name) {
    InteractionFunction h = InteractionFunction::load(h_path);
    PhaseConfig cfg{eps, Om, tau};
    std::vector<PhaseLockedSolution> sols;
    for (double psi : {0.0, std::numbers::pi}) {
        auto v = find_locked_frequencies(psi, cfg, h);
        sols.insert(sols.end(), v.begin(), v.end());
    }
    try {
        auto v = find_out_of_phase(cfg, h);
        sols.insert(sols.end(), v.begin(), v.end());
    } catch (const Error& e) {
        if (e.code() != "DegenerateContinuum") throw;
        std::fprintf(stderr, "note: out-of-phase solutions form a continuum; only the locked families are listed\n");
    }

    fs::create_directories(g.out_dir);
    std::string csv = join_path(g.out_dir, out_name);
    write_solutions_csv(csv, tau, sols);
    for (const auto& s : sols)
        std::printf("psi = %-12.8g omega = %-14.10g %-5s %s\n", s.psi, s.omega,
                    to_string(s.kind).c_str(), to_string(s.stable).c_str());

    RunManifest man;
    man.command = "solve";
    man.config = {{"h", h_path}, {"epsilon", fmt(eps)}, {"omega", fmt(Om)}, {"tau", fmt(tau)}};
    man.add_input(h_path);
    man.outputs = {csv};
    man.write(join_path(g.out_dir, "manifest_solve.json"));
    return 0;
}

int cmd_sweep(const GlobalArgs& g, const std::string& h_path, double eps, double Om, double lo,
              double hi, double step) {
    InteractionFunction h = InteractionFunction::load(h_path);
    PhaseConfig base{eps, Om, 0.0};
    SweepOptions opts;
    opts.threads = g.threads;
    auto branches = sweep_tau(lo, hi, step, base, h, opts);
    auto events = detect_bifurcations(branches, base, h);

    fs::create_directories(g.out_dir);
    std::string csv = join_path(g.out_dir, "branches.csv");
    std::string svg = join_path(g.out_dir, "diagram.svg");
    export_diagram(branches, events, csv, DiagramFormat::Csv);
    export_diagram(branches, events, svg, DiagramFormat::Svg);

    std::printf("%zu branches, %zu events\n", branches.size(), events.size());
    for (const auto& ev : events)
        std::printf("  tau* = %-12.8g %-26s psi = %-10.6g omega = %-12.8g residual = %.2e%s%s\n",
                    ev.tau, to_string(ev.kind).c_str(), ev.psi, ev.omega, ev.condition_residual,
                    ev.degenerate ? " [degenerate]" : "", ev.ambiguous ? " [ambiguous]" : "");

    RunManifest man;
    man.command = "sweep";
    man.config = {{"h", h_path},   {"epsilon", fmt(eps)}, {"omega", fmt(Om)},
                  {"tau_min", fmt(lo)}, {"tau_max", fmt(hi)}, {"step", fmt(step)},
                  {"threads", std::to_string(g.threads)}};
    man.add_input(h_path);
    man.outputs = {csv, svg};
    man.write(join_path(g.out_dir, "manifest_sweep.json"));
    return 0;
}

Vec parse_history(const std::string& text) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
    return Eigen::Map<const Vec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

int cmd_simulate(const GlobalArgs& g, const std::string& model_path, double eps, double tau,
                 const std::string& history, double t_end, const std::string& out_name) {
    ModelConfig mc = load_model_config(model_path);
    LimitCycle lc = find_limit_cycle(mc.vf, mc.guess, mc.t_transient, mc.cycle_tol,
                                     {.dt = mc.dt});
    PhaseConfig cfg{eps, lc.omega(), tau};
    Vec hist = parse_history(history);
    Trajectory traj = simulate_full_coupled(mc.vf, mc.coupling, cfg, hist, t_end);

    fs::create_directories(g.out_dir);
    std::string csv = join_path(g.out_dir, out_name);
    std::vector<std::string> cols;
    for (int i = 1; i <= 2; ++i) {
        cols.push_back("v" + std::to_string(i));
        if (mc.vf.dim == 2) cols.push_back("w" + std::to_string(i));
        for (int e = 2; e < mc.vf.dim; ++e) cols.push_back("x" + std::to_string(i) + "_" + std::to_string(e));
    }
    traj.write_csv(csv, cols);

    std::printf("Omega = %.6f, simulated %g time units\n", lc.omega(), traj.t1());
    try {
        auto m = measure_period_and_phase(traj, 0, mc.vf.dim);
        double om_full = frequency_deviation(m.period, eps);
        std::printf("locked: T = %.8f, psi = %.6f, omega_full = %.6f\n", m.period, m.psi, om_full);
    } catch (const Error& e) {
        std::printf("not locked (%s)\n", e.code().c_str());
    }

    RunManifest man;
    man.command = "simulate";
    man.config = {{"model", model_path}, {"epsilon", fmt(eps)}, {"tau", fmt(tau)},
                  {"history", history},  {"t_end", fmt(t_end)}};
    man.add_input(model_path);
    man.outputs = {csv};
    man.write(join_path(g.out_dir, "manifest_simulate.json"));
    return 0;
}

int cmd_compare(const GlobalArgs& g, const std::string& model_path, const std::string& h_path,
                double eps, const std::string& histories_path, const std::string& taus_arg,
                double t_end) {
    ModelConfig mc = load_model_config(model_path);
    InteractionFunction h = InteractionFunction::load(h_path);
    LimitCycle lc = find_limit_cycle(mc.vf, mc.guess, mc.t_transient, mc.cycle_tol,
                                     {.dt = mc.dt});
    const double Om = lc.omega();

    std::ifstream hin(histories_path);
    if (!hin) fail("IoFailure", "cannot open histories " + histories_path);
    nlohmann::json entries;
    try {
        hin >> entries;
    } catch (const nlohmann::json::exception& e) {
        fail("ConfigError", std::string("histories file: ") + e.what());
    }

    std::vector<double> taus;
    if (!taus_arg.empty()) {
        std::stringstream ss(taus_arg);
        std::string tok;
        while (std::getline(ss, tok, ',')) taus.push_back(std::stod(tok));
    }

    fs::create_directories(g.out_dir);
    std::string csv_path = join_path(g.out_dir, "comparison.csv");
    std::ofstream out(csv_path);
    out << "tau,psi_kind,omega_phase,omega_full,E_N\n";

    for (const auto& entry : entries) {
        double tau = entry.at("tau").get<double>();
        if (!taus.empty() && std::none_of(taus.begin(), taus.end(), [&](double t) {
                return std::fabs(t - tau) < 1e-12;
            }))
            continue;
        auto hist_v = entry.at("history").get<std::vector<double>>();
        Vec hist = Eigen::Map<const Vec>(hist_v.data(), static_cast<Eigen::Index>(hist_v.size()));
        double run_t_end = entry.value("t_end", t_end);

        PhaseConfig cfg{eps, Om, tau};
        Trajectory traj = simulate_full_coupled(mc.vf, mc.coupling, cfg, hist, run_t_end);
        auto m = measure_period_and_phase(traj, 0, mc.vf.dim);
        FullRunResult run;
        run.tau = tau;
        run.omega_full = frequency_deviation(m.period, eps);
        if (circular_distance(m.psi, 0.0) < 0.5) run.kind = SolutionKind::InPhase;
        else if (circular_distance(m.psi, std::numbers::pi) < 0.5) run.kind = SolutionKind::AntiPhase;
        else run.kind = SolutionKind::OutOfPhase;

        std::vector<PhaseLockedSolution> sols;
        for (double psi : {0.0, std::numbers::pi}) {
            auto v = find_locked_frequencies(psi, cfg, h);
            sols.insert(sols.end(), v.begin(), v.end());
        }
        if (run.kind == SolutionKind::OutOfPhase) {
            auto v = find_out_of_phase(cfg, h);
            sols.insert(sols.end(), v.begin(), v.end());
        }
        for (const auto& rec : compare(sols, tau, {run})) {
            out << fmt(rec.tau) << ',' << to_string(rec.psi_kind) << ',' << fmt(rec.omega_phase)
                << ',' << fmt(rec.omega_full) << ',' << fmt(rec.e_n) << "\n";
            std::printf("tau = %-8g %-5s omega_phase = %-12.8g omega_full = %-12.8g E_N = %.4f\n",
                        rec.tau, to_string(rec.psi_kind).c_str(), rec.omega_phase, rec.omega_full,
                        rec.e_n);
        }
    }

    RunManifest man;
    man.command = "compare";
    man.config = {{"model", model_path}, {"h", h_path}, {"epsilon", fmt(eps)},
                  {"histories", histories_path}, {"t_end", fmt(t_end)}};
    man.add_input(model_path);
    man.add_input(h_path);
    man.add_input(histories_path);
    man.outputs = {csv_path};
    man.write(join_path(g.out_dir, "manifest_compare.json"));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase-locked dynamics of two delay-coupled oscillators"};
    app.require_subcommand(1);

    GlobalArgs g;
    app.add_option("--out-dir", g.out_dir, "output directory")->capture_default_str();
    app.add_option("--seed", g.seed, "seed for randomized scans")->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads for sweeps")->capture_default_str();

    auto* reduce = app.add_subcommand("reduce", "limit cycle + adjoint -> interaction function H");
    std::string model_path, out_name = "H.json";
    int K = 4, n_phi = 512;
    reduce->add_option("--model", model_path, "model config JSON")->required();
    reduce->add_option("--K", K, "Fourier modes")->capture_default_str();
    reduce->add_option("--n-phi", n_phi, "quadrature offsets")->capture_default_str();
    reduce->add_option("--out", out_name, "output H file name")->capture_default_str();

    auto* solve = app.add_subcommand("solve", "enumerate phase-locked solutions at fixed tau");
    std::string h_path, sol_out = "solutions.csv";
    double eps = 0.0, Om = 1.0, tau = 0.0;
    solve->add_option("--h-file", h_path, "interaction function JSON")->required();
    solve->add_option("--epsilon", eps)->required();
    solve->add_option("--omega", Om)->required();
    solve->add_option("--tau", tau)->required();
    solve->add_option("--out", sol_out)->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "tau sweep with branch tracking and bifurcations");
    double tau_min = 0.0, tau_max = 1.0, step = 0.1;
    sweep->add_option("--h-file", h_path, "interaction function JSON")->required();
    sweep->add_option("--epsilon", eps)->required();
    sweep->add_option("--omega", Om)->required();
    sweep->add_option("--tau-min", tau_min)->required();
    sweep->add_option("--tau-max", tau_max)->required();
    sweep->add_option("--step", step)->required();

    auto* simulate = app.add_subcommand("simulate", "integrate the full delay-coupled pair");
    std::string history, traj_out = "traj.csv";
    double t_end = 400.0 * two_pi;
    simulate->add_option("--model", model_path, "model config JSON")->required();
    simulate->add_option("--epsilon", eps)->required();
    simulate->add_option("--tau", tau)->required();
    simulate->add_option("--history", history, "comma-separated constant history")->required();
    simulate->add_option("--t-end", t_end)->capture_default_str();
    simulate->add_option("--out", traj_out)->capture_default_str();

    auto* comparec = app.add_subcommand("compare", "phase model vs full model frequency table");
    std::string histories_path, taus_arg;
    comparec->add_option("--model", model_path, "model config JSON")->required();
    comparec->add_option("--h-file", h_path, "interaction function JSON")->required();
    comparec->add_option("--epsilon", eps)->required();
    comparec->add_option("--histories", histories_path, "JSON list of {tau, history}")->required();
    comparec->add_option("--tau", taus_arg, "comma-separated subset of tau values");
    comparec->add_option("--t-end", t_end)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (reduce->parsed()) return cmd_reduce(g, model_path, K, n_phi, out_name);
        if (solve->parsed()) return cmd_solve(g, h_path, eps, Om, tau, sol_out);
        if (sweep->parsed()) return cmd_sweep(g, h_path, eps, Om, tau_min, tau_max, step);
        if (simulate->parsed()) return cmd_simulate(g, model_path, eps, tau, history, t_end, traj_out);
        if (comparec->parsed()) return cmd_compare(g, model_path, h_path, eps, histories_path, taus_arg, t_end);
    } catch (const Error& e) {
        std::fprintf(stderr, "error[%s] %s\n", e.code().c_str(), e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error[Internal] %s\n", e.what());
        return 3;
    }
    return 1;
}
