#include "phaselock/ddesim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "phaselock/errors.hpp"

namespace phaselock {

Trajectory::Trajectory(double t0, double dt, std::function<Vec(double)> history)
    : t0_(t0), dt_(dt), history_(std::move(history)) {}

void Trajectory::push_node(double t, Vec y, Vec f) {
    ts_.push_back(t);
    ys_.push_back(std::move(y));
    fs_.push_back(std::move(f));
}

Vec Trajectory::eval(double t) const {
    if (t < t0_) return history_(t);
    if (ts_.empty()) fail("IoFailure", "empty trajectory");
    if (t >= ts_.back()) return ys_.back();
    // fixed-step grid: locate the segment directly
    std::size_t i = static_cast<std::size_t>((t - t0_) / dt_);
    if (i >= ts_.size() - 1) i = ts_.size() - 2;
    while (i > 0 && ts_[i] > t) --i;
    while (i + 2 < ts_.size() && ts_[i + 1] < t) ++i;
    const double h = ts_[i + 1] - ts_[i];
    const double u = (t - ts_[i]) / h;
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * ys_[i] + ((u3 - 2 * u2 + u) * h) * fs_[i] +
           (-2 * u3 + 3 * u2) * ys_[i + 1] + ((u3 - u2) * h) * fs_[i + 1];
}

void Trajectory::write_csv(const std::string& path, const std::vector<std::string>& columns) const {
    std::ofstream out(path);
    if (!out) fail("IoFailure", "cannot write " + path);
    out << "t";
    for (const auto& c : columns) out << "," << c;
    out << "\n";
    char buf[32];
    for (std::size_t k = 0; k < ts_.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", ts_[k]);
        out << buf;
        for (int j = 0; j < ys_[k].size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", ys_[k][j]);
            out << "," << buf;
        }
        out << "\n";
    }
}

Trajectory integrate_dde(const DdeSystem& sys, const Vec& constant_history, double t_end,
                         double dt) {
    Vec h0 = constant_history;
    return integrate_dde(sys, [h0](double) { return h0; }, t_end, dt);
}

Trajectory integrate_dde(const DdeSystem& sys, std::function<Vec(double)> history, double t_end,
                         double dt) {
    if (t_end <= 0.0) fail("ConfigError", "t_end must be positive");
    if (dt <= 0.0) fail("ConfigError", "dt must be positive");
    for (double d : sys.delays)
        if (dt > d) fail("StepTooLarge", "dt exceeds a delay; method of steps needs dt <= min delay");

    Trajectory traj(0.0, dt, history);
    Vec y = history(0.0);
    std::vector<Vec> delayed(sys.delays.size());
    auto eval_rhs = [&](double t, const Vec& state) {
        for (std::size_t k = 0; k < sys.delays.size(); ++k)
            delayed[k] = traj.eval(t - sys.delays[k]);
        return sys.rhs(t, state, delayed);
    };

    Vec f = eval_rhs(0.0, y);
    traj.push_node(0.0, y, f);
    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-12));
    for (std::size_t i = 0; i < n_steps; ++i) {
        const double t = i * dt;
        Vec k1 = f;
        Vec k2 = eval_rhs(t + 0.5 * dt, y + 0.5 * dt * k1);
        Vec k3 = eval_rhs(t + 0.5 * dt, y + 0.5 * dt * k2);
        Vec k4 = eval_rhs(t + dt, y + dt * k3);
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!y.allFinite()) fail("NonFinite", "state left finite range during integration");
        f = eval_rhs(t + dt, y);
        traj.push_node(t + dt, y, f);
    }
    return traj;
}

Trajectory integrate_linearized(double a, double b, double eta, const Vec& history_perturbation,
                                double s_end, double dt) {
    if (eta <= 0.0) fail("ConfigError", "integrate_linearized requires eta > 0");
    DdeSystem sys;
    sys.dim = 2;
    sys.delays = {1.0};
    sys.rhs = [a, b, eta](double, const Vec& u, const std::vector<Vec>& del) {
        Vec d(2);
        d << -eta * a * u[0] + eta * a * del[0][1],
             -eta * b * u[1] + eta * b * del[0][0];
        return d;
    };
    return integrate_dde(sys, history_perturbation, s_end, dt);
}

double linearized_growth_rate(double a, double b, double eta, const Vec& history_perturbation,
                              double s_end, double dt) {
    Trajectory traj = integrate_linearized(a, b, eta, history_perturbation, s_end, dt);
    // window maxima of |U2 - U1| over unit-delay windows, then a least-squares
    // line through log of the tail
    const auto& ts = traj.times();
    const auto& ys = traj.states();
    std::vector<double> wt, wv;
    double cur_max = 0.0;
    double window_end = 1.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        cur_max = std::max(cur_max, std::fabs(ys[i][1] - ys[i][0]));
        if (ts[i] >= window_end || i + 1 == ts.size()) {
            wt.push_back(window_end - 0.5);
            wv.push_back(cur_max);
            cur_max = 0.0;
            window_end += 1.0;
        }
    }
    std::size_t lo = wt.size() * 2 / 5;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = lo; i < wt.size(); ++i) {
        if (wv[i] <= 0.0) return -1e9; // difference identically zero: pure translation mode
        sx += wt[i];
        sy += std::log(wv[i]);
        sxx += wt[i] * wt[i];
        sxy += wt[i] * std::log(wv[i]);
        ++n;
    }
    if (n < 2) fail("NoConvergence", "not enough windows for a growth-rate fit");
    return (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
}

Trajectory simulate_full_coupled(const VectorField& vf, const CouplingFunction& g,
                                 const PhaseConfig& cfg, const Vec& history4, double t_end,
                                 double dt) {
    const int m = vf.dim;
    if (g.dim != m) fail("GridMismatch", "coupling dimension differs from vector field");
    if (history4.size() != 2 * m) fail("ConfigError", "history must have dimension 2m");
    const double delay = cfg.omega * cfg.tau;
    const double om = cfg.omega;
    const double eps_om = cfg.epsilon / om;
    if (dt <= 0.0) dt = std::min(delay > 0.0 ? delay : two_pi, two_pi) / 200.0;

    DdeSystem sys;
    sys.dim = 2 * m;
    if (delay > 0.0) sys.delays = {delay};
    sys.rhs = [=, &vf, &g](double, const Vec& x, const std::vector<Vec>& del) {
        const Vec& past = del.empty() ? x : del[0];
        Vec x1 = x.head(m), x2 = x.tail(m);
        Vec p1 = past.head(m), p2 = past.tail(m);
        Vec d(2 * m);
        d.head(m) = vf.rhs(x1) / om + eps_om * g.g(x1, p2);
        d.tail(m) = vf.rhs(x2) / om + eps_om * g.g(x2, p1);
        return d;
    };
    return integrate_dde(sys, history4, t_end, dt);
}

namespace {

struct Peak {
    double t;
    double v;
};

std::vector<Peak> find_peaks(const Trajectory& traj, int comp, double t_min) {
    const auto& ts = traj.times();
    const auto& ys = traj.states();
    std::vector<Peak> peaks;
    for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
        if (ts[i] < t_min) continue;
        double ym = ys[i - 1][comp], y0 = ys[i][comp], yp = ys[i + 1][comp];
        if (y0 >= ym && y0 > yp) {
            // quadratic interpolation through the three nodes
            double denom = ym - 2.0 * y0 + yp;
            double shift = std::fabs(denom) > 1e-300 ? 0.5 * (ym - yp) / denom : 0.0;
            shift = std::clamp(shift, -0.5, 0.5);
            peaks.push_back({ts[i] + shift * traj.dt(),
                             y0 - 0.25 * (ym - yp) * shift});
        }
    }
    return peaks;
}

} // namespace

PeriodMeasurement measure_period_and_phase(const Trajectory& traj, int comp_i, int comp_j,
                                           double transient_fraction, double spread_tol) {
    const double t_min = traj.t0() + transient_fraction * (traj.t1() - traj.t0());
    auto pi_ = find_peaks(traj, comp_i, t_min);
    auto pj = find_peaks(traj, comp_j, t_min);
    if (pi_.size() < 4 || pj.size() < 2) fail("NotLocked", "too few peaks after the transient");

    std::vector<double> intervals;
    for (std::size_t k = 1; k < pi_.size(); ++k) intervals.push_back(pi_[k].t - pi_[k - 1].t);
    double mean = (pi_.back().t - pi_.front().t) / double(pi_.size() - 1);
    auto [mn, mx] = std::minmax_element(intervals.begin(), intervals.end());
    if ((*mx - *mn) / mean > spread_tol)
        fail("NotLocked", "inter-peak interval spread above tolerance");

    // circular mean of the offsets of j-peaks from the nearest i-peak
    double cs = 0.0, sn = 0.0;
    int used = 0;
    for (const auto& pk : pj) {
        // nearest i-peak
        double best = 1e300;
        for (const auto& qi : pi_) {
            double d = pk.t - qi.t;
            if (std::fabs(d) < std::fabs(best)) best = d;
        }
        if (std::fabs(best) > mean) continue;
        double ang = two_pi * best / mean;
        cs += std::cos(ang);
        sn += std::sin(ang);
        ++used;
    }
    if (used == 0) fail("NotLocked", "no pairable peaks between the two components");

    PeriodMeasurement out;
    out.period = mean;
    out.psi = wrap_angle(std::atan2(sn, cs));
    out.n_peaks = static_cast<int>(pi_.size());
    return out;
}

double frequency_deviation(double period, double epsilon) {
    if (period <= 0.0) fail("ConfigError", "period must be positive");
    if (epsilon <= 0.0) fail("ConfigError", "epsilon must be positive");
    return (two_pi / period - 1.0) / epsilon;
}

std::vector<ComparisonRecord> compare(const std::vector<PhaseLockedSolution>& phase_solutions,
                                      double tau, const std::vector<FullRunResult>& full_runs) {
    std::vector<ComparisonRecord> out;
    for (const auto& run : full_runs) {
        if (run.tau != tau) continue;
        const PhaseLockedSolution* best = nullptr;
        double best_d = 1e300;
        for (const auto& s : phase_solutions) {
            if (s.kind != run.kind) continue;
            double d = std::fabs(s.omega - run.omega_full);
            if (d < best_d) {
                best_d = d;
                best = &s;
            }
        }
        if (best == nullptr || best_d > 1.0)
            fail("NoMatch", "no phase-model solution within distance 1.0 of a full-model run");
        ComparisonRecord rec;
        rec.tau = tau;
        rec.psi_kind = run.kind;
        rec.omega_phase = best->omega;
        rec.omega_full = run.omega_full;
        rec.e_n = (rec.omega_phase - rec.omega_full) / rec.omega_full;
        out.push_back(rec);
    }
    return out;
}

} // namespace phaselock
