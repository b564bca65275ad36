#pragma once

#include <functional>
#include <string>
#include <vector>

#include "phaselock/oscillator.hpp"
#include "phaselock/phasemodel.hpp"
#include "phaselock/types.hpp"

namespace phaselock {

/// Delay system y'(t) = rhs(t, y(t), {y(t - d_k)}).
struct DdeSystem {
    int dim = 0;
    std::vector<double> delays; // all strictly positive; empty means plain ODE
    std::function<Vec(double, const Vec&, const std::vector<Vec>&)> rhs;
};

/// Dense solution with cubic Hermite interpolation between fixed-step nodes
/// and a history callback for t < t0.
class Trajectory {
public:
    Trajectory(double t0, double dt, std::function<Vec(double)> history);

    double t0() const { return t0_; }
    double t1() const { return ts_.empty() ? t0_ : ts_.back(); }
    double dt() const { return dt_; }
    std::size_t size() const { return ts_.size(); }
    const std::vector<double>& times() const { return ts_; }
    const std::vector<Vec>& states() const { return ys_; }
    const std::vector<Vec>& derivatives() const { return fs_; }

    Vec eval(double t) const;

    void push_node(double t, Vec y, Vec f);
    void write_csv(const std::string& path, const std::vector<std::string>& columns) const;

private:
    double t0_ = 0.0;
    double dt_ = 0.0;
    std::function<Vec(double)> history_;
    std::vector<double> ts_;
    std::vector<Vec> ys_;
    std::vector<Vec> fs_;
};

/// Method-of-steps classical RK4 with Hermite dense output for the delayed
/// lookups. Requires dt <= min delay.
Trajectory integrate_dde(const DdeSystem& sys, const Vec& constant_history, double t_end,
                         double dt);
Trajectory integrate_dde(const DdeSystem& sys, std::function<Vec(double)> history, double t_end,
                         double dt);

/// Scaled linearization about a phase-locked solution:
/// U1' = -eta a U1 + eta a U2(s-1), U2' = -eta b U2 + eta b U1(s-1).
Trajectory integrate_linearized(double a, double b, double eta, const Vec& history_perturbation,
                                double s_end = 80.0, double dt = 5e-3);

/// Exponential rate of the non-neutral part, fitted on log ||U2 - U1|| window
/// maxima after the transient. The translation mode (1,1) is annihilated by
/// the difference.
double linearized_growth_rate(double a, double b, double eta, const Vec& history_perturbation,
                              double s_end = 80.0, double dt = 5e-3);

/// The frequency-normalized coupled pair: dX_i/drho = F(X_i)/Omega +
/// (eps/Omega) g(X_i(rho), X_j(rho - Omega tau)), constant history.
Trajectory simulate_full_coupled(const VectorField& vf, const CouplingFunction& g,
                                 const PhaseConfig& cfg, const Vec& history4, double t_end,
                                 double dt = 0.0);

struct PeriodMeasurement {
    double period = 0.0;
    double psi = 0.0; // phase offset of component j relative to component i
    int n_peaks = 0;
};

/// Peak-based period and phase-difference extraction; the leading
/// `transient_fraction` of the trajectory is discarded. NotLocked when the
/// inter-peak intervals have relative spread above `spread_tol`.
PeriodMeasurement measure_period_and_phase(const Trajectory& traj, int comp_i, int comp_j,
                                           double transient_fraction = 0.6,
                                           double spread_tol = 1e-3);

/// omega* ~ (2*pi/T - 1)/eps for the normalized system.
double frequency_deviation(double period, double epsilon);

struct ComparisonRecord {
    double tau = 0.0;
    SolutionKind psi_kind = SolutionKind::InPhase;
    double omega_phase = 0.0;
    double omega_full = 0.0;
    double e_n = 0.0; // (omega_phase - omega_full)/omega_full
};

struct FullRunResult {
    double tau = 0.0;
    SolutionKind kind = SolutionKind::InPhase;
    double omega_full = 0.0;
};

/// Match each full-model measurement to the nearest phase-model frequency of
/// the same (tau, kind); NoMatch if the nearest is further than 1.0.
std::vector<ComparisonRecord> compare(const std::vector<PhaseLockedSolution>& phase_solutions,
                                      double tau, const std::vector<FullRunResult>& full_runs);

} // namespace phaselock
