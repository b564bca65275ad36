#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phaselock/phasemodel.hpp"

namespace phaselock {

/// A solution family tracked across the tau sweep.
struct Branch {
    SolutionKind kind = SolutionKind::InPhase;
    std::vector<double> taus;
    std::vector<PhaseLockedSolution> points;
};

enum class BifurcationKind { Pitchfork, SaddleNodeLocked, SaddleNodeOutOfPhase };

std::string to_string(BifurcationKind k);

struct BifurcationPoint {
    double tau = 0.0;
    BifurcationKind kind = BifurcationKind::Pitchfork;
    double psi = 0.0;
    double omega = 0.0;
    double condition_residual = 0.0; // the defining algebraic condition at tau*
    bool degenerate = false;         // pitchfork with |H'''| below threshold
    bool ambiguous = false;          // another event fired in the same step
    int out_of_phase_delta = 0;      // pitchfork cross-check: change in nearby
                                     // out-of-phase solutions across the event
};

struct SweepOptions {
    SolverOptions solver;
    double branch_match_floor = 1e-3; // linking threshold floor
    double drift_factor = 10.0;       // threshold = factor * estimated per-step drift
    int threads = 1;
    bool track_out_of_phase = true;
};

std::vector<Branch> sweep_tau(double tau_lo, double tau_hi, double step, const PhaseConfig& base,
                              const InteractionFunction& h, const SweepOptions& opts = {});

struct DetectOptions {
    double tau_tol = 1e-8;            // event localization tolerance
    double third_derivative_tol = 1e-6;
    double endpoint_trigger = 0.5;    // try an end-of-branch solve when |event fn| below this
};

std::vector<BifurcationPoint> detect_bifurcations(const std::vector<Branch>& branches,
                                                  const PhaseConfig& base,
                                                  const InteractionFunction& h,
                                                  const DetectOptions& opts = {});

enum class DiagramFormat { Csv, Svg };

/// CSV of branch points / events, or an SVG scatter of (tau, psi) and
/// (tau, omega) with stability-coded markers.
void export_diagram(const std::vector<Branch>& branches,
                    const std::vector<BifurcationPoint>& events, const std::string& path,
                    DiagramFormat format);

/// Round-trip import of the branch CSV written by export_diagram.
std::vector<Branch> import_branches_csv(const std::string& path);

} // namespace phaselock
