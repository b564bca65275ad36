#pragma once

#include <functional>

#include "phaselock/fourier.hpp"
#include "phaselock/types.hpp"

namespace phaselock {

/// Autonomous vector field dx/dt = rhs(x), x in R^m, with Jacobian.
struct VectorField {
    int dim = 0;
    std::function<Vec(const Vec&)> rhs;
    std::function<Mat(const Vec&)> jacobian;
};

/// Central-difference Jacobian for fields without an analytic one.
std::function<Mat(const Vec&)> finite_difference_jacobian(std::function<Vec(const Vec&)> rhs,
                                                          int dim, double step = 1e-6);

/// Pairwise coupling g(self, delayed_other) -> R^m, in the units of the
/// unscaled vector field (no 1/Omega factor; that lives in the phase model).
struct CouplingFunction {
    int dim = 0;
    std::function<Vec(const Vec&, const Vec&)> g;
};

/// Periodic orbit of the uncoupled system, sampled at n uniform phases
/// rho_j = 2*pi*j/n. `period` is in the unscaled time units.
class LimitCycle {
public:
    LimitCycle() = default;
    LimitCycle(Mat samples, double period);

    int n() const { return static_cast<int>(samples_.rows()); }
    int dim() const { return static_cast<int>(samples_.cols()); }
    double period() const { return period_; }
    double omega() const { return two_pi / period_; }
    const Mat& samples() const { return samples_; }

    /// State at arbitrary phase, periodic 4-point cubic interpolation.
    Vec at_phase(double rho) const;

private:
    Mat samples_;
    double period_ = 0.0;
};

/// Periodic adjoint (infinitesimal phase response) on the same phase grid as
/// the paired cycle, normalized so (1/2pi) \oint Z.F(gamma) drho = 1.
class AdjointSolution {
public:
    AdjointSolution() = default;
    explicit AdjointSolution(Mat samples) : samples_(std::move(samples)) {}

    int n() const { return static_cast<int>(samples_.rows()); }
    int dim() const { return static_cast<int>(samples_.cols()); }
    const Mat& samples() const { return samples_; }
    Vec at_phase(double rho) const;

private:
    Mat samples_;
};

struct CycleOptions {
    double dt = 1e-3;         // integrator step for transient / section hunting
    int n_samples = 1024;     // phase grid size of the returned cycle
    double max_time = 4000.0; // section-hunt budget after the transient
    double crossing_time_tol = 1e-10;
};

/// Locate the attracting cycle reachable from `guess`: run the transient,
/// erect a Poincare section through the post-transient point normal to the
/// flow, iterate returns until the section point converges below `tol`.
LimitCycle find_limit_cycle(const VectorField& vf, const Vec& guess, double t_transient,
                            double tol, const CycleOptions& opts = {});

struct AdjointOptions {
    double tol = 1e-8;     // successive-period sup-norm difference
    int max_periods = 500;
};

/// Backward integration of dZ/drho = -(1/Omega) DF(gamma(rho))^T Z to the
/// periodic solution, then rescaled to the Malkin normalization.
AdjointSolution solve_adjoint(const VectorField& vf, const LimitCycle& lc,
                              const AdjointOptions& opts = {});

/// Phase interaction function H(phi) = (1/2pi) \oint Z(rho)^T g(gamma(rho),
/// gamma(rho+phi)) drho, evaluated at n_phi uniform offsets and projected on
/// `n_modes` Fourier modes.
InteractionFunction compute_H(const LimitCycle& lc, const AdjointSolution& adj,
                              const CouplingFunction& g, int n_phi, int n_modes = 4);

} // namespace phaselock
