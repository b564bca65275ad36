#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "phaselock/fourier.hpp"
#include "phaselock/types.hpp"

namespace phaselock {

/// Parameters of the large-delay phase model. eta is always derived.
struct PhaseConfig {
    double epsilon = 0.0; // coupling strength, > 0
    double omega = 1.0;   // natural frequency Omega, > 0
    double tau = 0.0;     // transmission delay, >= 0

    double eta() const { return epsilon * omega * tau; }
};

enum class SolutionKind { InPhase, AntiPhase, OutOfPhase };
enum class Stability { Stable, Unstable, Marginal };

/// Characteristic-root layout per the sign triple (ab, a+b, a+b+2*eta*ab).
enum class RootRegion {
    PosRealRoot,         // a real root in the right half plane
    DoubleZero,          // zero root of multiplicity two (eta at its critical value)
    SimpleZeroOnlyStable,// simple zero, everything else in the left half plane
    TwoZeroRoots,        // ab = 0, a+b = 0
    ZeroPlusNegative,    // ab = 0, a+b > 0
    ZeroPlusPositive     // ab = 0, a+b < 0
};

std::string to_string(SolutionKind k);
std::string to_string(Stability s);
std::string to_string(RootRegion r);
SolutionKind solution_kind_from_string(const std::string& s);

struct PhaseLockedSolution {
    double psi = 0.0;   // natural phase difference, canonical [0, 2*pi)
    double omega = 0.0; // frequency deviation
    SolutionKind kind = SolutionKind::InPhase;
    double a = 0.0, b = 0.0; // linearization coefficients
    RootRegion region = RootRegion::SimpleZeroOnlyStable;
    Stability stable = Stability::Marginal;
};

struct Classification {
    double a = 0.0, b = 0.0;
    RootRegion region = RootRegion::SimpleZeroOnlyStable;
    Stability verdict = Stability::Marginal;
};

struct SolverOptions {
    int n_scan = 4096;          // 1D bracket-scan resolution
    int n_psi = 192;            // out-of-phase seeding grid
    int n_omega = 256;
    double dedup_tol = 1e-7;    // Euclidean (psi, omega) duplicate threshold
    double marginal_tol = 1e-6; // sign-test margin before flagging Marginal
    double kind_tol = 1e-6;     // circular distance to call psi 0 or pi
};

/// F(omega, arg) = omega - H(arg - omega*eta - Omega*tau)/Omega  (zero at a
/// phase-locked solution with psi = arg and psi = -arg simultaneously).
double residual_F(double omega, double arg, const PhaseConfig& cfg, const InteractionFunction& h);

/// Search bracket |omega| <= max|H|/Omega + 1; every root satisfies
/// omega = H(.)/Omega, so the bracket is exhaustive.
double omega_bracket(const PhaseConfig& cfg, const InteractionFunction& h);

/// All frequency deviations for the in-phase (psi=0) or anti-phase (psi=pi)
/// family, each classified. psi_star must be 0 or pi.
std::vector<PhaseLockedSolution> find_locked_frequencies(double psi_star, const PhaseConfig& cfg,
                                                         const InteractionFunction& h,
                                                         const SolverOptions& opts = {});

/// All isolated out-of-phase solutions (psi not in {0, pi}), reported in
/// mirror pairs (psi, 2*pi - psi). Throws DegenerateContinuum when the
/// residual system is rank-deficient along a curve of solutions.
std::vector<PhaseLockedSolution> find_out_of_phase(const PhaseConfig& cfg,
                                                   const InteractionFunction& h,
                                                   const SolverOptions& opts = {});

/// Linearization coefficients and verdict for a solution of the residual
/// system. a = H'(psi - omega*eta - Omega*tau)/Omega, b likewise at -psi.
Classification classify_stability(double psi, double omega, const PhaseConfig& cfg,
                                  const InteractionFunction& h, double marginal_tol = 1e-6);

/// Same taxonomy applied to raw linearization coefficients.
Classification classify_from_ab(double a, double b, double eta, double marginal_tol = 1e-6);

/// Delta(lambda) = lambda^2 + eta(a+b) lambda + eta^2 ab - eta^2 ab e^{-2 lambda}.
std::complex<double> characteristic_residual(std::complex<double> lambda, double a, double b,
                                             double eta);

/// |f(iy)|^2 - |g(iy)|^2 for the factor split f = (iy+eta a)(iy+eta b),
/// g = eta^2 ab e^{-2iy}; equals y^2 (y^2 + eta^2 (a^2+b^2)) identically,
/// which is positive for y != 0 (no pure imaginary roots).
double imaginary_axis_defect(double y, double a, double b, double eta);

/// Small-delay (Omega*tau = O(1)) reduction: roots of
/// H(phi - Omega*tau) - H(-phi - Omega*tau) = 0 on [0, 2*pi), stability by the
/// sign of H'(phi-Omega*tau) + H'(-phi-Omega*tau), omega = H(phi-Omega*tau)/Omega.
std::vector<PhaseLockedSolution> small_delay_solutions(const PhaseConfig& cfg,
                                                       const InteractionFunction& h,
                                                       const SolverOptions& opts = {});

/// First-Fourier-mode analysis of H = a0 + a1 cos + b1 sin.
struct FirstModeBranchPoint {
    double omega = 0.0;
    double psi = 0.0;
    Stability stable = Stability::Marginal;
};
enum class FirstModeCase { TwoOutOfPhase, PitchforkAtZero, PitchforkAtPi, None };
struct FirstModeOutOfPhase {
    double omega = 0.0;          // root of A(omega) = 0
    FirstModeCase kind = FirstModeCase::None;
    double psi = 0.0;            // defined for TwoOutOfPhase (mirror is 2*pi - psi)
};
struct FirstModeReport {
    std::vector<FirstModeBranchPoint> in_phase;   // roots of Omega w - a0 = +B(w)
    std::vector<FirstModeBranchPoint> anti_phase; // roots of Omega w - a0 = -B(w)
    std::vector<FirstModeOutOfPhase> out_of_phase;
};

FirstModeReport first_mode_analysis(double a0, double a1, double b1, const PhaseConfig& cfg,
                                    double tol = 1e-9);

/// Scan + bisection + Newton-polish enumeration of all simple roots of f on
/// [lo, hi]. Deterministic; shared by the solvers above.
std::vector<double> find_all_roots_1d(const std::function<double(double)>& f, double lo, double hi,
                                      int n_scan, double root_tol = 1e-12);

} // namespace phaselock
