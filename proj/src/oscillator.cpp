#include "phaselock/oscillator.hpp"

#include <cmath>
#include <vector>

#include "phaselock/errors.hpp"

namespace phaselock {

namespace {

Vec rk4_step(const std::function<Vec(const Vec&)>& f, const Vec& y, double h) {
    Vec k1 = f(y);
    Vec k2 = f(y + 0.5 * h * k1);
    Vec k3 = f(y + 0.5 * h * k2);
    Vec k4 = f(y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Cubic Hermite value on [0, h] given endpoint states and derivatives.
Vec hermite(const Vec& y0, const Vec& f0, const Vec& y1, const Vec& f1, double h, double s) {
    double u = s / h;
    double u2 = u * u, u3 = u2 * u;
    double h00 = 2 * u3 - 3 * u2 + 1;
    double h10 = u3 - 2 * u2 + u;
    double h01 = -2 * u3 + 3 * u2;
    double h11 = u3 - u2;
    return h00 * y0 + (h10 * h) * f0 + h01 * y1 + (h11 * h) * f1;
}

/// Periodic 4-point cubic (Catmull-Rom) interpolation of rows of `s` seen as
/// samples at rho_j = 2*pi*j/n.
Vec interp_periodic(const Mat& s, double rho) {
    const int n = static_cast<int>(s.rows());
    double x = wrap_angle(rho) / two_pi * n;
    int i1 = static_cast<int>(std::floor(x));
    double u = x - i1;
    if (i1 >= n) { i1 -= n; }
    int i0 = (i1 + n - 1) % n;
    int i2 = (i1 + 1) % n;
    int i3 = (i1 + 2) % n;
    Vec p0 = s.row(i0), p1 = s.row(i1), p2 = s.row(i2), p3 = s.row(i3);
    // Catmull-Rom basis
    return 0.5 * ((2.0 * p1) + (-p0 + p2) * u + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * (u * u) +
                  (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * (u * u * u));
}

} // namespace

std::function<Mat(const Vec&)> finite_difference_jacobian(std::function<Vec(const Vec&)> rhs,
                                                          int dim, double step) {
    return [rhs = std::move(rhs), dim, step](const Vec& x) {
        Mat J(dim, dim);
        for (int j = 0; j < dim; ++j) {
            double h = step * std::max(1.0, std::fabs(x[j]));
            Vec xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            J.col(j) = (rhs(xp) - rhs(xm)) / (2.0 * h);
        }
        return J;
    };
}

LimitCycle::LimitCycle(Mat samples, double period) : samples_(std::move(samples)), period_(period) {
    if (period_ <= 0.0) fail("DegenerateOrbit", "non-positive period");
}

Vec LimitCycle::at_phase(double rho) const { return interp_periodic(samples_, rho); }

Vec AdjointSolution::at_phase(double rho) const { return interp_periodic(samples_, rho); }

LimitCycle find_limit_cycle(const VectorField& vf, const Vec& guess, double t_transient,
                            double tol, const CycleOptions& opts) {
    if (tol <= 0.0) fail("ConfigError", "find_limit_cycle requires tol > 0");
    const double dt = opts.dt;

    Vec y = guess;
    for (double t = 0.0; t < t_transient; t += dt) y = rk4_step(vf.rhs, y, dt);

    const Vec x0 = y;
    Vec f0 = vf.rhs(x0);
    double speed0 = f0.norm();
    if (speed0 < 1e-12 * (1.0 + x0.norm()))
        fail("DegenerateOrbit", "post-transient point is an equilibrium");
    const Vec nrm = f0 / speed0;

    // Hunt section crossings s(t) = nrm.(y - x0) = 0 with nrm.f > 0, refining
    // the crossing time on the Hermite interpolant.
    std::vector<Vec> returns;
    std::vector<double> return_times;
    double t = 0.0;
    double s_prev = 0.0; // starts exactly on the section
    Vec f_prev = f0;
    Vec y_prev = y;
    double loop_max_dist = 0.0;
    double period = -1.0;

    while (t < opts.max_time) {
        Vec y_next = rk4_step(vf.rhs, y_prev, dt);
        Vec f_next = vf.rhs(y_next);
        double s_next = nrm.dot(y_next - x0);
        double t_next = t + dt;
        if (!y_next.allFinite()) fail("NoConvergence", "trajectory left finite range");

        const Vec& anchor = returns.empty() ? x0 : returns.back();
        loop_max_dist = std::max(loop_max_dist, (y_next - anchor).norm());

        if (s_prev < 0.0 && s_next >= 0.0 && nrm.dot(f_next) > 0.0) {
            // bisect the Hermite interpolant for the crossing time
            double lo = 0.0, hi = dt;
            while (hi - lo > opts.crossing_time_tol) {
                double mid = 0.5 * (lo + hi);
                double sm = nrm.dot(hermite(y_prev, f_prev, y_next, f_next, dt, mid) - x0);
                (sm < 0.0 ? lo : hi) = mid;
            }
            double tc = t + 0.5 * (lo + hi);
            Vec yc = hermite(y_prev, f_prev, y_next, f_next, dt, 0.5 * (lo + hi));

            if (!returns.empty()) {
                double displacement = (yc - returns.back()).norm();
                if (displacement < tol) {
                    // Section point converged. A loop that stays within the
                    // displacement scale of the section point is a collapsed
                    // orbit, not a cycle.
                    if (loop_max_dist < std::max(100.0 * tol, 1e-6))
                        fail("DegenerateOrbit", "return-map displacement below tol");
                    period = tc - return_times.back();
                    returns.push_back(yc);
                    return_times.push_back(tc);
                    break;
                }
            }
            returns.push_back(yc);
            return_times.push_back(tc);
            loop_max_dist = 0.0;
        }
        y_prev = y_next;
        f_prev = f_next;
        s_prev = s_next;
        t = t_next;
    }
    if (period <= 0.0) fail("NoConvergence", "no converged Poincare return within max_time");

    // Resample one period from the converged section point at n uniform phases.
    const int n = opts.n_samples;
    Mat samples(n, vf.dim);
    Vec ys = returns.back();
    const double h_target = period / double(n);
    int sub = std::max(1, static_cast<int>(std::ceil(h_target / dt)));
    double h = h_target / sub;
    for (int j = 0; j < n; ++j) {
        samples.row(j) = ys;
        for (int k = 0; k < sub; ++k) ys = rk4_step(vf.rhs, ys, h);
    }
    double closure = (ys - Vec(samples.row(0).transpose())).lpNorm<Eigen::Infinity>();
    if (closure > 1e-4 * (1.0 + samples.row(0).norm()))
        fail("NoConvergence", "resampled orbit fails to close up");
    return LimitCycle(std::move(samples), period);
}

AdjointSolution solve_adjoint(const VectorField& vf, const LimitCycle& lc,
                              const AdjointOptions& opts) {
    if (lc.dim() != vf.dim) fail("GridMismatch", "cycle dimension differs from vector field");
    const int n = lc.n();
    const int m = lc.dim();
    const double om = lc.omega();
    const double h = -two_pi / double(n); // backward in phase

    auto rhs_at = [&](double rho, const Vec& z) -> Vec {
        Mat J = vf.jacobian(lc.at_phase(rho));
        return (-1.0 / om) * (J.transpose() * z);
    };

    Mat Z(n, m);
    Vec z = Vec::Ones(m);
    Mat Zprev;
    bool converged = false;
    for (int it = 0; it < opts.max_periods && !converged; ++it) {
        for (int j = 0; j < n; ++j) {
            double rho = two_pi * (1.0 - double(j) / n);
            // classical RK4 with phase-dependent coefficients
            Vec k1 = rhs_at(rho, z);
            Vec k2 = rhs_at(rho + 0.5 * h, z + 0.5 * h * k1);
            Vec k3 = rhs_at(rho + 0.5 * h, z + 0.5 * h * k2);
            Vec k4 = rhs_at(rho + h, z + h * k3);
            z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            Z.row((n - 1 - j + n) % n) = z; // sample at rho + h
        }
        // row j of Z now holds Z(2*pi*j/n); z itself sits at rho = 0
        if (it > 0) {
            double diff = (Z - Zprev).lpNorm<Eigen::Infinity>();
            double scale = std::max(1.0, Z.lpNorm<Eigen::Infinity>());
            if (diff < opts.tol * scale) converged = true;
        }
        Zprev = Z;
        if (!z.allFinite()) fail("NoConvergence", "adjoint iteration diverged");
    }
    if (!converged) fail("NoConvergence", "adjoint did not reach periodicity");

    // Malkin normalization (1/2pi) \oint Z.F(gamma) drho = 1 by the periodic
    // trapezoid rule, i.e. the grid mean.
    double acc = 0.0;
    for (int j = 0; j < n; ++j)
        acc += Z.row(j).dot(vf.rhs(lc.samples().row(j)));
    double c = acc / double(n);
    if (std::fabs(c) < 1e-14) fail("NoConvergence", "degenerate adjoint normalization");
    Z /= c;
    return AdjointSolution(std::move(Z));
}

InteractionFunction compute_H(const LimitCycle& lc, const AdjointSolution& adj,
                              const CouplingFunction& g, int n_phi, int n_modes) {
    if (lc.n() != adj.n()) fail("GridMismatch", "cycle and adjoint sample counts differ");
    if (lc.dim() != adj.dim() || lc.dim() != g.dim)
        fail("GridMismatch", "dimension mismatch between cycle, adjoint and coupling");
    if (n_phi < 2 * n_modes + 1) fail("InsufficientSamples", "n_phi must be >= 2K+1");

    const int n = lc.n();
    std::vector<double> phis(static_cast<std::size_t>(n_phi));
    std::vector<double> hvals(static_cast<std::size_t>(n_phi));
    for (int i = 0; i < n_phi; ++i) {
        double phi = two_pi * double(i) / double(n_phi);
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            double rho = two_pi * double(j) / double(n);
            Vec other = lc.at_phase(rho + phi);
            acc += adj.samples().row(j).dot(g.g(lc.samples().row(j), other));
        }
        phis[static_cast<std::size_t>(i)] = phi;
        hvals[static_cast<std::size_t>(i)] = acc / double(n);
    }
    return fit_fourier(phis, hvals, n_modes);
}

} // namespace phaselock
