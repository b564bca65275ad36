#include "phaselock/phasemodel.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "phaselock/errors.hpp"

namespace phaselock {

std::string to_string(SolutionKind k) {
    switch (k) {
        case SolutionKind::InPhase: return "in";
        case SolutionKind::AntiPhase: return "anti";
        case SolutionKind::OutOfPhase: return "out";
    }
    return "?";
}

std::string to_string(Stability s) {
    switch (s) {
        case Stability::Stable: return "stable";
        case Stability::Unstable: return "unstable";
        case Stability::Marginal: return "marginal";
    }
    return "?";
}

std::string to_string(RootRegion r) {
    switch (r) {
        case RootRegion::PosRealRoot: return "pos_real_root";
        case RootRegion::DoubleZero: return "double_zero";
        case RootRegion::SimpleZeroOnlyStable: return "simple_zero_only";
        case RootRegion::TwoZeroRoots: return "two_zero_roots";
        case RootRegion::ZeroPlusNegative: return "zero_plus_negative";
        case RootRegion::ZeroPlusPositive: return "zero_plus_positive";
    }
    return "?";
}

SolutionKind solution_kind_from_string(const std::string& s) {
    if (s == "in") return SolutionKind::InPhase;
    if (s == "anti") return SolutionKind::AntiPhase;
    if (s == "out") return SolutionKind::OutOfPhase;
    fail("ConfigError", "unknown solution kind \"" + s + "\"");
}

double residual_F(double omega, double arg, const PhaseConfig& cfg, const InteractionFunction& h) {
    return omega - h.eval(arg - omega * cfg.eta() - cfg.omega * cfg.tau) / cfg.omega;
}

double omega_bracket(const PhaseConfig& cfg, const InteractionFunction& h) {
    return h.max_abs_bound() / cfg.omega + 1.0;
}

std::vector<double> find_all_roots_1d(const std::function<double(double)>& f, double lo, double hi,
                                      int n_scan, double root_tol) {
    std::vector<double> roots;
    double x_prev = lo;
    double f_prev = f(lo);
    for (int i = 1; i <= n_scan; ++i) {
        double x = lo + (hi - lo) * double(i) / double(n_scan);
        double fx = f(x);
        if (f_prev == 0.0) roots.push_back(x_prev);
        else if ((f_prev < 0.0) != (fx < 0.0)) {
            double a = x_prev, b = x, fa = f_prev;
            for (int it = 0; it < 200; ++it) {
                double m = 0.5 * (a + b);
                double fm = f(m);
                if (fm == 0.0) { a = b = m; break; }
                if ((fm < 0.0) == (fa < 0.0)) { a = m; fa = fm; }
                else b = m;
                if (b - a < root_tol * std::max(1.0, std::fabs(m))) break;
            }
            roots.push_back(0.5 * (a + b));
        }
        x_prev = x;
        f_prev = fx;
    }
    return roots;
}

namespace {

RootRegion region_from_signs(int s_ab, int s_sum, int s_third) {
    if (s_ab == 0) {
        if (s_sum < 0) return RootRegion::ZeroPlusPositive;
        if (s_sum == 0) return RootRegion::TwoZeroRoots;
        return RootRegion::ZeroPlusNegative;
    }
    if (s_ab > 0) {
        if (s_sum > 0) return RootRegion::SimpleZeroOnlyStable;
        // ab > 0 with a+b = 0 cannot occur; fold it into the unstable cell.
        if (s_third == 0) return RootRegion::DoubleZero;
        return RootRegion::PosRealRoot;
    }
    // ab < 0
    if (s_sum <= 0) return RootRegion::PosRealRoot;
    if (s_third > 0) return RootRegion::SimpleZeroOnlyStable;
    if (s_third == 0) return RootRegion::DoubleZero;
    return RootRegion::PosRealRoot;
}

} // namespace

Classification classify_from_ab(double a, double b, double eta, double marginal_tol) {
    Classification c;
    c.a = a;
    c.b = b;
    const double ab = a * b;
    const double sum = a + b;
    const double third = sum + 2.0 * eta * ab;
    c.region = region_from_signs(sign_of(ab), sign_of(sum), sign_of(third));

    // Verdict follows the sign tests the root taxonomy actually consults on
    // each path; any consulted sign inside the margin is never classified
    // silently.
    if (std::fabs(ab) < marginal_tol) {
        c.verdict = Stability::Marginal;
    } else if (ab > 0.0) {
        if (std::fabs(sum) < marginal_tol) c.verdict = Stability::Marginal;
        else c.verdict = sum > 0.0 ? Stability::Stable : Stability::Unstable;
    } else {
        if (sum < -marginal_tol) c.verdict = Stability::Unstable;
        else if (std::fabs(sum) < marginal_tol) c.verdict = Stability::Marginal;
        else if (std::fabs(third) < marginal_tol) c.verdict = Stability::Marginal;
        else c.verdict = third > 0.0 ? Stability::Stable : Stability::Unstable;
    }
    return c;
}

Classification classify_stability(double psi, double omega, const PhaseConfig& cfg,
                                  const InteractionFunction& h, double marginal_tol) {
    const double shift = omega * cfg.eta() + cfg.omega * cfg.tau;
    const double a = h.eval_prime(psi - shift) / cfg.omega;
    const double b = h.eval_prime(-psi - shift) / cfg.omega;
    return classify_from_ab(a, b, cfg.eta(), marginal_tol);
}

std::complex<double> characteristic_residual(std::complex<double> lambda, double a, double b,
                                             double eta) {
    const double t = eta * eta * a * b;
    return lambda * lambda + eta * (a + b) * lambda + t - t * std::exp(-2.0 * lambda);
}

double imaginary_axis_defect(double y, double a, double b, double eta) {
    // |f(iy)|^2 = (eta^2 ab - y^2)^2 + eta^2 (a+b)^2 y^2,  |g(iy)|^2 = eta^4 a^2 b^2
    const double t = eta * eta * a * b;
    const double re = t - y * y;
    const double im = eta * (a + b) * y;
    return re * re + im * im - t * t;
}

namespace {

PhaseLockedSolution make_solution(double psi, double omega, const PhaseConfig& cfg,
                                  const InteractionFunction& h, double marginal_tol,
                                  double kind_tol) {
    PhaseLockedSolution s;
    s.psi = wrap_angle(psi);
    s.omega = omega;
    if (circular_distance(s.psi, 0.0) < kind_tol) {
        s.psi = 0.0;
        s.kind = SolutionKind::InPhase;
    } else if (circular_distance(s.psi, std::numbers::pi) < kind_tol) {
        s.psi = std::numbers::pi;
        s.kind = SolutionKind::AntiPhase;
    } else {
        s.kind = SolutionKind::OutOfPhase;
    }
    Classification c = classify_stability(s.psi, s.omega, cfg, h, marginal_tol);
    s.a = c.a;
    s.b = c.b;
    s.region = c.region;
    s.stable = c.verdict;
    return s;
}

void sort_solutions(std::vector<PhaseLockedSolution>& v) {
    std::sort(v.begin(), v.end(), [](const PhaseLockedSolution& x, const PhaseLockedSolution& y) {
        if (x.psi != y.psi) return x.psi < y.psi;
        return x.omega < y.omega;
    });
}

} // namespace

std::vector<PhaseLockedSolution> find_locked_frequencies(double psi_star, const PhaseConfig& cfg,
                                                         const InteractionFunction& h,
                                                         const SolverOptions& opts) {
    const double W = omega_bracket(cfg, h);
    auto f = [&](double w) { return residual_F(w, psi_star, cfg, h); };
    std::vector<double> roots = find_all_roots_1d(f, -W, W, opts.n_scan);

    // Newton polish; the scan/bisection stage already isolates simple roots.
    const double eta = cfg.eta();
    for (double& w : roots) {
        for (int it = 0; it < 8; ++it) {
            double u = psi_star - w * eta - cfg.omega * cfg.tau;
            double fw = w - h.eval(u) / cfg.omega;
            double dfw = 1.0 + eta / cfg.omega * h.eval_prime(u);
            if (std::fabs(dfw) < 1e-12) break;
            double step = fw / dfw;
            w -= step;
            if (std::fabs(step) < 1e-14 * std::max(1.0, std::fabs(w))) break;
        }
    }
    std::sort(roots.begin(), roots.end());
    std::vector<PhaseLockedSolution> out;
    for (double w : roots) {
        if (!out.empty() && std::fabs(w - out.back().omega) < opts.dedup_tol) continue;
        if (std::fabs(residual_F(w, psi_star, cfg, h)) > 1e-7) continue; // polish failed
        out.push_back(make_solution(psi_star, w, cfg, h, opts.marginal_tol, opts.kind_tol));
    }
    return out;
}

namespace {

struct Residual2 {
    const PhaseConfig& cfg;
    const InteractionFunction& h;

    Eigen::Vector2d value(double psi, double w) const {
        return {residual_F(w, psi, cfg, h), residual_F(w, -psi, cfg, h)};
    }
    Eigen::Matrix2d jacobian(double psi, double w) const {
        const double eta = cfg.eta();
        const double shift = w * eta + cfg.omega * cfg.tau;
        const double hp1 = h.eval_prime(psi - shift);
        const double hp2 = h.eval_prime(-psi - shift);
        Eigen::Matrix2d J;
        // rows: d(F1, F2) / d(psi, w)
        J(0, 0) = -hp1 / cfg.omega;
        J(0, 1) = 1.0 + eta / cfg.omega * hp1;
        J(1, 0) = hp2 / cfg.omega;
        J(1, 1) = 1.0 + eta / cfg.omega * hp2;
        return J;
    }
};

} // namespace

std::vector<PhaseLockedSolution> find_out_of_phase(const PhaseConfig& cfg,
                                                   const InteractionFunction& h,
                                                   const SolverOptions& opts) {
    if (opts.n_psi < 64 || opts.n_omega < 64)
        fail("ConfigError", "out-of-phase grid must be at least 64x64");
    const double W = omega_bracket(cfg, h);
    const Residual2 res{cfg, h};

    const int np = opts.n_psi, nw = opts.n_omega;
    Eigen::MatrixXd F1(np + 1, nw + 1), F2(np + 1, nw + 1);
    for (int i = 0; i <= np; ++i) {
        double psi = two_pi * double(i) / double(np);
        for (int j = 0; j <= nw; ++j) {
            double w = -W + 2.0 * W * double(j) / double(nw);
            Eigen::Vector2d v = res.value(psi, w);
            F1(i, j) = v[0];
            F2(i, j) = v[1];
        }
    }

    auto straddles = [](double a, double b, double c, double d) {
        double mn = std::min(std::min(a, b), std::min(c, d));
        double mx = std::max(std::max(a, b), std::max(c, d));
        return mn <= 0.0 && mx >= 0.0;
    };

    std::vector<std::pair<double, double>> converged; // (psi, omega)
    int rank_deficient = 0;
    std::vector<std::pair<double, double>> degenerate_points;

    auto try_newton = [&](double psi, double w) {
        Eigen::Vector2d x(psi, w);
        Eigen::Vector2d r = res.value(x[0], x[1]);
        for (int it = 0; it < 60; ++it) {
            Eigen::Matrix2d J = res.jacobian(x[0], x[1]);
            Eigen::JacobiSVD<Eigen::Matrix2d> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
            double smin = svd.singularValues()[1];
            double smax = svd.singularValues()[0];
            Eigen::Vector2d step = svd.solve(-r);
            // damped update
            double lambda = 1.0;
            for (int half = 0; half < 12; ++half) {
                Eigen::Vector2d xn = x + lambda * step;
                Eigen::Vector2d rn = res.value(xn[0], xn[1]);
                if (rn.norm() < r.norm() || r.norm() < 1e-13) {
                    x = xn;
                    r = rn;
                    break;
                }
                lambda *= 0.5;
            }
            if (r.norm() < 1e-12) {
                if (smax > 0.0 && smin < 1e-8 * smax) {
                    bool fresh = true;
                    for (auto& p : degenerate_points)
                        if (circular_distance(p.first, x[0]) < 1e-4 &&
                            std::fabs(p.second - x[1]) < 1e-4)
                            fresh = false;
                    if (fresh) {
                        degenerate_points.emplace_back(wrap_angle(x[0]), x[1]);
                        ++rank_deficient;
                    }
                    return; // do not report points on a degenerate set as roots
                }
                converged.emplace_back(wrap_angle(x[0]), x[1]);
                return;
            }
        }
    };

    for (int i = 0; i < np; ++i) {
        for (int j = 0; j < nw; ++j) {
            if (straddles(F1(i, j), F1(i + 1, j), F1(i, j + 1), F1(i + 1, j + 1)) &&
                straddles(F2(i, j), F2(i + 1, j), F2(i, j + 1), F2(i + 1, j + 1))) {
                double psi = two_pi * (double(i) + 0.5) / double(np);
                double w = -W + 2.0 * W * (double(j) + 0.5) / double(nw);
                try_newton(psi, w);
            }
        }
    }

    if (rank_deficient >= 8)
        fail("DegenerateContinuum",
             "residual Jacobian is rank-deficient along a curve of solutions");

    // mirror each candidate to enforce the (psi, 2*pi - psi) pair structure
    std::size_t n_first = converged.size();
    for (std::size_t i = 0; i < n_first; ++i) try_newton(two_pi - converged[i].first, converged[i].second);

    std::vector<PhaseLockedSolution> out;
    for (auto& [psi, w] : converged) {
        if (circular_distance(psi, 0.0) < opts.kind_tol ||
            circular_distance(psi, std::numbers::pi) < opts.kind_tol)
            continue; // locked families are handled by find_locked_frequencies
        bool dup = false;
        for (auto& s : out) {
            double d = std::hypot(circular_distance(s.psi, psi), s.omega - w);
            if (d < std::max(opts.dedup_tol, 1e-9)) dup = true;
        }
        if (dup) continue;
        out.push_back(make_solution(psi, w, cfg, h, opts.marginal_tol, opts.kind_tol));
    }
    sort_solutions(out);
    return out;
}

std::vector<PhaseLockedSolution> small_delay_solutions(const PhaseConfig& cfg,
                                                       const InteractionFunction& h,
                                                       const SolverOptions& opts) {
    const double shift = cfg.omega * cfg.tau;
    auto f = [&](double phi) { return h.eval(phi - shift) - h.eval(-phi - shift); };
    // scan the closed interval then fold the endpoint duplicate away
    std::vector<double> roots = find_all_roots_1d(f, 0.0, two_pi, opts.n_scan);
    std::vector<PhaseLockedSolution> out;
    for (double phi : roots) {
        // Newton polish on the odd residual
        for (int it = 0; it < 8; ++it) {
            double d = h.eval_prime(phi - shift) + h.eval_prime(-phi - shift);
            if (std::fabs(d) < 1e-12) break;
            double step = f(phi) / d;
            phi -= step;
            if (std::fabs(step) < 1e-14) break;
        }
        phi = wrap_angle(phi);
        bool dup = false;
        for (auto& s : out)
            if (circular_distance(s.psi, phi) < std::max(opts.dedup_tol, 1e-9)) dup = true;
        if (dup) continue;

        PhaseLockedSolution s;
        s.psi = phi;
        if (circular_distance(phi, 0.0) < opts.kind_tol) {
            s.psi = 0.0;
            s.kind = SolutionKind::InPhase;
        } else if (circular_distance(phi, std::numbers::pi) < opts.kind_tol) {
            s.psi = std::numbers::pi;
            s.kind = SolutionKind::AntiPhase;
        } else {
            s.kind = SolutionKind::OutOfPhase;
        }
        s.omega = h.eval(s.psi - shift) / cfg.omega;
        s.a = h.eval_prime(s.psi - shift) / cfg.omega;
        s.b = h.eval_prime(-s.psi - shift) / cfg.omega;
        double slope = h.eval_prime(s.psi - shift) + h.eval_prime(-s.psi - shift);
        if (std::fabs(slope) < opts.marginal_tol) s.stable = Stability::Marginal;
        else s.stable = slope > 0.0 ? Stability::Stable : Stability::Unstable;
        s.region = classify_from_ab(s.a, s.b, cfg.eta(), opts.marginal_tol).region;
        out.push_back(s);
    }
    sort_solutions(out);
    return out;
}

FirstModeReport first_mode_analysis(double a0, double a1, double b1, const PhaseConfig& cfg,
                                    double tol) {
    if (a1 == 0.0 && b1 == 0.0)
        fail("ConfigError", "first_mode_analysis requires (a1, b1) != (0, 0)");
    FirstModeReport rep;
    const double eta = cfg.eta();
    const double Om = cfg.omega;
    auto arg = [&](double w) { return w * eta + Om * cfg.tau; };
    auto A = [&](double w) { return b1 * std::cos(arg(w)) + a1 * std::sin(arg(w)); };
    auto B = [&](double w) { return a1 * std::cos(arg(w)) - b1 * std::sin(arg(w)); };

    const double W = (std::fabs(a0) + std::fabs(a1) + std::fabs(b1)) / Om + 1.0;
    for (int sgn : {+1, -1}) {
        auto f = [&](double w) { return Om * w - a0 - sgn * B(w); };
        for (double w : find_all_roots_1d(f, -W, W, 4096)) {
            FirstModeBranchPoint p;
            p.omega = w;
            p.psi = sgn > 0 ? 0.0 : std::numbers::pi;
            // H'(psi - w eta - Omega tau): equals A(w) at psi=0 and -A(w) at psi=pi
            double hp = sgn > 0 ? A(w) : -A(w);
            if (std::fabs(hp) < tol) p.stable = Stability::Marginal;
            else p.stable = hp > 0.0 ? Stability::Stable : Stability::Unstable;
            (sgn > 0 ? rep.in_phase : rep.anti_phase).push_back(p);
        }
    }

    for (double w : find_all_roots_1d(A, -W, W, 4096)) {
        FirstModeOutOfPhase o;
        o.omega = w;
        double Bw = B(w);
        double lhs = Om * w - a0;
        if (std::fabs(std::fabs(lhs) - std::fabs(Bw)) < tol * std::max(1.0, std::fabs(Bw))) {
            o.kind = lhs * Bw > 0.0 ? FirstModeCase::PitchforkAtZero : FirstModeCase::PitchforkAtPi;
            o.psi = o.kind == FirstModeCase::PitchforkAtZero ? 0.0 : std::numbers::pi;
        } else if (std::fabs(lhs) < std::fabs(Bw)) {
            o.kind = FirstModeCase::TwoOutOfPhase;
            o.psi = std::acos(lhs / Bw);
        } else {
            o.kind = FirstModeCase::None;
        }
        rep.out_of_phase.push_back(o);
    }
    return rep;
}

} // namespace phaselock
