#include "phaselock/bifurcation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <Eigen/Dense>

#include "phaselock/errors.hpp"

namespace phaselock {

std::string to_string(BifurcationKind k) {
    switch (k) {
        case BifurcationKind::Pitchfork: return "pitchfork";
        case BifurcationKind::SaddleNodeLocked: return "saddle_node_locked";
        case BifurcationKind::SaddleNodeOutOfPhase: return "saddle_node_out_of_phase";
    }
    return "?";
}

namespace {

struct TauSlice {
    double tau;
    std::vector<PhaseLockedSolution> solutions;
};

PhaseConfig at_tau(const PhaseConfig& base, double tau) {
    PhaseConfig c = base;
    c.tau = tau;
    return c;
}

double solution_distance(const PhaseLockedSolution& x, const PhaseLockedSolution& y) {
    return std::hypot(circular_distance(x.psi, y.psi), x.omega - y.omega);
}

} // namespace

std::vector<Branch> sweep_tau(double tau_lo, double tau_hi, double step, const PhaseConfig& base,
                              const InteractionFunction& h, const SweepOptions& opts) {
    if (!(tau_lo < tau_hi)) fail("ConfigError", "sweep requires tau_lo < tau_hi");
    if (step <= 0.0) fail("ConfigError", "sweep requires step > 0");

    const int n = static_cast<int>(std::floor((tau_hi - tau_lo) / step + 1e-9)) + 1;
    std::vector<TauSlice> slices(static_cast<std::size_t>(n));

    auto solve_slice = [&](int i) {
        double tau = tau_lo + i * step;
        PhaseConfig cfg = at_tau(base, tau);
        TauSlice s;
        s.tau = tau;
        for (double psi_star : {0.0, std::numbers::pi}) {
            auto v = find_locked_frequencies(psi_star, cfg, h, opts.solver);
            s.solutions.insert(s.solutions.end(), v.begin(), v.end());
        }
        if (opts.track_out_of_phase) {
            try {
                auto v = find_out_of_phase(cfg, h, opts.solver);
                s.solutions.insert(s.solutions.end(), v.begin(), v.end());
            } catch (const Error& e) {
                if (e.code() != "DegenerateContinuum") throw;
                // a continuum has no isolated out-of-phase points to track
            }
        }
        slices[static_cast<std::size_t>(i)] = std::move(s);
    };

    if (opts.threads > 1) {
        std::atomic<int> next{0};
        auto worker = [&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) solve_slice(i);
        };
        std::vector<std::thread> pool;
        for (int k = 0; k < opts.threads; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    } else {
        for (int i = 0; i < n; ++i) solve_slice(i);
    }

    // Link slices into branches by nearest neighbour within a drift-scaled
    // threshold; matching is resolved greedily from the smallest distance.
    std::vector<Branch> finished;
    std::vector<Branch> active;
    for (const auto& slice : slices) {
        std::vector<bool> sol_taken(slice.solutions.size(), false);
        std::vector<bool> branch_extended(active.size(), false);

        struct Cand {
            double d;
            std::size_t branch, sol;
        };
        std::vector<Cand> cands;
        for (std::size_t bi = 0; bi < active.size(); ++bi) {
            const Branch& br = active[bi];
            const PhaseLockedSolution& last = br.points.back();
            double drift = opts.branch_match_floor;
            if (br.points.size() >= 2) {
                const auto& prev = br.points[br.points.size() - 2];
                drift = std::max(drift, opts.drift_factor * solution_distance(last, prev));
            } else {
                drift = std::max(drift, 10.0 * opts.branch_match_floor);
            }
            for (std::size_t si = 0; si < slice.solutions.size(); ++si) {
                const auto& sol = slice.solutions[si];
                if (sol.kind != br.kind) continue;
                double d = solution_distance(last, sol);
                if (d <= drift) cands.push_back({d, bi, si});
            }
        }
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.d < b.d; });
        for (const auto& c : cands) {
            if (sol_taken[c.sol] || branch_extended[c.branch]) continue;
            active[c.branch].taus.push_back(slice.tau);
            active[c.branch].points.push_back(slice.solutions[c.sol]);
            sol_taken[c.sol] = true;
            branch_extended[c.branch] = true;
        }
        // retire unextended branches, open new ones for unmatched solutions
        std::vector<Branch> still_active;
        for (std::size_t bi = 0; bi < active.size(); ++bi) {
            if (branch_extended[bi]) still_active.push_back(std::move(active[bi]));
            else finished.push_back(std::move(active[bi]));
        }
        active = std::move(still_active);
        for (std::size_t si = 0; si < slice.solutions.size(); ++si) {
            if (sol_taken[si]) continue;
            Branch br;
            br.kind = slice.solutions[si].kind;
            br.taus.push_back(slice.tau);
            br.points.push_back(slice.solutions[si]);
            active.push_back(std::move(br));
        }
    }
    for (auto& br : active) finished.push_back(std::move(br));

    std::sort(finished.begin(), finished.end(), [](const Branch& a, const Branch& b) {
        if (a.taus.front() != b.taus.front()) return a.taus.front() < b.taus.front();
        if (a.points.front().psi != b.points.front().psi)
            return a.points.front().psi < b.points.front().psi;
        return a.points.front().omega < b.points.front().omega;
    });
    return finished;
}

namespace {

/// Shared pieces of the event systems. u = psi - omega*eta(tau) - Omega*tau,
/// eta(tau) = eps*Omega*tau.
struct EventWork {
    const PhaseConfig& base;
    const InteractionFunction& h;

    double Om() const { return base.omega; }
    double eps() const { return base.epsilon; }
    double eta(double tau) const { return base.epsilon * base.omega * tau; }
    double u(double psi, double w, double tau) const {
        return psi - w * eta(tau) - Om() * tau;
    }
    // dF/d(omega, tau) at fixed psi, F = omega - H(u)/Omega
    double F(double psi, double w, double tau) const { return w - h.eval(u(psi, w, tau)) / Om(); }
    double dF_dw(double psi, double w, double tau) const {
        return 1.0 + eta(tau) / Om() * h.eval_prime(u(psi, w, tau));
    }
    double dF_dtau(double psi, double w, double tau) const {
        return h.eval_prime(u(psi, w, tau)) * (1.0 + eps() * w);
    }
};

/// Newton solve of (F(w, tau), e(w, tau)) = 0 for a locked branch (psi fixed).
/// `which` selects the event: 1 -> H'(u) = 0 (pitchfork),
/// 2 -> 1 + eta H'(u)/Omega = 0 (fold of the locked family).
std::optional<std::pair<double, double>> solve_locked_event(const EventWork& W, double psi,
                                                            double w0, double tau0, int which,
                                                            double tol) {
    double w = w0, tau = tau0;
    for (int it = 0; it < 80; ++it) {
        double u = W.u(psi, w, tau);
        double hp = W.h.eval_prime(u);
        double hpp = W.h.eval_second(u);
        double eta = W.eta(tau);
        double f1 = W.F(psi, w, tau);
        double f2 = which == 1 ? hp : 1.0 + eta * hp / W.Om();
        Eigen::Vector2d r(f1, f2);
        if (r.norm() < 1e-13 && it > 0) return std::make_pair(w, tau);
        Eigen::Matrix2d J;
        J(0, 0) = W.dF_dw(psi, w, tau);
        J(0, 1) = W.dF_dtau(psi, w, tau);
        double du_dw = -eta;
        double du_dtau = -W.Om() * (1.0 + W.eps() * w);
        if (which == 1) {
            J(1, 0) = hpp * du_dw;
            J(1, 1) = hpp * du_dtau;
        } else {
            J(1, 0) = eta / W.Om() * hpp * du_dw;
            J(1, 1) = W.eps() * hp + eta / W.Om() * hpp * du_dtau;
        }
        Eigen::Vector2d step = J.fullPivLu().solve(-r);
        if (!step.allFinite()) return std::nullopt;
        // keep the iteration local
        double cap = 1.0 + std::fabs(tau0) * 0.01;
        if (step.norm() > cap) step *= cap / step.norm();
        w += step[0];
        tau += step[1];
        if (step.norm() < tol * std::max(1.0, std::fabs(tau))) {
            double u2 = W.u(psi, w, tau);
            double res = which == 1 ? W.h.eval_prime(u2)
                                    : 1.0 + W.eta(tau) * W.h.eval_prime(u2) / W.Om();
            if (std::fabs(W.F(psi, w, tau)) < 1e-9 && std::fabs(res) < 1e-9)
                return std::make_pair(w, tau);
        }
    }
    return std::nullopt;
}

/// Newton solve of (F1, F2, e3) = 0 in (psi, w, tau) for the out-of-phase
/// fold, e3 = eta + (a+b)/(2ab) with a = H'(u1)/Omega, b = H'(u2)/Omega.
std::optional<std::array<double, 3>> solve_oop_fold(const EventWork& W, double psi0, double w0,
                                                    double tau0, double tol) {
    double psi = psi0, w = w0, tau = tau0;
    for (int it = 0; it < 120; ++it) {
        double eta = W.eta(tau);
        double u1 = W.u(psi, w, tau);
        double u2 = W.u(-psi, w, tau);
        double a = W.h.eval_prime(u1) / W.Om();
        double b = W.h.eval_prime(u2) / W.Om();
        if (std::fabs(a) < 1e-12 || std::fabs(b) < 1e-12) return std::nullopt;
        double f1 = w - W.h.eval(u1) / W.Om();
        double f2 = w - W.h.eval(u2) / W.Om();
        double f3 = eta + 0.5 * (1.0 / a + 1.0 / b);
        Eigen::Vector3d r(f1, f2, f3);
        Eigen::Matrix3d J;
        double hp1 = W.h.eval_prime(u1), hp2 = W.h.eval_prime(u2);
        double hpp1 = W.h.eval_second(u1), hpp2 = W.h.eval_second(u2);
        double du_dtau = -W.Om() * (1.0 + W.eps() * w);
        // rows F1, F2 w.r.t. (psi, w, tau)
        J(0, 0) = -hp1 / W.Om();
        J(0, 1) = 1.0 + eta / W.Om() * hp1;
        J(0, 2) = -hp1 / W.Om() * du_dtau;
        J(1, 0) = hp2 / W.Om();
        J(1, 1) = 1.0 + eta / W.Om() * hp2;
        J(1, 2) = -hp2 / W.Om() * du_dtau;
        // e3 row via da, db
        double da_dpsi = hpp1 / W.Om();
        double db_dpsi = -hpp2 / W.Om();
        double da_dw = hpp1 / W.Om() * (-eta);
        double db_dw = hpp2 / W.Om() * (-eta);
        double da_dtau = hpp1 / W.Om() * du_dtau;
        double db_dtau = hpp2 / W.Om() * du_dtau;
        double de_da = -0.5 / (a * a);
        double de_db = -0.5 / (b * b);
        J(2, 0) = de_da * da_dpsi + de_db * db_dpsi;
        J(2, 1) = de_da * da_dw + de_db * db_dw;
        J(2, 2) = W.eps() * W.Om() + de_da * da_dtau + de_db * db_dtau;
        Eigen::Vector3d step = J.fullPivLu().solve(-r);
        if (!step.allFinite()) return std::nullopt;
        double cap = 1.0 + std::fabs(tau0) * 0.01;
        if (step.norm() > cap) step *= cap / step.norm();
        psi += step[0];
        w += step[1];
        tau += step[2];
        if (step.norm() < tol * std::max(1.0, std::fabs(tau)) && r.norm() < 1e-9)
            return std::array<double, 3>{psi, w, tau};
    }
    return std::nullopt;
}

int count_oop_near(const std::vector<Branch>& branches, double tau, double psi, double window,
                   double psi_radius) {
    int count = 0;
    for (const auto& br : branches) {
        if (br.kind != SolutionKind::OutOfPhase) continue;
        for (std::size_t i = 0; i < br.taus.size(); ++i) {
            if (std::fabs(br.taus[i] - tau) <= window &&
                circular_distance(br.points[i].psi, psi) <= psi_radius) {
                ++count;
                break; // this branch contributes once
            }
        }
    }
    return count;
}

} // namespace

std::vector<BifurcationPoint> detect_bifurcations(const std::vector<Branch>& branches,
                                                  const PhaseConfig& base,
                                                  const InteractionFunction& h,
                                                  const DetectOptions& opts) {
    EventWork W{base, h};
    std::vector<BifurcationPoint> events;

    auto push_event = [&](BifurcationPoint ev) {
        for (const auto& e : events)
            if (e.kind == ev.kind && std::fabs(e.tau - ev.tau) < 1e-6 &&
                circular_distance(e.psi, ev.psi) < 1e-6 && std::fabs(e.omega - ev.omega) < 1e-6)
                return;
        events.push_back(ev);
    };

    double step_hint = 0.0;

    for (const auto& br : branches) {
        if (br.taus.size() >= 2)
            step_hint = std::max(step_hint, br.taus[1] - br.taus[0]);

        if (br.kind != SolutionKind::OutOfPhase) {
            const double psi = br.points.front().psi;
            auto e1 = [&](std::size_t i) {
                return W.h.eval_prime(W.u(psi, br.points[i].omega, br.taus[i]));
            };
            auto e2 = [&](std::size_t i) {
                return 1.0 + W.eta(br.taus[i]) *
                                 W.h.eval_prime(W.u(psi, br.points[i].omega, br.taus[i])) / W.Om();
            };
            for (std::size_t i = 0; i + 1 < br.taus.size(); ++i) {
                bool fire1 = e1(i) == 0.0 || (e1(i) < 0.0) != (e1(i + 1) < 0.0);
                bool fire2 = e2(i) == 0.0 || (e2(i) < 0.0) != (e2(i + 1) < 0.0);
                if (fire1) {
                    auto sol = solve_locked_event(W, psi, br.points[i].omega, br.taus[i], 1,
                                                  opts.tau_tol);
                    if (sol) {
                        auto [w, tau] = *sol;
                        BifurcationPoint ev;
                        ev.tau = tau;
                        ev.kind = BifurcationKind::Pitchfork;
                        ev.psi = psi;
                        ev.omega = w;
                        ev.condition_residual = std::fabs(W.h.eval_prime(W.u(psi, w, tau)));
                        ev.degenerate =
                            std::fabs(W.h.eval_third(W.u(psi, w, tau))) < opts.third_derivative_tol;
                        ev.ambiguous = fire2;
                        push_event(ev);
                    }
                }
                if (fire2) {
                    auto sol = solve_locked_event(W, psi, br.points[i].omega, br.taus[i], 2,
                                                  opts.tau_tol);
                    if (sol) {
                        auto [w, tau] = *sol;
                        BifurcationPoint ev;
                        ev.tau = tau;
                        ev.kind = BifurcationKind::SaddleNodeLocked;
                        ev.psi = psi;
                        ev.omega = w;
                        ev.condition_residual =
                            std::fabs(1.0 + W.eta(tau) * W.h.eval_prime(W.u(psi, w, tau)) / W.Om());
                        ev.ambiguous = fire1;
                        push_event(ev);
                    }
                }
            }
            // fold events end a branch rather than crossing it: test both ends
            for (bool front : {true, false}) {
                std::size_t i = front ? 0 : br.taus.size() - 1;
                if (std::fabs(e2(i)) < opts.endpoint_trigger) {
                    auto sol = solve_locked_event(W, psi, br.points[i].omega, br.taus[i], 2,
                                                  opts.tau_tol);
                    if (sol) {
                        auto [w, tau] = *sol;
                        double span = 4.0 * std::max(step_hint, 1e-6);
                        if (tau > br.taus[i] - span && tau < br.taus[i] + span) {
                            BifurcationPoint ev;
                            ev.tau = tau;
                            ev.kind = BifurcationKind::SaddleNodeLocked;
                            ev.psi = psi;
                            ev.omega = w;
                            ev.condition_residual = std::fabs(
                                1.0 + W.eta(tau) * W.h.eval_prime(W.u(psi, w, tau)) / W.Om());
                            push_event(ev);
                        }
                    }
                }
            }
        } else {
            auto e3 = [&](std::size_t i) {
                const auto& p = br.points[i];
                return W.eta(br.taus[i]) + 0.5 * (1.0 / p.a + 1.0 / p.b);
            };
            auto attempt = [&](std::size_t i) {
                auto sol = solve_oop_fold(W, br.points[i].psi, br.points[i].omega, br.taus[i],
                                          opts.tau_tol);
                if (!sol) return;
                auto [psi, w, tau] = *sol;
                double span = 4.0 * std::max(step_hint, 1e-6);
                if (tau < br.taus.front() - span || tau > br.taus.back() + span) return;
                BifurcationPoint ev;
                ev.tau = tau;
                ev.kind = BifurcationKind::SaddleNodeOutOfPhase;
                ev.psi = wrap_angle(psi);
                ev.omega = w;
                double a = W.h.eval_prime(W.u(psi, w, tau)) / W.Om();
                double b = W.h.eval_prime(W.u(-psi, w, tau)) / W.Om();
                ev.condition_residual = std::fabs(W.eta(tau) + 0.5 * (1.0 / a + 1.0 / b));
                push_event(ev);
            };
            for (std::size_t i = 0; i + 1 < br.taus.size(); ++i)
                if ((e3(i) < 0.0) != (e3(i + 1) < 0.0)) attempt(i);
            for (bool front : {true, false}) {
                std::size_t i = front ? 0 : br.taus.size() - 1;
                if (std::fabs(e3(i)) < opts.endpoint_trigger) attempt(i);
            }
        }
    }

    // pitchfork cross-check: how many out-of-phase branches live near the
    // event on each side
    for (auto& ev : events) {
        if (ev.kind != BifurcationKind::Pitchfork) continue;
        double w = std::max(2.0 * step_hint, 1e-6);
        int before = count_oop_near(branches, ev.tau - w, ev.psi, w * 0.6, 0.5);
        int after = count_oop_near(branches, ev.tau + w, ev.psi, w * 0.6, 0.5);
        ev.out_of_phase_delta = after - before;
    }

    std::sort(events.begin(), events.end(),
              [](const BifurcationPoint& a, const BifurcationPoint& b) { return a.tau < b.tau; });
    return events;
}

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

void export_diagram(const std::vector<Branch>& branches,
                    const std::vector<BifurcationPoint>& events, const std::string& path,
                    DiagramFormat format) {
    if (format == DiagramFormat::Csv) {
        std::ofstream out(path);
        if (!out) fail("IoFailure", "cannot write " + path);
        out << "branch,tau,psi,omega,kind,a,b,region,stable\n";
        for (std::size_t bi = 0; bi < branches.size(); ++bi) {
            const auto& br = branches[bi];
            for (std::size_t i = 0; i < br.taus.size(); ++i) {
                const auto& p = br.points[i];
                out << bi << ',' << fmt(br.taus[i]) << ',' << fmt(p.psi) << ',' << fmt(p.omega)
                    << ',' << to_string(p.kind) << ',' << fmt(p.a) << ',' << fmt(p.b) << ','
                    << to_string(p.region) << ',' << to_string(p.stable) << "\n";
            }
        }
        // events appended as comment-style trailer rows keeps one-file export
        for (const auto& ev : events) {
            out << "#event," << fmt(ev.tau) << ',' << fmt(ev.psi) << ',' << fmt(ev.omega) << ','
                << to_string(ev.kind) << ',' << fmt(ev.condition_residual) << ','
                << (ev.degenerate ? "degenerate" : "ok") << ','
                << (ev.ambiguous ? "ambiguous" : "clean") << ',' << ev.out_of_phase_delta << "\n";
        }
        return;
    }
    // SVG scatter: two panels, (tau, psi) above (tau, omega)
    double tau_lo = 1e300, tau_hi = -1e300, w_lo = 1e300, w_hi = -1e300;
    for (const auto& br : branches)
        for (std::size_t i = 0; i < br.taus.size(); ++i) {
            tau_lo = std::min(tau_lo, br.taus[i]);
            tau_hi = std::max(tau_hi, br.taus[i]);
            w_lo = std::min(w_lo, br.points[i].omega);
            w_hi = std::max(w_hi, br.points[i].omega);
        }
    if (tau_lo > tau_hi) { tau_lo = 0.0; tau_hi = 1.0; }
    if (w_lo > w_hi) { w_lo = -1.0; w_hi = 1.0; }
    double tpad = 0.02 * (tau_hi - tau_lo + 1e-12), wpad = 0.05 * (w_hi - w_lo + 1e-12);
    tau_lo -= tpad; tau_hi += tpad; w_lo -= wpad; w_hi += wpad;

    const int W = 900, H = 720, ml = 70, mr = 20, mt = 20, panel_h = 310, gap = 60;
    auto xmap = [&](double tau) { return ml + (tau - tau_lo) / (tau_hi - tau_lo) * (W - ml - mr); };
    auto ypsi = [&](double psi) { return mt + (1.0 - psi / two_pi) * panel_h; };
    auto yom = [&](double w) {
        return mt + panel_h + gap + (1.0 - (w - w_lo) / (w_hi - w_lo)) * panel_h;
    };

    std::ofstream out(path);
    if (!out) fail("IoFailure", "cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\">\n<style>\n"
           ".stable{fill:#1a9641;}\n.unstable{fill:none;stroke:#d7191c;stroke-width:1;}\n"
           ".marginal{fill:#fdae61;}\n.event{fill:#2c7bb6;}\n"
           ".axis{stroke:#333;stroke-width:1;}\ntext{font-family:sans-serif;font-size:12px;}\n"
           "</style>\n";
    for (int panel = 0; panel < 2; ++panel) {
        double y0 = panel == 0 ? mt : mt + panel_h + gap;
        out << "<rect class=\"axis\" fill=\"none\" x=\"" << ml << "\" y=\"" << y0 << "\" width=\""
            << (W - ml - mr) << "\" height=\"" << panel_h << "\"/>\n";
        out << "<text x=\"10\" y=\"" << (y0 + panel_h / 2) << "\">"
            << (panel == 0 ? "psi" : "omega") << "</text>\n";
        for (int k = 0; k <= 5; ++k) {
            double tau = tau_lo + (tau_hi - tau_lo) * k / 5.0;
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6g", tau);
            out << "<text x=\"" << (xmap(tau) - 12) << "\" y=\"" << (y0 + panel_h + 16) << "\">"
                << buf << "</text>\n";
        }
    }
    for (const auto& br : branches)
        for (std::size_t i = 0; i < br.taus.size(); ++i) {
            const auto& p = br.points[i];
            const char* cls = p.stable == Stability::Stable ? "stable"
                              : p.stable == Stability::Unstable ? "unstable" : "marginal";
            out << "<circle class=\"" << cls << "\" cx=\"" << fmt(xmap(br.taus[i])) << "\" cy=\""
                << fmt(ypsi(p.psi)) << "\" r=\"2\"/>\n";
            out << "<circle class=\"" << cls << "\" cx=\"" << fmt(xmap(br.taus[i])) << "\" cy=\""
                << fmt(yom(p.omega)) << "\" r=\"2\"/>\n";
        }
    for (const auto& ev : events) {
        out << "<rect class=\"event\" x=\"" << fmt(xmap(ev.tau) - 3) << "\" y=\""
            << fmt(ypsi(ev.psi) - 3) << "\" width=\"6\" height=\"6\"/>\n";
        out << "<rect class=\"event\" x=\"" << fmt(xmap(ev.tau) - 3) << "\" y=\""
            << fmt(yom(ev.omega) - 3) << "\" width=\"6\" height=\"6\"/>\n";
    }
    out << "</svg>\n";
}

std::vector<Branch> import_branches_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("IoFailure", "cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) fail("IoFailure", "empty diagram CSV");
    std::map<int, Branch> by_id;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<std::string> f;
        while (std::getline(ss, tok, ',')) f.push_back(tok);
        if (f.size() != 9) fail("IoFailure", "malformed diagram CSV row");
        int id = std::stoi(f[0]);
        PhaseLockedSolution p;
        double tau = std::stod(f[1]);
        p.psi = std::stod(f[2]);
        p.omega = std::stod(f[3]);
        p.kind = solution_kind_from_string(f[4]);
        p.a = std::stod(f[5]);
        p.b = std::stod(f[6]);
        for (RootRegion r : {RootRegion::PosRealRoot, RootRegion::DoubleZero,
                             RootRegion::SimpleZeroOnlyStable, RootRegion::TwoZeroRoots,
                             RootRegion::ZeroPlusNegative, RootRegion::ZeroPlusPositive})
            if (to_string(r) == f[7]) p.region = r;
        for (Stability s : {Stability::Stable, Stability::Unstable, Stability::Marginal})
            if (to_string(s) == f[8]) p.stable = s;
        auto& br = by_id[id];
        br.kind = p.kind;
        br.taus.push_back(tau);
        br.points.push_back(p);
    }
    std::vector<Branch> out;
    for (auto& [id, br] : by_id) out.push_back(std::move(br));
    return out;
}

} // namespace phaselock
