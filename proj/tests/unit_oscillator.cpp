#include <doctest.h>

#include <cmath>
#include <random>

#include "phaselock/errors.hpp"
#include "phaselock/models.hpp"
#include "phaselock/oscillator.hpp"

using namespace phaselock;

namespace {

Vec v2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

LimitCycle hopf_cycle() {
    static LimitCycle lc = find_limit_cycle(hopf_normal_form(), v2(1.5, 0.0), 50.0, 1e-10,
                                            {.dt = 2e-3});
    return lc;
}

} // namespace

TEST_CASE("analytic and finite-difference Jacobians of the models agree") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (VectorField vf : {hopf_normal_form(),
                           morris_lecar({{"v1", -0.01}, {"v2", 0.15}, {"v3", 0.1}, {"v4", 0.145},
                                         {"gca", 1.0}, {"gk", 2.0}, {"gl", 0.5}, {"vca", 1.0},
                                         {"vk", -0.7}, {"vl", -0.5}, {"phi", 1.0 / 3}, {"I", 0.09}})}) {
        auto fd = finite_difference_jacobian(vf.rhs, vf.dim);
        for (int trial = 0; trial < 20; ++trial) {
            Vec x = v2(u(rng), u(rng));
            Mat d = vf.jacobian(x) - fd(x);
            CHECK(d.lpNorm<Eigen::Infinity>() <
                  1e-5 * std::max(1.0, vf.jacobian(x).lpNorm<Eigen::Infinity>()));
        }
    }
}

TEST_CASE("hopf normal form cycle is the unit circle with period 2pi") {
    LimitCycle lc = hopf_cycle();
    CHECK(lc.period() == doctest::Approx(two_pi).epsilon(2e-5));
    for (int j = 0; j < lc.n(); j += 37)
        CHECK(lc.samples().row(j).norm() == doctest::Approx(1.0).epsilon(1e-6));
    // closure under interpolation wraparound
    CHECK((lc.at_phase(0.0) - lc.at_phase(two_pi)).lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("re-integrating the normalized system closes the cycle") {
    LimitCycle lc = hopf_cycle();
    const VectorField vf = hopf_normal_form();
    Vec y = lc.samples().row(0);
    const int steps = 4096;
    const double h = two_pi / lc.omega() / steps;
    for (int i = 0; i < steps; ++i) {
        Vec k1 = vf.rhs(y);
        Vec k2 = vf.rhs(y + 0.5 * h * k1);
        Vec k3 = vf.rhs(y + 0.5 * h * k2);
        Vec k4 = vf.rhs(y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    CHECK((y - Vec(lc.samples().row(0).transpose())).lpNorm<Eigen::Infinity>() < 1e-5);
}

TEST_CASE("a trajectory that collapses to a focus raises DegenerateOrbit") {
    VectorField vf;
    vf.dim = 2;
    vf.rhs = [](const Vec& s) {
        double x = s[0], y = s[1], r2 = x * x + y * y;
        return Vec(v2(-0.2 * x - y - x * r2, x - 0.2 * y - y * r2));
    };
    vf.jacobian = finite_difference_jacobian(vf.rhs, 2);
    CHECK_THROWS_WITH_AS(find_limit_cycle(vf, v2(1.0, 0.0), 10.0, 1e-9, {.dt = 2e-3}),
                         doctest::Contains("DegenerateOrbit"), Error);
}

TEST_CASE("no Poincare return raises NoConvergence") {
    VectorField vf;
    vf.dim = 2;
    vf.rhs = [](const Vec& s) { return Vec(v2(1.0, 0.1 * s[0])); }; // runs away, never returns
    vf.jacobian = finite_difference_jacobian(vf.rhs, 2);
    CHECK_THROWS_WITH_AS(find_limit_cycle(vf, v2(0.0, 0.0), 1.0, 1e-9, {.dt = 1e-2, .max_time = 20.0}),
                         doctest::Contains("NoConvergence"), Error);
}

TEST_CASE("hopf adjoint is (-sin, cos) with unit normalization") {
    LimitCycle lc = hopf_cycle();
    AdjointSolution adj = solve_adjoint(hopf_normal_form(), lc);
    // The cycle starts at an arbitrary section point gamma(0) = (cos c, sin c);
    // the analytic adjoint at phase rho is (-sin(rho+c), cos(rho+c)).
    const double c = std::atan2(lc.samples()(0, 1), lc.samples()(0, 0));
    double max_err = 0.0;
    for (int j = 0; j < lc.n(); ++j) {
        double rho = two_pi * j / lc.n() + c;
        max_err = std::max(max_err, std::fabs(adj.samples()(j, 0) + std::sin(rho)));
        max_err = std::max(max_err, std::fabs(adj.samples()(j, 1) - std::cos(rho)));
    }
    CHECK(max_err < 1e-4);

    // normalization integral = 1 (enforced, but re-check the quadrature)
    const VectorField vf = hopf_normal_form();
    double acc = 0.0;
    for (int j = 0; j < lc.n(); ++j)
        acc += adj.samples().row(j).dot(vf.rhs(lc.samples().row(j)));
    CHECK(acc / lc.n() == doctest::Approx(1.0).epsilon(1e-4));

    // periodicity of the interpolant
    CHECK((adj.at_phase(0.0) - adj.at_phase(two_pi)).lpNorm<Eigen::Infinity>() < 1e-5);
}

TEST_CASE("hopf diffusive coupling yields H = sin(phi)/2") {
    LimitCycle lc = hopf_cycle();
    AdjointSolution adj = solve_adjoint(hopf_normal_form(), lc);
    InteractionFunction h = compute_H(lc, adj, diffusive_v_coupling(2), 256, 4);
    CHECK(h.sin_coeffs()[0] == doctest::Approx(0.5).epsilon(2e-3));
    CHECK(std::fabs(h.cos_coeffs()[0]) < 1e-3);
    for (int k = 2; k <= 4; ++k) {
        CHECK(std::fabs(h.cos_coeffs()[size_t(k)]) < 1e-3);
        CHECK(std::fabs(h.sin_coeffs()[size_t(k) - 1]) < 1e-3);
    }
}

TEST_CASE("zero coupling gives identically zero H") {
    LimitCycle lc = hopf_cycle();
    AdjointSolution adj = solve_adjoint(hopf_normal_form(), lc);
    CouplingFunction none;
    none.dim = 2;
    none.g = [](const Vec&, const Vec&) { return Vec(Vec::Zero(2)); };
    InteractionFunction h = compute_H(lc, adj, none, 64, 4);
    CHECK(h.all_zero(1e-14));
}

TEST_CASE("H is linear in the coupling and invariant under sample-origin shifts") {
    LimitCycle lc = hopf_cycle();
    AdjointSolution adj = solve_adjoint(hopf_normal_form(), lc);
    InteractionFunction h1 = compute_H(lc, adj, diffusive_v_coupling(2, 1.0), 128, 4);
    InteractionFunction h2 = compute_H(lc, adj, diffusive_v_coupling(2, 2.0), 128, 4);
    for (double x : {0.0, 0.7, 2.9, 5.1})
        CHECK(h2.eval(x) == doctest::Approx(2.0 * h1.eval(x)).epsilon(1e-12));

    // cyclic re-indexing of the cycle/adjoint sample origin
    const int shift = lc.n() / 3;
    Mat gs(lc.n(), 2), zs(lc.n(), 2);
    for (int j = 0; j < lc.n(); ++j) {
        gs.row(j) = lc.samples().row((j + shift) % lc.n());
        zs.row(j) = adj.samples().row((j + shift) % lc.n());
    }
    LimitCycle lc2(gs, lc.period());
    AdjointSolution adj2(zs);
    InteractionFunction h3 = compute_H(lc2, adj2, diffusive_v_coupling(2, 1.0), 128, 4);
    for (double x : {0.0, 1.3, 3.9})
        CHECK(h3.eval(x) == doctest::Approx(h1.eval(x)).epsilon(1e-6));
}

TEST_CASE("grid mismatch between cycle and adjoint is rejected") {
    LimitCycle lc = hopf_cycle();
    AdjointSolution adj(Mat::Zero(lc.n() / 2, 2));
    CHECK_THROWS_WITH_AS(compute_H(lc, adj, diffusive_v_coupling(2), 64, 4),
                         doctest::Contains("GridMismatch"), Error);
}
