#include <doctest.h>

#include <cmath>
#include <random>

#include "phaselock/errors.hpp"
#include "phaselock/fourier.hpp"
#include "phaselock/types.hpp"

using namespace phaselock;

namespace {

std::vector<double> uniform_grid(int n) {
    std::vector<double> phi(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) phi[static_cast<std::size_t>(j)] = two_pi * j / n;
    return phi;
}

InteractionFunction load_HI() {
    return InteractionFunction::load(std::string(PHASELOCK_DATA_DIR) + "/H_I.json");
}

} // namespace

TEST_CASE("fit_fourier recovers a pure sine exactly") {
    auto phi = uniform_grid(64);
    std::vector<double> h(phi.size());
    for (std::size_t j = 0; j < phi.size(); ++j) h[j] = std::sin(phi[j]);
    auto f = fit_fourier(phi, h, 4);
    CHECK(f.sin_coeffs()[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::fabs(f.cos_coeffs()[0]) < 1e-12);
    for (int k = 1; k <= 4; ++k) {
        CHECK(std::fabs(f.cos_coeffs()[size_t(k)]) < 1e-12);
        if (k > 1) CHECK(std::fabs(f.sin_coeffs()[size_t(k) - 1]) < 1e-12);
    }
}

TEST_CASE("fit_fourier round-trips the printed coefficient set") {
    auto hi = load_HI();
    auto phi = uniform_grid(256);
    std::vector<double> h(phi.size());
    for (std::size_t j = 0; j < phi.size(); ++j) h[j] = hi.eval(phi[j]);
    auto f = fit_fourier(phi, h, 4);
    for (int k = 0; k <= 4; ++k)
        CHECK(f.cos_coeffs()[size_t(k)] == doctest::Approx(hi.cos_coeffs()[size_t(k)]).epsilon(1e-10));
    for (int k = 1; k <= 4; ++k)
        CHECK(f.sin_coeffs()[size_t(k) - 1] ==
              doctest::Approx(hi.sin_coeffs()[size_t(k) - 1]).epsilon(1e-10));
}

TEST_CASE("mode outside the basis aliases to zero on the orthogonality grid") {
    auto phi = uniform_grid(64);
    std::vector<double> h(phi.size());
    for (std::size_t j = 0; j < phi.size(); ++j) h[j] = std::sin(6.0 * phi[j]);
    auto f = fit_fourier(phi, h, 4);
    for (int k = 0; k <= 4; ++k) CHECK(std::fabs(f.cos_coeffs()[size_t(k)]) < 1e-12);
    for (int k = 1; k <= 4; ++k) CHECK(std::fabs(f.sin_coeffs()[size_t(k) - 1]) < 1e-12);
}

TEST_CASE("fit_fourier rejects short or non-uniform input") {
    auto phi = uniform_grid(8);
    std::vector<double> h(phi.size(), 0.0);
    CHECK_THROWS_WITH_AS(fit_fourier(phi, h, 4), doctest::Contains("2K+1"), Error);
    phi[3] += 0.01;
    CHECK_THROWS_AS(fit_fourier(phi, h, 3), Error);
}

TEST_CASE("band-limited reconstruction error is at rounding level") {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    std::vector<double> a(5), b(4);
    for (auto& c : a) c = coeff(rng);
    for (auto& c : b) c = coeff(rng);
    InteractionFunction h(a, b);

    auto phi = uniform_grid(128);
    std::vector<double> samples(phi.size());
    for (std::size_t j = 0; j < phi.size(); ++j) samples[j] = h.eval(phi[j]);
    auto f = fit_fourier(phi, samples, 4);
    double rmse = 0.0;
    for (int j = 0; j < 1000; ++j) {
        double x = two_pi * j / 1000.0;
        double d = f.eval(x) - h.eval(x);
        rmse += d * d;
    }
    rmse = std::sqrt(rmse / 1000.0);
    CHECK(rmse < 1e-10);
}

TEST_CASE("evaluation matches the printed series sum and is 2pi periodic") {
    auto hi = load_HI();
    CHECK(hi.eval(0.0) == doctest::Approx(-0.006216).epsilon(1e-4));
    CHECK(std::fabs(hi.eval(0.0) - (-0.00621596)) < 1e-6);
    for (double x : {0.3, 1.7, 4.4}) CHECK(hi.eval(x) == doctest::Approx(hi.eval(x + two_pi)));

    InteractionFunction sine({0.0, 0.0}, {1.0});
    CHECK(sine.eval(std::numbers::pi / 2) == doctest::Approx(1.0));
    CHECK(sine.eval_prime(0.0) == doctest::Approx(1.0));
}

TEST_CASE("derivatives agree with centered differences at random angles") {
    auto hi = load_HI();
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> angle(0.0, two_pi);
    const double d = 1e-5;
    for (int i = 0; i < 100; ++i) {
        double x = angle(rng);
        double fd1 = (hi.eval(x + d) - hi.eval(x - d)) / (2 * d);
        CHECK(hi.eval_prime(x) == doctest::Approx(fd1).epsilon(1e-6));
        double fd2 = (hi.eval_prime(x + d) - hi.eval_prime(x - d)) / (2 * d);
        CHECK(hi.eval_second(x) == doctest::Approx(fd2).epsilon(1e-5));
        double fd3 = (hi.eval_second(x + d) - hi.eval_second(x - d)) / (2 * d);
        CHECK(hi.eval_third(x) == doctest::Approx(fd3).epsilon(1e-5));
    }
}

TEST_CASE("json round trip") {
    auto hi = load_HI();
    auto back = InteractionFunction::from_json(hi.to_json());
    for (double x : {0.0, 1.0, 2.5}) CHECK(back.eval(x) == hi.eval(x));
    CHECK_THROWS_AS(InteractionFunction::from_json("{\"a\":[1,2]}"), Error);
    CHECK_THROWS_AS(InteractionFunction::from_json("not json"), Error);
}
