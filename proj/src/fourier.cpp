#include "phaselock/fourier.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "phaselock/errors.hpp"
#include "phaselock/types.hpp"

namespace phaselock {

InteractionFunction::InteractionFunction(std::vector<double> cos_coeffs,
                                         std::vector<double> sin_coeffs)
    : a_(std::move(cos_coeffs)), b_(std::move(sin_coeffs)) {
    if (a_.empty()) a_.push_back(0.0);
    if (a_.size() != b_.size() + 1)
        fail("BadCoefficients", "cosine array must hold a_0..a_K and sine array b_1..b_K");
}

double InteractionFunction::eval(double phi) const {
    double s = a_[0];
    for (int k = 1; k <= modes(); ++k)
        s += a_[k] * std::cos(k * phi) + b_[k - 1] * std::sin(k * phi);
    return s;
}

double InteractionFunction::eval_prime(double phi) const {
    double s = 0.0;
    for (int k = 1; k <= modes(); ++k)
        s += k * (b_[k - 1] * std::cos(k * phi) - a_[k] * std::sin(k * phi));
    return s;
}

double InteractionFunction::eval_second(double phi) const {
    double s = 0.0;
    for (int k = 1; k <= modes(); ++k)
        s -= double(k) * k * (a_[k] * std::cos(k * phi) + b_[k - 1] * std::sin(k * phi));
    return s;
}

double InteractionFunction::eval_third(double phi) const {
    double s = 0.0;
    for (int k = 1; k <= modes(); ++k)
        s += double(k) * k * k * (a_[k] * std::sin(k * phi) - b_[k - 1] * std::cos(k * phi));
    return s;
}

double InteractionFunction::max_abs_bound() const {
    double s = std::fabs(a_[0]);
    for (int k = 1; k <= modes(); ++k) s += std::fabs(a_[k]) + std::fabs(b_[k - 1]);
    return s;
}

double InteractionFunction::max_abs_prime_bound() const {
    double s = 0.0;
    for (int k = 1; k <= modes(); ++k) s += k * (std::fabs(a_[k]) + std::fabs(b_[k - 1]));
    return s;
}

bool InteractionFunction::all_zero(double tol) const {
    for (double c : a_)
        if (std::fabs(c) > tol) return false;
    for (double c : b_)
        if (std::fabs(c) > tol) return false;
    return true;
}

std::string InteractionFunction::to_json() const {
    nlohmann::json j;
    j["a"] = a_;
    j["b"] = b_;
    return j.dump(1);
}

InteractionFunction InteractionFunction::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail("ConfigError", std::string("H file is not valid JSON: ") + e.what());
    }
    if (!j.contains("a") || !j.contains("b"))
        fail("ConfigError", "H file must contain arrays \"a\" and \"b\"");
    std::vector<double> a = j["a"].get<std::vector<double>>();
    std::vector<double> b = j["b"].get<std::vector<double>>();
    if (a.size() != b.size() + 1)
        fail("ConfigError", "H file arrays must satisfy len(a) == len(b) + 1");
    return InteractionFunction(std::move(a), std::move(b));
}

InteractionFunction InteractionFunction::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("IoFailure", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

void InteractionFunction::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) fail("IoFailure", "cannot write " + path);
    out << to_json() << "\n";
}

InteractionFunction fit_fourier(const std::vector<double>& phi_samples,
                                const std::vector<double>& h_samples, int n_modes) {
    const std::size_t n = phi_samples.size();
    if (n != h_samples.size())
        fail("InsufficientSamples", "phi and h sample counts differ");
    if (n_modes < 0 || n < static_cast<std::size_t>(2 * n_modes + 1))
        fail("InsufficientSamples", "need at least 2K+1 samples for K modes");
    // Verify the uniform-grid precondition; the projection below relies on
    // discrete orthogonality of the modes.
    for (std::size_t j = 0; j < n; ++j) {
        double expect = two_pi * double(j) / double(n);
        if (std::fabs(phi_samples[j] - expect) > 1e-9 * two_pi)
            fail("InsufficientSamples", "samples must be uniform on [0, 2*pi)");
    }
    std::vector<double> a(static_cast<std::size_t>(n_modes) + 1, 0.0);
    std::vector<double> b(static_cast<std::size_t>(n_modes), 0.0);
    for (std::size_t j = 0; j < n; ++j) a[0] += h_samples[j];
    a[0] /= double(n);
    for (int k = 1; k <= n_modes; ++k) {
        double ck = 0.0, sk = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            ck += h_samples[j] * std::cos(k * phi_samples[j]);
            sk += h_samples[j] * std::sin(k * phi_samples[j]);
        }
        a[static_cast<std::size_t>(k)] = 2.0 * ck / double(n);
        b[static_cast<std::size_t>(k) - 1] = 2.0 * sk / double(n);
    }
    return InteractionFunction(std::move(a), std::move(b));
}

} // namespace phaselock
