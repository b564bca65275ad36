#pragma once

#include <string>
#include <vector>

namespace phaselock {

/// Truncated Fourier series h(x) = a[0] + sum_k a[k] cos(kx) + b[k-1] sin(kx),
/// the 2*pi-periodic phase interaction function and its derivatives.
class InteractionFunction {
public:
    InteractionFunction() = default;
    InteractionFunction(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);

    int modes() const { return static_cast<int>(b_.size()); }
    const std::vector<double>& cos_coeffs() const { return a_; } // a_0 .. a_K
    const std::vector<double>& sin_coeffs() const { return b_; } // b_1 .. b_K

    double eval(double phi) const;
    double eval_prime(double phi) const;
    double eval_second(double phi) const;
    double eval_third(double phi) const;

    /// Bound sum |a_k| + |b_k| >= max |h|.
    double max_abs_bound() const;
    /// Bound sum k(|a_k| + |b_k|) >= max |h'|.
    double max_abs_prime_bound() const;

    bool all_zero(double tol = 0.0) const;

    std::string to_json() const;
    static InteractionFunction from_json(const std::string& text);
    static InteractionFunction load(const std::string& path);
    void save(const std::string& path) const;

private:
    std::vector<double> a_{0.0}; // cosine coefficients, a_[0] is the mean
    std::vector<double> b_{};    // sine coefficients
};

/// Least-squares projection of uniformly spaced samples onto K Fourier modes.
/// Samples must lie on phi_j = 2*pi*j/n, j = 0..n-1, with n >= 2K+1; the
/// discrete projection is then the exact minimizer and reproduces any
/// trigonometric polynomial of degree <= K.
InteractionFunction fit_fourier(const std::vector<double>& phi_samples,
                                const std::vector<double>& h_samples, int n_modes);

} // namespace phaselock
