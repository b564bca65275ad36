#pragma once

#include <map>
#include <string>

#include "phaselock/oscillator.hpp"

namespace phaselock {

/// Hopf normal form x' = x - y - x(x^2+y^2), y' = x + y - y(x^2+y^2):
/// unit-circle cycle with period 2*pi.
VectorField hopf_normal_form();

/// Dimensionless Morris-Lecar membrane model.
/// v' = I - gca*minf(v)(v-vca) - gk*w(v-vk) - gl*(v-vl)
/// w' = phi*lambda(v)*(winf(v)-w)
VectorField morris_lecar(const std::map<std::string, double>& params);

/// Diffusive voltage coupling g(self, other) = (other_v - self_v, 0, ...),
/// optionally scaled.
CouplingFunction diffusive_v_coupling(int dim, double scale = 1.0);

/// A model definition resolved from a JSON config file:
/// { "model": "morris_lecar"|"hopf", "params": {...}, "coupling": "diffusive_v",
///   "guess": [...], "t_transient": ..., "dt": ... }
struct ModelConfig {
    std::string model_name;
    VectorField vf;
    CouplingFunction coupling;
    Vec guess;
    double t_transient = 500.0;
    double dt = 1e-3;
    double cycle_tol = 1e-9;
};

ModelConfig load_model_config(const std::string& path);

} // namespace phaselock
