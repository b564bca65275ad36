#include "phaselock/models.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "phaselock/errors.hpp"

namespace phaselock {

VectorField hopf_normal_form() {
    VectorField vf;
    vf.dim = 2;
    vf.rhs = [](const Vec& s) {
        double x = s[0], y = s[1], r2 = x * x + y * y;
        Vec d(2);
        d << x - y - x * r2, x + y - y * r2;
        return d;
    };
    vf.jacobian = [](const Vec& s) {
        double x = s[0], y = s[1];
        Mat J(2, 2);
        J << 1 - 3 * x * x - y * y, -1 - 2 * x * y,
             1 - 2 * x * y,         1 - x * x - 3 * y * y;
        return J;
    };
    return vf;
}

VectorField morris_lecar(const std::map<std::string, double>& params) {
    auto get = [&](const std::string& key) {
        auto it = params.find(key);
        if (it == params.end()) fail("ConfigError", "morris_lecar params missing \"" + key + "\"");
        return it->second;
    };
    const double v1 = get("v1"), v2 = get("v2"), v3 = get("v3"), v4 = get("v4");
    const double gca = get("gca"), gk = get("gk"), gl = get("gl");
    const double vca = get("vca"), vk = get("vk"), vl = get("vl");
    const double phi = get("phi"), I = get("I");

    auto minf = [=](double v) { return 0.5 * (1.0 + std::tanh((v - v1) / v2)); };
    auto winf = [=](double v) { return 0.5 * (1.0 + std::tanh((v - v3) / v4)); };
    auto lam = [=](double v) { return std::cosh((v - v3) / (2.0 * v4)); };

    VectorField vf;
    vf.dim = 2;
    vf.rhs = [=](const Vec& s) {
        double v = s[0], w = s[1];
        Vec d(2);
        d << I - gca * minf(v) * (v - vca) - gk * w * (v - vk) - gl * (v - vl),
             phi * lam(v) * (winf(v) - w);
        return d;
    };
    vf.jacobian = [=](const Vec& s) {
        double v = s[0], w = s[1];
        double sech1 = 1.0 / std::cosh((v - v1) / v2);
        double sech3 = 1.0 / std::cosh((v - v3) / v4);
        double dminf = 0.5 * sech1 * sech1 / v2;
        double dwinf = 0.5 * sech3 * sech3 / v4;
        double dlam = std::sinh((v - v3) / (2.0 * v4)) / (2.0 * v4);
        Mat J(2, 2);
        J(0, 0) = -gca * (dminf * (v - vca) + minf(v)) - gk * w - gl;
        J(0, 1) = -gk * (v - vk);
        J(1, 0) = phi * (dlam * (winf(v) - w) + lam(v) * dwinf);
        J(1, 1) = -phi * lam(v);
        return J;
    };
    return vf;
}

CouplingFunction diffusive_v_coupling(int dim, double scale) {
    CouplingFunction c;
    c.dim = dim;
    c.g = [dim, scale](const Vec& self, const Vec& other) {
        Vec out = Vec::Zero(dim);
        out[0] = scale * (other[0] - self[0]);
        return out;
    };
    return c;
}

ModelConfig load_model_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("IoFailure", "cannot open model config " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        fail("ConfigError", path + ": invalid JSON: " + e.what());
    }

    ModelConfig cfg;
    if (!j.contains("model")) fail("ConfigError", path + ": missing field \"model\"");
    cfg.model_name = j["model"].get<std::string>();

    if (cfg.model_name == "hopf") {
        cfg.vf = hopf_normal_form();
        cfg.guess = Vec(2);
        cfg.guess << 1.5, 0.0;
        cfg.t_transient = 50.0;
    } else if (cfg.model_name == "morris_lecar") {
        if (!j.contains("params")) fail("ConfigError", path + ": missing field \"params\"");
        std::map<std::string, double> p;
        for (auto& [k, v] : j["params"].items()) {
            if (!v.is_number()) fail("ConfigError", path + ": params." + k + " must be a number");
            p[k] = v.get<double>();
        }
        cfg.vf = morris_lecar(p);
        cfg.guess = Vec(2);
        cfg.guess << 0.1, 0.1;
        cfg.t_transient = 1500.0;
    } else {
        fail("ConfigError", path + ": unknown model \"" + cfg.model_name + "\"");
    }

    std::string coupling = j.value("coupling", std::string("diffusive_v"));
    double scale = j.value("coupling_scale", 1.0);
    if (coupling == "diffusive_v") {
        cfg.coupling = diffusive_v_coupling(cfg.vf.dim, scale);
    } else if (coupling == "none") {
        cfg.coupling.dim = cfg.vf.dim;
        cfg.coupling.g = [d = cfg.vf.dim](const Vec&, const Vec&) { return Vec::Zero(d); };
    } else {
        fail("ConfigError", path + ": unknown coupling \"" + coupling + "\"");
    }

    if (j.contains("guess")) {
        auto v = j["guess"].get<std::vector<double>>();
        if (static_cast<int>(v.size()) != cfg.vf.dim)
            fail("ConfigError", path + ": guess has wrong dimension");
        cfg.guess = Eigen::Map<const Vec>(v.data(), v.size());
    }
    cfg.t_transient = j.value("t_transient", cfg.t_transient);
    cfg.dt = j.value("dt", cfg.dt);
    cfg.cycle_tol = j.value("cycle_tol", cfg.cycle_tol);
    return cfg;
}

} // namespace phaselock
