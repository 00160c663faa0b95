#include "config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>

#include "vexinf/io.hpp"

namespace vexinf::cli {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& message) {
    throw ConfigError("config: " + message);
}

const ordered_json& require_key(const ordered_json& j, const char* key) {
    if (!j.contains(key)) fail(std::string("missing key \"") + key + "\"");
    return j.at(key);
}

double get_number(const ordered_json& j, const char* key) {
    const auto& v = require_key(j, key);
    if (!v.is_number()) fail(std::string("\"") + key + "\" must be a number");
    return v.get<double>();
}

double get_number_or(const ordered_json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    return get_number(j, key);
}

std::string get_string(const ordered_json& j, const char* key) {
    const auto& v = require_key(j, key);
    if (!v.is_string()) fail(std::string("\"") + key + "\" must be a string");
    return v.get<std::string>();
}

std::array<double, 2> get_vec2(const ordered_json& j, const char* key) {
    const auto& v = require_key(j, key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
        !v[1].is_number())
        fail(std::string("\"") + key + "\" must be a 2-element number array");
    return {v[0].get<double>(), v[1].get<double>()};
}

std::vector<double> get_number_list(const ordered_json& v, const char* key) {
    if (!v.is_array() || v.empty()) fail(std::string("\"") + key +
                                         "\" must be a nonempty number array");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) fail(std::string("\"") + key +
                                 "\" must contain only numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

DomainPtr parse_domain(const ordered_json& block) {
    const int nx = static_cast<int>(get_number(block, "nx"));
    const int ny = static_cast<int>(get_number(block, "ny"));
    const double h = get_number(block, "h");
    std::array<double, 2> origin{0.0, 0.0};
    if (block.contains("origin")) origin = get_vec2(block, "origin");
    Shape shape = Shape::Rectangle;
    if (block.contains("shape")) {
        const std::string name = get_string(block, "shape");
        if (name == "rectangle")
            shape = Shape::Rectangle;
        else if (name == "disk")
            shape = Shape::Disk;
        else
            fail("unknown domain shape \"" + name + "\"");
    }
    return make_domain(nx, ny, h, shape, origin);
}

ExponentSpec parse_exponent(const ordered_json& block,
                            const std::filesystem::path& config_dir) {
    ExponentSpec spec;
    spec.family = get_string(block, "family");
    if (spec.family == "constant") {
        spec.value = get_number(block, "value");
    } else if (spec.family == "affine") {
        spec.a = get_vec2(block, "a");
        spec.b = get_number(block, "b");
    } else if (spec.family == "gaussian-bump") {
        spec.base = get_number(block, "base");
        spec.amp = get_number(block, "amplitude");
        spec.center = get_vec2(block, "center");
        spec.sigma = get_number(block, "width");
    } else if (spec.family == "csv") {
        spec.csv_path = config_dir / get_string(block, "path");
    } else {
        fail("unknown exponent family \"" + spec.family + "\"");
    }
    return spec;
}

BoundaryData parse_boundary(const ordered_json& block, const DomainPtr& domain,
                            const std::filesystem::path& config_dir) {
    const std::string kind = get_string(block, "kind");
    if (kind == "affine") {
        const auto g = get_vec2(block, "gradient");
        const double c = get_number_or(block, "offset", 0.0);
        return boundary_data_from_function(domain, [=](double x, double y) {
            return g[0] * x + g[1] * y + c;
        });
    }
    if (kind == "cone") {
        const auto v = get_vec2(block, "vertex");
        const double slope = get_number_or(block, "slope", 1.0);
        const double c = get_number_or(block, "offset", 0.0);
        return boundary_data_from_function(domain, [=](double x, double y) {
            return slope * std::hypot(x - v[0], y - v[1]) + c;
        });
    }
    if (kind == "saddle") {
        const auto ctr = get_vec2(block, "center");
        const double scale = get_number_or(block, "scale", 1.0);
        const double c = get_number_or(block, "offset", 0.0);
        return boundary_data_from_function(domain, [=](double x, double y) {
            return scale * (x - ctr[0]) * (y - ctr[1]) + c;
        });
    }
    if (kind == "aronsson") {
        return boundary_data_from_function(domain, [](double x, double y) {
            return std::pow(std::abs(x), 4.0 / 3.0) -
                   std::pow(std::abs(y), 4.0 / 3.0);
        });
    }
    if (kind == "csv") {
        const std::filesystem::path path =
            config_dir / get_string(block, "path");
        GridFunction values = [&] {
            try {
                return read_csv(path, domain);
            } catch (const std::exception& e) {
                fail(e.what());
            }
        }();
        BoundaryData data{domain, values.values(), 0.0};
        data.lipschitz_constant = estimate_lipschitz(data);
        return data;
    }
    fail("unknown boundary kind \"" + kind + "\"");
}

}  // namespace

ExponentField ExponentSpec::build(const DomainPtr& domain) const {
    if (family == "constant") return exponent_constant(domain, value);
    if (family == "affine") return exponent_affine(domain, a, b);
    if (family == "gaussian-bump")
        return exponent_gaussian_bump(domain, base, amp, center, sigma);
    if (family == "csv") {
        GridFunction samples = read_csv(csv_path, domain);
        return exponent_from_samples(domain, samples.values());
    }
    fail("unknown exponent family \"" + family + "\"");
}

std::string hash_hex(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx",
                  static_cast<unsigned long long>(h));
    return buffer;
}

ToolConfig load_config(const std::filesystem::path& path,
                       const Overrides& overrides) {
    std::ifstream in(path);
    if (!in) fail("cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(std::string("invalid JSON: ") + e.what());
    }

    ToolConfig config;
    config.config_hash = hash_hex(text);
    const std::filesystem::path config_dir = path.parent_path();

    try {
        config.problem.domain = parse_domain(require_key(j, "domain"));
        config.exponent = parse_exponent(require_key(j, "exponent"),
                                         config_dir);
        config.problem.exponent = config.exponent.build(config.problem.domain);
        config.problem.boundary = parse_boundary(require_key(j, "boundary"),
                                                 config.problem.domain,
                                                 config_dir);

        config.problem.epsilon = get_number_or(j, "epsilon", 0.0);
        if (overrides.eps_list && overrides.eps_list->size() == 1)
            config.problem.epsilon = overrides.eps_list->front();

        if (j.contains("method")) {
            config.method = get_string(j, "method");
            if (config.method != "variational" && config.method != "direct")
                fail("method must be \"variational\" or \"direct\"");
        }

        config.scheme_name = overrides.scheme
                                 ? *overrides.scheme
                                 : (j.contains("scheme")
                                        ? get_string(j, "scheme")
                                        : std::string("upwind-log"));
        if (config.scheme_name == "upwind-log")
            config.problem.scheme = LogScheme::UpwindMagnitude;
        else if (config.scheme_name == "centered")
            config.problem.scheme = LogScheme::CenteredMagnitude;
        else
            fail("scheme must be \"upwind-log\" or \"centered\"");

        if (j.contains("tolerances")) {
            const auto& t = j.at("tolerances");
            config.problem.tolerances.residual_tol =
                get_number_or(t, "residual_tol", 0.0);
            config.problem.tolerances.step_tol =
                get_number_or(t, "step_tol", 1e-10);
            config.problem.tolerances.max_iters =
                static_cast<long>(get_number_or(t, "max_iters", 100000));
        }
        if (overrides.tol) {
            if (*overrides.tol <= 0.0) fail("--tol must be positive");
            config.problem.tolerances.step_tol = *overrides.tol;
            config.problem.tolerances.residual_tol = *overrides.tol;
        }

        config.problem.gs_damping = get_number_or(j, "gs_damping", 0.8);

        if (overrides.kp_max) {
            config.problem.k_schedule = default_k_schedule(
                config.problem.exponent, *overrides.kp_max);
        } else if (j.contains("kp_targets")) {
            const auto targets =
                get_number_list(j.at("kp_targets"), "kp_targets");
            const double p_min = config.problem.exponent.p_min;
            for (double t : targets)
                config.problem.k_schedule.push_back(t / p_min);
        } else {
            config.problem.k_schedule = default_k_schedule(
                config.problem.exponent, get_number_or(j, "kp_max", 64.0));
        }

        if (j.contains("sandwich")) {
            const auto& s = j.at("sandwich");
            config.sandwich_epsilons =
                get_number_list(require_key(s, "epsilons"), "epsilons");
        }
        if (overrides.eps_list && overrides.eps_list->size() >= 2)
            config.sandwich_epsilons = *overrides.eps_list;

        if (j.contains("harnack")) {
            const auto& hb = j.at("harnack");
            config.harnack_center = get_vec2(hb, "center");
            config.harnack_radii =
                get_number_list(require_key(hb, "radii"), "radii");
            if (hb.contains("alpha") && !hb.at("alpha").is_null())
                config.harnack_alpha = get_number(hb, "alpha");
        }

        if (j.contains("convergence")) {
            const auto& c = j.at("convergence");
            if (c.contains("probes")) {
                config.convergence_probes.clear();
                for (const auto& e : c.at("probes")) {
                    if (!e.is_string()) fail("probes must be strings");
                    config.convergence_probes.push_back(e.get<std::string>());
                }
                if (config.convergence_probes.empty())
                    fail("probes must be nonempty");
            }
            if (c.contains("hs"))
                config.convergence_hs = get_number_list(c.at("hs"), "hs");
        }

        validate_problem(config.problem);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
    return config;
}

SmoothProbe make_probe(const std::string& name) {
    if (name == "cubic-x")
        return {[](double x, double) { return x * x * x / 3.0 + 2.0 * x; },
                [](double x, double) {
                    return std::array<double, 2>{x * x + 2.0, 0.0};
                },
                [](double x, double) {
                    return std::array<double, 4>{2.0 * x, 0.0, 0.0, 0.0};
                }};
    if (name == "cubic-y")
        return {[](double, double y) { return y * y * y / 3.0 + 2.0 * y; },
                [](double, double y) {
                    return std::array<double, 2>{0.0, y * y + 2.0};
                },
                [](double, double y) {
                    return std::array<double, 4>{0.0, 0.0, 0.0, 2.0 * y};
                }};
    if (name == "exp-y")
        return {[](double, double y) { return std::exp(1.1 * y); },
                [](double, double y) {
                    return std::array<double, 2>{0.0, 1.1 * std::exp(1.1 * y)};
                },
                [](double, double y) {
                    return std::array<double, 4>{0.0, 0.0, 0.0,
                                                 1.21 * std::exp(1.1 * y)};
                }};
    if (name == "quadratic-x")
        return {[](double x, double) { return x * x; },
                [](double x, double) {
                    return std::array<double, 2>{2.0 * x, 0.0};
                },
                [](double, double) {
                    return std::array<double, 4>{2.0, 0.0, 0.0, 0.0};
                }};
    if (name == "aronsson")
        return {[](double x, double y) {
                    return std::pow(std::abs(x), 4.0 / 3.0) -
                           std::pow(std::abs(y), 4.0 / 3.0);
                },
                [](double x, double y) {
                    const double sx = x < 0.0 ? -1.0 : 1.0;
                    const double sy = y < 0.0 ? -1.0 : 1.0;
                    return std::array<double, 2>{
                        4.0 / 3.0 * sx * std::cbrt(std::abs(x)),
                        -4.0 / 3.0 * sy * std::cbrt(std::abs(y))};
                },
                [](double x, double y) {
                    return std::array<double, 4>{
                        4.0 / 9.0 * std::pow(std::abs(x), -2.0 / 3.0), 0.0,
                        0.0,
                        -4.0 / 9.0 * std::pow(std::abs(y), -2.0 / 3.0)};
                }};
    fail("unknown probe \"" + name + "\"");
}

}  // namespace vexinf::cli
