#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vexinf/operators.hpp"
#include "vexinf/solvers.hpp"

namespace vexinf::cli {

// Schema or filesystem problem with the run configuration: maps to exit 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Overrides {
    std::optional<std::vector<double>> eps_list;
    std::optional<double> kp_max;
    std::optional<double> tol;
    std::optional<std::string> scheme;
};

// Exponent family kept in symbolic form so experiment drivers can resample it
// on differently refined grids.
struct ExponentSpec {
    std::string family = "constant";
    double value = 2.0;                      // constant
    std::array<double, 2> a{0.0, 0.0};       // affine slope
    double b = 2.0;                          // affine offset
    double base = 1.5;                       // gaussian-bump
    double amp = 0.8;
    std::array<double, 2> center{0.5, 0.5};
    double sigma = 0.15;
    std::filesystem::path csv_path;          // csv

    ExponentField build(const DomainPtr& domain) const;
    bool resamplable() const { return family != "csv"; }
};

struct ToolConfig {
    std::string config_hash;
    Problem problem;
    ExponentSpec exponent;
    std::string method = "variational";
    std::string scheme_name = "upwind-log";

    std::vector<double> sandwich_epsilons{0.2, 0.1, 0.05};

    std::array<double, 2> harnack_center{0.5, 0.5};
    std::vector<double> harnack_radii{0.1, 0.15, 0.2};
    std::optional<double> harnack_alpha;

    std::vector<std::string> convergence_probes{"cubic-x", "cubic-y", "exp-y"};
    std::vector<double> convergence_hs{0.125, 0.0625, 0.03125};
};

// Parses and assembles a run configuration; throws ConfigError on missing
// files, malformed JSON, schema violations, or precondition failures.
ToolConfig load_config(const std::filesystem::path& path,
                       const Overrides& overrides);

// FNV-1a 64-bit hash as 16 hex digits.
std::string hash_hex(const std::string& text);

// Named analytic probes for convergence studies: cubic-x, cubic-y, exp-y,
// quadratic-x, aronsson. Throws ConfigError on unknown names.
SmoothProbe make_probe(const std::string& name);

}  // namespace vexinf::cli
