#pragma once

#include <array>
#include <vector>

#include "vexinf/grid.hpp"

namespace vexinf {

// Variable exponent p(x) > 1 with its stored logarithmic gradient.
// grad_log_p is stored rather than recomputed so the operator consumes it
// pointwise and the constant-p case is exactly zero (grad_log_p_sup == 0
// selects the pure infinity-Laplacian branch downstream).
struct ExponentField {
    DomainPtr domain;
    std::vector<double> p;
    std::vector<std::array<double, 2>> grad_log_p;
    double p_min = 0.0;
    double p_max = 0.0;
    double grad_log_p_sup = 0.0;

    bool constant_p() const { return grad_log_p_sup == 0.0; }
};

// Analytic families. Each samples p and its closed-form grad log p and throws
// std::invalid_argument if p <= 1 anywhere on the active nodes.
ExponentField exponent_constant(const DomainPtr& domain, double value);
ExponentField exponent_affine(const DomainPtr& domain, std::array<double, 2> a,
                              double b);
ExponentField exponent_gaussian_bump(const DomainPtr& domain, double base,
                                     double amp, std::array<double, 2> center,
                                     double sigma);

// Per-node samples; grad log p via centered differences of ln p where both
// axis neighbors are active, one-sided otherwise. Throws std::invalid_argument
// if any value <= 1 or non-finite.
ExponentField exponent_from_samples(const DomainPtr& domain,
                                    const std::vector<double>& p_values);

struct ExponentDiagnostics {
    double p_min = 0.0;
    double p_max = 0.0;
    double grad_log_p_sup = 0.0;
    std::vector<int> violating_nodes;
    bool ok = true;
};

// Diagnostic only: reports bounds and flags nodes with p <= 1 or non-finite
// values without throwing.
ExponentDiagnostics validate(const ExponentField& field);

}  // namespace vexinf
