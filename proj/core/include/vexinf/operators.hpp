#pragma once

#include <array>
#include <functional>

#include "vexinf/exponent.hpp"
#include "vexinf/grid.hpp"

namespace vexinf {

// C^2 probe given by callables; hessian returns row-major {xx, xy, yx, yy}.
struct SmoothProbe {
    std::function<double(double, double)> value;
    std::function<std::array<double, 2>(double, double)> gradient;
    std::function<std::array<double, 4>(double, double)> hessian;
};

// Magnitude fed into the log factor of the discrete operator. The upwind
// (Godunov) magnitude keeps the scheme monotone-compatible; the centered
// variant is exposed as the tunable alternative.
enum class LogScheme { UpwindMagnitude, CenteredMagnitude };

// <H(phi) grad phi, grad phi> at x.
double delta_inf_continuous(const SmoothProbe& probe, double x, double y);

// Delta_inf phi + |grad phi|^2 ln|grad phi| <grad phi, grad log p> with the
// zero convention at grad phi = 0 (the s^2 ln s -> 0 limit).
double delta_inf_x_continuous(
    const SmoothProbe& probe, double x, double y,
    const std::function<std::array<double, 2>(double, double)>& grad_log_p);

// (max over 4-neighbors + min over 4-neighbors - 2u)/h^2. Throws
// std::invalid_argument if the node is not interior.
double normalized_inf_discrete(const GridFunction& u, int i, int j);

// Default gradient-degeneracy guard 1e-8*(1 + sup|u|)/h.
double default_guard(const GridFunction& u);

// Normalized discrete operator: normalized_inf_discrete + ln(m)*<g_c, grad
// log p>, where g_c is the centered gradient and m the scheme magnitude; the
// log term is 0 when m < guard (gradient-degenerate node). With a constant
// exponent field this returns normalized_inf_discrete bit-exactly.
double full_operator_discrete(const GridFunction& u, int i, int j,
                              const ExponentField& field, double guard,
                              LogScheme scheme = LogScheme::UpwindMagnitude);

// full_operator_discrete at interior nodes, 0 elsewhere.
GridFunction residual_field(const GridFunction& u, const ExponentField& field,
                            double guard,
                            LogScheme scheme = LogScheme::UpwindMagnitude);

}  // namespace vexinf
