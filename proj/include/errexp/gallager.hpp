#pragma once
#include <optional>

#include "errexp/channel.hpp"

namespace errexp {

struct ExponentResult {
    double value;       // nats, clamped at 0 for optimized exponents
    double rho_star;    // optimizing rho
    InputDistribution q_star;
    bool at_boundary;   // optimizer sat at rho = 1
};

// E0(rho, Q) = -ln sum_y ( sum_x Q(x) P(y|x)^{1/(1+rho)} )^{1+rho}, in nats.
double gallager_e0(const DiscreteChannel& ch, const InputDistribution& q, double rho);

// max over rho in [0,1] (and over Q unless pinned) of -rho*R*ln2 + E0(rho,Q),
// clamped below at 0.
ExponentResult random_coding_exponent(double rate_bits, const DiscreteChannel& ch,
                                      const std::optional<InputDistribution>& q_opt = std::nullopt);

// (R_c, R_b) in bits: R_c is capacity; R_b is where the unconstrained
// optimizer of -rho*R*ln2 + E0 first needs rho = 1, located by bisection on
// dE0/drho|_{rho=1} = R ln2.
std::pair<double, double> critical_rates(const DiscreteChannel& ch);

// sup over rho >= 0 of -rho*R*ln2 + E0(rho,Q); the search interval grows
// until the objective's slope turns negative.  Diagnostic curve only.
double unrestricted_rs1_exponent(double rate_bits, const DiscreteChannel& ch,
                                 const InputDistribution& q);

// Optimal input for E0 at fixed rho: uniform for input-symmetric channels,
// otherwise multiplicative-update ascent with random restarts.
InputDistribution optimize_e0_input(const DiscreteChannel& ch, double rho);

bool input_symmetric(const DiscreteChannel& ch);

}  // namespace errexp
