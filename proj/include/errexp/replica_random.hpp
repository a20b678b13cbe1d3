#pragma once
#include "errexp/channel.hpp"

namespace errexp {

enum class RsBranch { RS1, RS2 };

struct RsBranchValue {
    RsBranch branch;
    double value;  // nats
    double rho, lambda;
    double rate_bits;
};

// E_RS1 = -rho*R*ln2 - ln sum_y (sum_x Q P^{1-lambda*rho}) (sum_x Q P^lambda)^rho
double e_rs1(const DiscreteChannel& ch, const InputDistribution& q, double rho, double lambda,
             double rate_bits);

// E_RS2 = -R*ln2 - ln sum_y (sum_x Q P^{1-lambda*rho}) (sum_x Q P^{lambda*rho})
double e_rs2(const DiscreteChannel& ch, const InputDistribution& q, double rho, double lambda,
             double rate_bits);

struct BranchSelection {
    RsBranch branch;        // branch with the lesser d/drho at rho=1
    double derivative_gap;  // dE_RS1/drho - dE_RS2/drho at rho=1
};

BranchSelection select_branch_at_unity(const DiscreteChannel& ch, const InputDistribution& q,
                                       double lambda, double rate_bits);

struct ReplicaExponent {
    double value;  // nats
    RsBranch regime;
    double rho_star;
};

// Piecewise-optimized exponent: above R_b the RS1 form with lambda=1/(1+rho)
// maximized over rho in [0,1]; below R_b the rho-saturated RS2 form with
// lambda*rho = 1/2.  Equals the random-coding exponent at every rate.
ReplicaExponent replica_exponent(double rate_bits, const DiscreteChannel& ch);

}  // namespace errexp
