#include "errexp/replica_random.hpp"

#include <cmath>

#include "errexp/errors.hpp"
#include "errexp/gallager.hpp"

namespace errexp {

namespace {
const double kLn2 = std::log(2.0);

double q_moment(const DiscreteChannel& ch, const InputDistribution& q, int y, double t) {
    double s = 0.0;
    for (int x = 0; x < ch.input_size(); ++x) {
        const double p = ch.p(x, y);
        if (p == 0.0 && t < 0.0) throw DomainError("rs exponent: negative power of zero transition");
        s += q.q(x) * std::pow(p, t);
    }
    return s;
}
}  // namespace

double e_rs1(const DiscreteChannel& ch, const InputDistribution& q, double rho, double lambda,
             double rate_bits) {
    if (rho < 0.0 || lambda < 0.0) throw DomainError("e_rs1: rho and lambda must be >= 0");
    if (1.0 - lambda * rho < 0.0 && !ch.strictly_positive())
        throw DomainError("e_rs1: lambda*rho > 1 needs strictly positive transitions");
    double s = 0.0;
    for (int y = 0; y < ch.output_size(); ++y)
        s += q_moment(ch, q, y, 1.0 - lambda * rho) * std::pow(q_moment(ch, q, y, lambda), rho);
    return -rho * rate_bits * kLn2 - std::log(s);
}

double e_rs2(const DiscreteChannel& ch, const InputDistribution& q, double rho, double lambda,
             double rate_bits) {
    if (rho < 0.0 || lambda < 0.0) throw DomainError("e_rs2: rho and lambda must be >= 0");
    if (1.0 - lambda * rho < 0.0 && !ch.strictly_positive())
        throw DomainError("e_rs2: lambda*rho > 1 needs strictly positive transitions");
    double s = 0.0;
    for (int y = 0; y < ch.output_size(); ++y)
        s += q_moment(ch, q, y, 1.0 - lambda * rho) * q_moment(ch, q, y, lambda * rho);
    return -rate_bits * kLn2 - std::log(s);
}

BranchSelection select_branch_at_unity(const DiscreteChannel& ch, const InputDistribution& q,
                                       double lambda, double rate_bits) {
    // central differences with a Richardson consistency check
    auto gap_at = [&](double h) {
        const double d1 = (e_rs1(ch, q, 1.0 + h, lambda, rate_bits) -
                           e_rs1(ch, q, 1.0 - h, lambda, rate_bits)) /
                          (2.0 * h);
        const double d2 = (e_rs2(ch, q, 1.0 + h, lambda, rate_bits) -
                           e_rs2(ch, q, 1.0 - h, lambda, rate_bits)) /
                          (2.0 * h);
        return d1 - d2;
    };
    const double g1 = gap_at(1e-6), g2 = gap_at(5e-7);
    if (std::abs(g1 - g2) > 1e-4 + 0.5 * std::abs(g1))
        throw NumericError("select_branch_at_unity: derivative estimate unstable");
    const double gap = (4.0 * g2 - g1) / 3.0;
    return {gap < 0.0 ? RsBranch::RS1 : RsBranch::RS2, gap};
}

ReplicaExponent replica_exponent(double rate_bits, const DiscreteChannel& ch) {
    if (!(rate_bits > 0.0) || rate_bits > std::log2(static_cast<double>(ch.input_size())))
        throw DomainError("replica_exponent: rate outside (0, log2|X|]");
    const auto [rc, rb] = critical_rates(ch);
    if (rate_bits >= rb) {
        // the lambda=1/(1+rho) section of RS1 maximized over rho; the branch
        // criterion keeps the optimizer inside [0,1] here
        const auto er = random_coding_exponent(rate_bits, ch);
        return {er.value, RsBranch::RS1, er.rho_star};
    }
    // rho-saturated regime: value fixed by lambda*rho = 1/2
    const InputDistribution q = optimize_e0_input(ch, 1.0);
    double s = 0.0;
    for (int y = 0; y < ch.output_size(); ++y) {
        const double a = q_moment(ch, q, y, 0.5);
        s += a * a;
    }
    const double val = -rate_bits * kLn2 - std::log(s);
    return {std::max(val, 0.0), RsBranch::RS2, 1.0};
}

}  // namespace errexp
