#pragma once
#include <string>
#include <vector>

#include "errexp/channel.hpp"
#include "errexp/ldpc.hpp"
#include "errexp/saddle.hpp"

namespace errexp {

// How the code-ensemble exponent is evaluated when locating thresholds:
//  jensen1  - scalar bound, tilt pinned to 1/(1+rho)
//  jensen2  - scalar bound, tilt free
//  replica  - distributional bound via population dynamics
enum class ThresholdMethod { jensen1, jensen2, replica };

std::string method_name(ThresholdMethod m);
ThresholdMethod parse_method(const std::string& name);

struct OptimizeOptions {
    double rho_min = 0.0, rho_max = 8.0;
    double lambda_min = 0.0, lambda_max = 2.0;
    int rho_grid = 17, lambda_grid = 17;
    int refine_iters = 60;
    PopulationConfig pop;  // population method only; fixed seed gives common
                           // random numbers across the search
};

struct OptimizeResult {
    double value = 0.0;
    double rho = 0.0, lambda = 0.0;
    ExponentEstimate at;
};

// Largest exponent over the (rho, lambda) box for a BSC-like channel.
OptimizeResult maximize_exponent(const LdpcEnsemble& ens, const DiscreteChannel& ch,
                                 ThresholdMethod method, const OptimizeOptions& opts = {});

struct TracePoint {
    double p = 0.0;
    double statistic = 0.0;  // slope or stability margin that decided the sign
    double std_error = 0.0;
    double lambda = 0.0;  // tilt at which the decision was made
    std::string tag;
    bool positive = false;
};

struct ThresholdOptions {
    double tol = 4e-4;        // bisection width on the flip rate
    double bracket_lo = 1e-4;
    int lambda_grid = 17;     // tilt grid for the free-tilt scalar method
    long slope_tuples = 6000000;
    int max_escalations = 2;  // doublings applied when a slope is within noise
    PopulationConfig pop;     // population used for distributional slopes

    ThresholdOptions() {
        pop.population_size = 200000;
        pop.sweeps = 280;
        pop.burn_in = 140;
    }
};

struct ThresholdResult {
    double p_c = 0.0;
    double bracket_lo = 0.0, bracket_hi = 0.0;
    ThresholdMethod method = ThresholdMethod::jensen1;
    std::vector<TracePoint> trace;
    std::string note;
};

// Largest BSC flip rate below which the optimized exponent stays positive.
// The sign at each probe comes from the small-rho behaviour of the bound:
// the exponent vanishes at rho = 0, so positivity anywhere in the box is
// equivalent to a positive initial slope at the dominant stationary point
// (for double-edge ensembles under the free-tilt methods, to the existence
// of a tilt that keeps the trivial state linearly stable).
ThresholdResult error_threshold(const LdpcEnsemble& ens, ThresholdMethod method,
                                const ThresholdOptions& opts = {});

// Flip rate at which BSC capacity equals the given rate (bits).
double shannon_p(double rate_bits);

// 1 - (k-1) * min over tilts of sum_y P(y|0)^(1-t) P(y|1)^t; positive while
// the trivial state of the tilted message recursion is linearly stable.
double trivial_stability_margin(const LdpcEnsemble& ens, const DiscreteChannel& ch);

struct TableRow {
    int k = 0, j = 0;
    double rate_bits = 0.0;
    double jensen1 = 0.0, jensen2 = 0.0, replica = 0.0, shannon = 0.0;
};

// Thresholds for the five reference ensembles (k, j) =
// (6,3), (5,3), (6,4), (3,2), (4,2) under all three methods.
std::vector<TableRow> reproduce_table(const ThresholdOptions& opts = {});

}  // namespace errexp
