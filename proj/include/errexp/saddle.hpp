#pragma once
#include <cstdint>
#include <optional>
#include <vector>

#include "errexp/channel.hpp"
#include "errexp/ldpc.hpp"

namespace errexp {

enum class MessageKind { variable_to_check, check_to_variable };

// Sample cloud representing a cavity-message distribution on [-1, 1].
class MessagePopulation {
  public:
    MessagePopulation(MessageKind kind, std::vector<double> samples);

    MessageKind kind() const { return kind_; }
    const std::vector<double>& samples() const { return s_; }
    std::size_t size() const { return s_.size(); }
    double mean() const;
    double mean_abs_dev_from_one() const;
    // plain-text histogram, 64 bins over [-1, 1]
    std::string histogram() const;

  private:
    MessageKind kind_;
    std::vector<double> s_;
};

struct PopulationConfig {
    int population_size = 10000;
    int sweeps = 400;
    int burn_in = 200;
    int candidate_multiplier = 4;
    uint64_t seed = 20230117;
    int eval_tuples = 100000;  // fresh tuples per functional term
    bool validate() const {
        return population_size >= 2 && burn_in < sweeps && candidate_multiplier >= 1;
    }
};

struct ExponentEstimate {
    double value = 0.0;                 // nats; positive = decaying error bound
    double std_error = 0.0;             // Monte Carlo standard error
    double stationarity_residual = 0.0; // functional shift after one extra
                                        // update, in units of per-sweep scatter
    bool trivial_collapsed = false;
    double rho = 0.0, lambda = 0.0;
};

// ----- scalar (two-number) extremization of the bound exponent -----

struct ScalarSaddle {
    double u, uh;
    double exponent;  // nats at this stationary point
};

// All distinct nontrivial stationary points reachable by damped fixed-point
// iteration from the given starts (default grid 0.1,...,0.99).
std::vector<ScalarSaddle> scalar_stationary_points(const LdpcEnsemble& ens, const DiscreteChannel& ch,
                                                   double rho, double lambda,
                                                   const std::vector<double>& starts = {});

// Exponent at the dominant (smallest-exponent) nontrivial scalar stationary
// point; trivial_collapsed when every start lands on u = uh = 1.
ExponentEstimate jensen_exponent(const LdpcEnsemble& ens, const DiscreteChannel& ch, double rho,
                                 double lambda, const std::vector<double>& starts = {});

// ----- population-dynamics evaluation of the distributional exponent -----

struct PopulationRun {
    ExponentEstimate estimate;
    MessagePopulation pi;      // variable-to-check messages
    MessagePopulation pi_hat;  // check-to-variable messages
};

PopulationRun rs_population_run(const LdpcEnsemble& ens, const DiscreteChannel& ch, double rho,
                                double lambda, const PopulationConfig& cfg);

ExponentEstimate rs_population_exponent(const LdpcEnsemble& ens, const DiscreteChannel& ch,
                                        double rho, double lambda, const PopulationConfig& cfg);

// ----- small-rho slope diagnostics (threshold drivers) -----
//
// The exponent vanishes linearly as rho -> 0; its slope at the iteration
// fixed point decides positivity of the optimized exponent near the edge of
// the rho domain.

struct SlopeEstimate {
    double slope = 0.0;      // d(exponent)/d(rho) at rho -> 0, nats per unit rho
    double std_error = 0.0;  // 0 for the scalar variant
    bool has_fixed_point = false;
    double u = 0.0, uh = 0.0;  // scalar variant: the fixed point used
};

// Scalar variant: slope at the attracting fixed point of the rho=0 update.
SlopeEstimate jensen_smallrho_slope(const LdpcEnsemble& ens, const DiscreteChannel& ch,
                                    double lambda, const std::vector<double>& starts = {});

// Distributional variant: slope at the rho=0 population fixed point
// (unweighted message-distribution evolution).
SlopeEstimate rs_smallrho_slope(const LdpcEnsemble& ens, const DiscreteChannel& ch, double lambda,
                                const PopulationConfig& cfg);

// Channel seen from the all-zero input: P0[y] = P(y|0), P1[y] = P(y|1).
// Binary-input gate shared by all saddle evaluations.
struct BinaryView {
    std::vector<double> p0, p1;
};
BinaryView binary_view(const DiscreteChannel& ch);

}  // namespace errexp
