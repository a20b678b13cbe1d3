#pragma once
#include <cstdint>
#include <vector>

#include "errexp/channel.hpp"
#include "errexp/ldpc.hpp"

namespace errexp {

// Explicit codebook over the channel input alphabet, small enough for exact
// enumeration of the output space.
struct SmallCode {
    int n = 0;
    std::vector<std::vector<int>> words;
};

// All binary words satisfying every parity check (n <= 20).
SmallCode codebook_from_parity(const CodeInstance& code);

// Exact block error probability of maximum-likelihood decoding with the
// transmitted word chosen uniformly; likelihood ties count as errors.
double exact_ml_error(const SmallCode& code, const DiscreteChannel& ch);

// Exact two-parameter bound for one codebook,
//   (1/M) sum_c0 sum_y prod_i P(y_i|c0_i)^(1-lam*rho)
//                      * (sum_{m != c0} prod_i P(y_i|c_m_i)^lam)^rho,
// valid (>= the error probability) for every lam > 0, rho > 0 because the
// inner sum is >= 1 whenever decoding fails.
double chernoff_rhs_exact(const SmallCode& code, const DiscreteChannel& ch, double lam,
                          double rho);

// (2^K - 1)^rho * [ sum_y (sum_x Q(x) P(y|x)^(1/(1+rho)))^(1+rho) ]^N
double chernoff_rhs_exact(int K, int N, const InputDistribution& q, const DiscreteChannel& ch,
                          double rho);

// counts[t-1] = number of wrong codewords carrying exactly t of the rho
// replica indices; sum of t * counts[t-1] over t equals rho.
struct Occupation {
    std::vector<int> counts;
    int replicas() const;
    int occupied() const;
};

std::vector<Occupation> enumerate_occupations(int rho);

// Number of ways rho labelled replicas land on distinct wrong codewords in
// the given pattern, including the choice of the words themselves out of
// 2^K - 1.  Exact (integer-valued; guarded against overflow).
double partition_weight(const Occupation& occ, int K, int rho);

// E over codebooks of 2^K iid Q^N words of
//   sum_y P(y|c0)^(1 - lam*rho) * (sum_{m!=0} prod_i P(y_i|c_m,i)^lam)^rho,
// computed exactly for integer rho by summing occupation patterns.
double ensemble_average_integer_rho(int K, int N, const InputDistribution& q,
                                    const DiscreteChannel& ch, double lam, int rho);

struct MonteCarloAverage {
    double mean = 0.0;
    double std_error = 0.0;
};

// Same average estimated by sampling whole codebooks (the inner replica sum
// is still exact per codebook).
MonteCarloAverage mc_ensemble_average(int K, int N, const InputDistribution& q,
                                      const DiscreteChannel& ch, double lam, int rho,
                                      int codebooks, uint64_t seed);

// Closure of the reweighted message recursion at rho = 2, where the update
// depends on the message distributions only through the first two moments.
struct MomentClosureResult {
    double exponent = 0.0;
    double mean = 0.0;
    double second_moment = 0.0;
    int iterations = 0;
};
MomentClosureResult moment_closure_rho2(const LdpcEnsemble& ens, const DiscreteChannel& ch,
                                        double lam);

// ln of the number of degree-valid parity tables; the exact form covers
// k = 2, j = 1 (perfect matchings, checks unordered).
double code_count_exact_ln(int k, int j, int n);
double code_count_asymptotic_ln(int k, int j, int n);

// Scale-free residuals of the two stationarity conditions behind the
// asymptotic count; both vanish at the exact stationary point.
struct SaddleResiduals {
    double r1 = 0.0, r2 = 0.0;
};
SaddleResiduals code_count_saddle_residuals(int k, int j, int n);

}  // namespace errexp
