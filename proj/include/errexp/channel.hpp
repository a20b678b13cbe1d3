#pragma once
#include <string>
#include <vector>

namespace errexp {

// Finite-alphabet memoryless channel kernel P(y|x), row-stochastic in x.
class DiscreteChannel {
  public:
    DiscreteChannel(int input_size, int output_size, std::vector<double> transitions);

    int input_size() const { return nx_; }
    int output_size() const { return ny_; }
    double p(int x, int y) const { return t_[static_cast<std::size_t>(x) * ny_ + y]; }
    // true iff every transition probability exceeds 0; evaluations that raise
    // P(y|x) to a negative power require this.
    bool strictly_positive() const;

  private:
    int nx_, ny_;
    std::vector<double> t_;  // row-major (x, y)
};

// Distribution Q(x) on the channel input alphabet.
class InputDistribution {
  public:
    explicit InputDistribution(std::vector<double> probabilities);
    static InputDistribution uniform(int n);

    int size() const { return static_cast<int>(q_.size()); }
    double q(int x) const { return q_[x]; }
    const std::vector<double>& probabilities() const { return q_; }

  private:
    std::vector<double> q_;
};

DiscreteChannel make_bsc(double p);

// Loads "kind=bsc p=0.1" or "kind=matrix inputs=2 outputs=2 rows=..." text.
DiscreteChannel load_channel(const std::string& path);
DiscreteChannel parse_channel_spec(const std::string& text);

// I(Q) in bits, with 0*log(0) terms contributing zero.
double mutual_information(const DiscreteChannel& ch, const InputDistribution& q);

struct CapacityResult {
    double bits;
    InputDistribution input;
    int iterations;
};

// Alternating maximization of I(Q); stops when the upper/lower capacity
// bracket is narrower than tol (bits).
CapacityResult capacity(const DiscreteChannel& ch, double tol = 1e-10);

}  // namespace errexp
