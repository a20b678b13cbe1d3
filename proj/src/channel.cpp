#include "errexp/channel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "errexp/errors.hpp"

namespace errexp {

namespace {
constexpr double kRowSumTol = 1e-12;
const double kLn2 = std::log(2.0);
}  // namespace

DiscreteChannel::DiscreteChannel(int input_size, int output_size, std::vector<double> transitions)
    : nx_(input_size), ny_(output_size), t_(std::move(transitions)) {
    if (nx_ <= 0 || ny_ <= 0) throw DomainError("channel: alphabet sizes must be positive");
    if (t_.size() != static_cast<std::size_t>(nx_) * ny_)
        throw DomainError("channel: transition matrix size mismatch");
    for (int x = 0; x < nx_; ++x) {
        double row = 0.0;
        for (int y = 0; y < ny_; ++y) {
            const double v = p(x, y);
            if (!(v >= 0.0 && v <= 1.0)) throw DomainError("channel: entry outside [0,1]");
            row += v;
        }
        if (std::abs(row - 1.0) > kRowSumTol) throw DomainError("channel: row does not sum to 1");
    }
}

bool DiscreteChannel::strictly_positive() const {
    return std::all_of(t_.begin(), t_.end(), [](double v) { return v > 0.0; });
}

InputDistribution::InputDistribution(std::vector<double> probabilities) : q_(std::move(probabilities)) {
    if (q_.empty()) throw DomainError("input distribution: empty");
    double s = 0.0;
    for (double v : q_) {
        if (!(v >= 0.0 && v <= 1.0)) throw DomainError("input distribution: entry outside [0,1]");
        s += v;
    }
    if (std::abs(s - 1.0) > kRowSumTol) throw DomainError("input distribution: does not sum to 1");
}

InputDistribution InputDistribution::uniform(int n) {
    if (n <= 0) throw DomainError("input distribution: size must be positive");
    return InputDistribution(std::vector<double>(n, 1.0 / n));
}

DiscreteChannel make_bsc(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("bsc: crossover probability outside [0,1]");
    return DiscreteChannel(2, 2, {1.0 - p, p, p, 1.0 - p});
}

DiscreteChannel parse_channel_spec(const std::string& text) {
    std::istringstream in(text);
    std::string tok, kind;
    double p = -1.0;
    int inputs = 0, outputs = 0;
    std::vector<double> rows;
    bool reading_rows = false;
    while (in >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) {
            if (reading_rows) {
                rows.push_back(std::stod(tok));
                continue;
            }
            throw DomainError("channel spec: expected key=value, got '" + tok + "'");
        }
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        reading_rows = false;
        if (key == "kind") kind = val;
        else if (key == "p") p = std::stod(val);
        else if (key == "inputs") inputs = std::stoi(val);
        else if (key == "outputs") outputs = std::stoi(val);
        else if (key == "rows") {
            reading_rows = true;
            if (!val.empty()) rows.push_back(std::stod(val));
        } else throw DomainError("channel spec: unknown key '" + key + "'");
    }
    if (kind == "bsc") {
        if (p < 0.0) throw DomainError("channel spec: bsc requires p=");
        return make_bsc(p);
    }
    if (kind == "matrix") {
        if (inputs <= 0 || outputs <= 0) throw DomainError("channel spec: matrix requires inputs= and outputs=");
        return DiscreteChannel(inputs, outputs, rows);
    }
    throw DomainError("channel spec: unknown kind '" + kind + "'");
}

DiscreteChannel load_channel(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DomainError("channel file not found: " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_channel_spec(buf.str());
}

double mutual_information(const DiscreteChannel& ch, const InputDistribution& q) {
    if (q.size() != ch.input_size()) throw DomainError("mutual_information: dimension mismatch");
    const int nx = ch.input_size(), ny = ch.output_size();
    double nats = 0.0;
    for (int y = 0; y < ny; ++y) {
        double py = 0.0;
        for (int x = 0; x < nx; ++x) py += q.q(x) * ch.p(x, y);
        if (py <= 0.0) continue;
        for (int x = 0; x < nx; ++x) {
            const double joint = q.q(x) * ch.p(x, y);
            if (joint <= 0.0) continue;
            nats += joint * std::log(ch.p(x, y) / py);
        }
    }
    return nats / kLn2;
}

CapacityResult capacity(const DiscreteChannel& ch, double tol) {
    if (!(tol > 0.0)) throw DomainError("capacity: tol must be positive");
    const int nx = ch.input_size(), ny = ch.output_size();
    std::vector<double> q(nx, 1.0 / nx), d(nx);
    const int cap = 100000;
    for (int it = 1; it <= cap; ++it) {
        // d[x] = sum_y P(y|x) ln(P(y|x)/q_y(y)) with q_y the output marginal
        std::vector<double> py(ny, 0.0);
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x) py[y] += q[x] * ch.p(x, y);
        for (int x = 0; x < nx; ++x) {
            double s = 0.0;
            for (int y = 0; y < ny; ++y) {
                const double v = ch.p(x, y);
                if (v > 0.0) s += v * std::log(v / py[y]);
            }
            d[x] = s;
        }
        double il = 0.0, iu = -1e300;
        for (int x = 0; x < nx; ++x) {
            il += q[x] * std::exp(d[x]);
            iu = std::max(iu, d[x]);
        }
        il = std::log(il);
        if (iu - il < tol * kLn2)
            return {il / kLn2, InputDistribution(q), it};
        double norm = 0.0;
        for (int x = 0; x < nx; ++x) {
            q[x] *= std::exp(d[x]);
            norm += q[x];
        }
        for (int x = 0; x < nx; ++x) q[x] /= norm;
    }
    throw ConvergenceError("capacity: no convergence within iteration cap");
}

}  // namespace errexp
