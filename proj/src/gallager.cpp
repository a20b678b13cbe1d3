#include "errexp/gallager.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "errexp/errors.hpp"
#include "errexp/rng.hpp"

namespace errexp {

namespace {
const double kLn2 = std::log(2.0);
const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

// maximize a unimodal f on [a, b] to x-tolerance tol
double golden_max(double a, double b, double tol, const std::function<double(double)>& f) {
    double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}
}  // namespace

double gallager_e0(const DiscreteChannel& ch, const InputDistribution& q, double rho) {
    if (rho < 0.0) throw DomainError("gallager_e0: rho must be >= 0");
    if (q.size() != ch.input_size()) throw DomainError("gallager_e0: dimension mismatch");
    const double inv = 1.0 / (1.0 + rho);
    double outer = 0.0;
    for (int y = 0; y < ch.output_size(); ++y) {
        double inner = 0.0;
        for (int x = 0; x < ch.input_size(); ++x)
            inner += q.q(x) * std::pow(ch.p(x, y), inv);
        outer += std::pow(inner, 1.0 + rho);
    }
    if (!(outer > 0.0)) throw NumericError("gallager_e0: degenerate channel sum");
    return -std::log(outer);
}

bool input_symmetric(const DiscreteChannel& ch) {
    // every row is a permutation of the first row, and the column multiset is
    // balanced; sufficient for the uniform input to maximize E0 and I
    const int nx = ch.input_size(), ny = ch.output_size();
    std::vector<double> ref;
    for (int y = 0; y < ny; ++y) ref.push_back(ch.p(0, y));
    std::sort(ref.begin(), ref.end());
    for (int x = 1; x < nx; ++x) {
        std::vector<double> row;
        for (int y = 0; y < ny; ++y) row.push_back(ch.p(x, y));
        std::sort(row.begin(), row.end());
        for (int y = 0; y < ny; ++y)
            if (std::abs(row[y] - ref[y]) > 1e-12) return false;
    }
    std::vector<double> col0;
    for (int x = 0; x < nx; ++x) col0.push_back(ch.p(x, 0));
    std::sort(col0.begin(), col0.end());
    for (int y = 1; y < ny; ++y) {
        std::vector<double> col;
        for (int x = 0; x < nx; ++x) col.push_back(ch.p(x, y));
        std::sort(col.begin(), col.end());
        for (int x = 0; x < nx; ++x)
            if (std::abs(col[x] - col0[x]) > 1e-12) return false;
    }
    return true;
}

InputDistribution optimize_e0_input(const DiscreteChannel& ch, double rho) {
    const int nx = ch.input_size();
    if (input_symmetric(ch)) return InputDistribution::uniform(nx);
    // multiplicative-update ascent on the simplex; E0's inner sum is linear
    // in Q so the gradient of the outer expression is cheap
    const int ny = ch.output_size();
    const double inv = 1.0 / (1.0 + rho);
    CounterRng rng(0x5eedULL);
    std::vector<double> best;
    double best_val = -1e300;
    for (int restart = 0; restart < 5; ++restart) {
        std::vector<double> q(nx);
        double norm = 0.0;
        for (int x = 0; x < nx; ++x) {
            q[x] = restart == 0 ? 1.0 : 0.05 + rng.uniform(7, restart, x);
            norm += q[x];
        }
        for (auto& v : q) v /= norm;
        for (int it = 0; it < 3000; ++it) {
            // grad_x of sum_y inner^{1+rho} = (1+rho) sum_y inner^rho P^{inv}
            std::vector<double> inner(ny, 0.0);
            for (int y = 0; y < ny; ++y)
                for (int x = 0; x < nx; ++x) inner[y] += q[x] * std::pow(ch.p(x, y), inv);
            std::vector<double> g(nx, 0.0);
            for (int x = 0; x < nx; ++x)
                for (int y = 0; y < ny; ++y)
                    g[x] += std::pow(inner[y], rho) * std::pow(ch.p(x, y), inv);
            // minimizing sum_y inner^{1+rho}: shrink mass where gradient large
            double zn = 0.0;
            for (int x = 0; x < nx; ++x) {
                q[x] *= std::exp(-8.0 * g[x]);
                zn += q[x];
            }
            for (auto& v : q) v /= zn;
        }
        const double val = gallager_e0(ch, InputDistribution(q), rho);
        if (val > best_val) {
            best_val = val;
            best = q;
        }
    }
    return InputDistribution(best);
}

ExponentResult random_coding_exponent(double rate_bits, const DiscreteChannel& ch,
                                      const std::optional<InputDistribution>& q_opt) {
    if (!(rate_bits > 0.0) || rate_bits > std::log2(static_cast<double>(ch.input_size())))
        throw DomainError("random_coding_exponent: rate outside (0, log2|X|]");
    auto value_at = [&](double rho) {
        const InputDistribution q = q_opt ? *q_opt : optimize_e0_input(ch, rho);
        return -rho * rate_bits * kLn2 + gallager_e0(ch, q, rho);
    };
    const double rho_star = golden_max(0.0, 1.0, 1e-10, value_at);
    double val = value_at(rho_star);
    double rs = rho_star;
    // the objective is concave in rho; snap to the boundary when the interior
    // optimum hugs it
    if (value_at(1.0) >= val) {
        val = value_at(1.0);
        rs = 1.0;
    }
    if (val <= 0.0) {
        val = 0.0;
        rs = 0.0;
    }
    const InputDistribution q = q_opt ? *q_opt : optimize_e0_input(ch, rs);
    return {val, rs, q, rs >= 1.0 - 1e-7};
}

std::pair<double, double> critical_rates(const DiscreteChannel& ch) {
    if (!ch.strictly_positive()) throw DomainError("critical_rates: channel must be strictly positive");
    const double rc = capacity(ch).bits;
    if (rc <= 1e-12) return {0.0, 0.0};
    // R_b solves dE0/drho|_{rho=1} = R ln2 with Q optimized at rho=1
    auto slope_gap = [&](double rate) {
        const InputDistribution q = optimize_e0_input(ch, 1.0);
        const double h = 1e-6;
        const double d = (gallager_e0(ch, q, 1.0 + h) - gallager_e0(ch, q, 1.0 - h)) / (2.0 * h);
        return d - rate * kLn2;
    };
    double lo = 1e-4, hi = rc;
    double flo = slope_gap(lo), fhi = slope_gap(hi);
    if (flo <= 0.0) return {rc, 0.0};
    if (fhi >= 0.0) throw ConvergenceError("critical_rates: R_b bracket failed at capacity end");
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        (slope_gap(mid) > 0.0 ? lo : hi) = mid;
    }
    return {rc, 0.5 * (lo + hi)};
}

double unrestricted_rs1_exponent(double rate_bits, const DiscreteChannel& ch,
                                 const InputDistribution& q) {
    auto f = [&](double rho) { return -rho * rate_bits * kLn2 + gallager_e0(ch, q, rho); };
    double rho_max = 2.0;
    const double h = 1e-4;
    while (rho_max < 4096.0 && f(rho_max + h) - f(rho_max) > 0.0) rho_max *= 2.0;
    const double rho_star = golden_max(0.0, rho_max, 1e-9 * rho_max, f);
    return std::max(f(rho_star), 0.0);
}

}  // namespace errexp
