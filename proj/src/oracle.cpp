#include "errexp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>

#include "errexp/errors.hpp"
#include "errexp/rng.hpp"

namespace errexp {
namespace {

// sum_x q(x) P(y|x)^e, refusing 0^negative
double q_moment(const InputDistribution& q, const DiscreteChannel& ch, int y, double e) {
    double s = 0.0;
    for (int x = 0; x < ch.input_size(); ++x) {
        const double p = ch.p(x, y);
        if (p == 0.0) {
            if (e < 0.0) throw DomainError("zero transition raised to a negative power");
            if (e == 0.0) s += q.q(x);
            continue;
        }
        s += q.q(x) * std::pow(p, e);
    }
    return s;
}

__int128 factorial128(int n) {
    __int128 f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double to_exact_double(__int128 v) {
    constexpr __int128 kMax = static_cast<__int128>(1) << 53;
    if (v >= kMax) throw ResourceError("partition weight exceeds exact double range");
    return static_cast<double>(static_cast<long long>(v));
}

void occupations_rec(int remaining, int max_part, std::vector<int>& counts,
                     std::vector<Occupation>& out) {
    if (remaining == 0) {
        out.push_back({counts});
        return;
    }
    for (int t = std::min(remaining, max_part); t >= 1; --t) {
        counts[t - 1] += 1;
        occupations_rec(remaining - t, t, counts, out);
        counts[t - 1] -= 1;
    }
}

int ipow_int(int base, int exp) {
    int r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

int Occupation::replicas() const {
    int r = 0;
    for (std::size_t t = 0; t < counts.size(); ++t) r += static_cast<int>(t + 1) * counts[t];
    return r;
}

int Occupation::occupied() const {
    int s = 0;
    for (int c : counts) s += c;
    return s;
}

std::vector<Occupation> enumerate_occupations(int rho) {
    if (rho < 1 || rho > 8) throw DomainError("occupation patterns supported for 1 <= rho <= 8");
    std::vector<Occupation> out;
    std::vector<int> counts(rho, 0);
    occupations_rec(rho, rho, counts, out);
    return out;
}

double partition_weight(const Occupation& occ, int K, int rho) {
    if (K < 1 || K > 6) throw DomainError("partition weights supported for 1 <= K <= 6");
    if (rho < 1 || rho > 8) throw DomainError("partition weights supported for 1 <= rho <= 8");
    if (occ.replicas() != rho) throw DomainError("occupation pattern does not use rho replicas");
    const int wrong = ipow_int(2, K) - 1;
    const int s = occ.occupied();
    __int128 num = factorial128(rho);
    for (int i = 0; i < s; ++i) {
        if (wrong - i <= 0) return 0.0;
        num *= (wrong - i);
    }
    __int128 den = 1;
    for (std::size_t t = 0; t < occ.counts.size(); ++t) {
        const int it = occ.counts[t];
        if (it == 0) continue;
        for (int c = 0; c < it; ++c) den *= factorial128(static_cast<int>(t + 1));
        den *= factorial128(it);
    }
    return to_exact_double(num / den);
}

double ensemble_average_integer_rho(int K, int N, const InputDistribution& q,
                                    const DiscreteChannel& ch, double lam, int rho) {
    if (N < 1) throw DomainError("N must be positive");
    if (q.size() != ch.input_size()) throw DomainError("input distribution does not match channel");
    const int ny = ch.output_size();
    double total = 0.0;
    for (const Occupation& occ : enumerate_occupations(rho)) {
        const double w = partition_weight(occ, K, rho);
        if (w == 0.0) continue;
        double per_symbol = 0.0;
        for (int y = 0; y < ny; ++y) {
            double f = q_moment(q, ch, y, 1.0 - lam * rho);
            for (std::size_t t = 0; t < occ.counts.size(); ++t)
                for (int c = 0; c < occ.counts[t]; ++c)
                    f *= q_moment(q, ch, y, lam * static_cast<double>(t + 1));
            per_symbol += f;
        }
        total += w * std::pow(per_symbol, N);
    }
    return total;
}

MonteCarloAverage mc_ensemble_average(int K, int N, const InputDistribution& q,
                                      const DiscreteChannel& ch, double lam, int rho,
                                      int codebooks, uint64_t seed) {
    if (codebooks < 2) throw DomainError("need at least two codebook samples");
    if (rho < 1 || rho > 3) throw DomainError("codebook sampling supported for 1 <= rho <= 3");
    const int words = ipow_int(2, K);
    const int wrong = words - 1;
    double replica_tuples = 1.0;
    for (int r = 0; r < rho; ++r) replica_tuples *= wrong;
    if (replica_tuples * N > 5e7) throw ResourceError("replica sum too large for codebook sampling");

    CounterRng rng(seed);
    const int ny = ch.output_size();
    // per-symbol channel powers
    std::vector<double> p_lam(static_cast<std::size_t>(ch.input_size()) * ny);
    std::vector<double> p_ref(p_lam.size());
    for (int x = 0; x < ch.input_size(); ++x)
        for (int y = 0; y < ny; ++y) {
            const double p = ch.p(x, y);
            const double el = lam, er = 1.0 - lam * rho;
            if (p == 0.0 && (el < 0.0 || er < 0.0))
                throw DomainError("zero transition raised to a negative power");
            p_lam[static_cast<std::size_t>(x) * ny + y] = p == 0.0 && el == 0.0 ? 1.0 : std::pow(p, el);
            p_ref[static_cast<std::size_t>(x) * ny + y] = p == 0.0 && er == 0.0 ? 1.0 : std::pow(p, er);
        }

    double sum = 0.0, sum_sq = 0.0;
    std::vector<int> book(static_cast<std::size_t>(words) * N);
    std::vector<int> idx(rho, 1);
    for (int b = 0; b < codebooks; ++b) {
        for (int w = 0; w < words; ++w)
            for (int i = 0; i < N; ++i) {
                const double r = rng.uniform(0, static_cast<uint64_t>(b), static_cast<uint64_t>(w),
                                             static_cast<uint64_t>(i));
                double acc = 0.0;
                int x = 0;
                while (x < q.size() - 1 && acc + q.q(x) <= r) acc += q.q(x++);
                book[static_cast<std::size_t>(w) * N + i] = x;
            }
        // exact sum over ordered replica assignments to wrong words
        double g = 0.0;
        std::fill(idx.begin(), idx.end(), 1);
        for (;;) {
            double prod = 1.0;
            for (int i = 0; i < N; ++i) {
                double sy = 0.0;
                for (int y = 0; y < ny; ++y) {
                    double f = p_ref[static_cast<std::size_t>(book[i]) * ny + y];
                    for (int r = 0; r < rho; ++r)
                        f *= p_lam[static_cast<std::size_t>(book[static_cast<std::size_t>(idx[r]) * N + i]) * ny + y];
                    sy += f;
                }
                prod *= sy;
            }
            g += prod;
            int r = 0;
            while (r < rho && ++idx[r] > wrong) idx[r++] = 1;
            if (r == rho) break;
        }
        sum += g;
        sum_sq += g * g;
    }
    const double n = static_cast<double>(codebooks);
    const double mean = sum / n;
    const double var = std::max((sum_sq - sum * sum / n) / (n - 1.0), 0.0);
    return {mean, std::sqrt(var / n)};
}

double chernoff_rhs_exact(int K, int N, const InputDistribution& q, const DiscreteChannel& ch,
                          double rho) {
    if (K < 1 || N < 1) throw DomainError("K and N must be positive");
    if (rho <= 0.0) throw DomainError("rho must be positive");
    double per_symbol = 0.0;
    for (int y = 0; y < ch.output_size(); ++y)
        per_symbol += std::pow(q_moment(q, ch, y, 1.0 / (1.0 + rho)), 1.0 + rho);
    return std::pow(std::pow(2.0, K) - 1.0, rho) * std::pow(per_symbol, N);
}

SmallCode codebook_from_parity(const CodeInstance& code) {
    if (code.n < 1 || code.n > 20) throw ResourceError("parity enumeration supports n <= 20");
    SmallCode out;
    out.n = code.n;
    const uint32_t top = static_cast<uint32_t>(1) << code.n;
    for (uint32_t x = 0; x < top; ++x) {
        if (!parity_indicator(x, code)) continue;
        std::vector<int> word(code.n);
        for (int l = 0; l < code.n; ++l) word[l] = static_cast<int>((x >> l) & 1u);
        out.words.push_back(std::move(word));
    }
    return out;
}

double exact_ml_error(const SmallCode& code, const DiscreteChannel& ch) {
    if (code.words.size() < 2) throw DomainError("codebook needs at least two words");
    for (const auto& w : code.words) {
        if (static_cast<int>(w.size()) != code.n) throw DomainError("codeword length mismatch");
        for (int x : w)
            if (x < 0 || x >= ch.input_size()) throw DomainError("codeword symbol outside alphabet");
    }
    const int ny = ch.output_size();
    double space = 1.0;
    for (int i = 0; i < code.n; ++i) space *= ny;
    if (space > 4.2e6) throw ResourceError("output space too large for exact enumeration");

    const std::size_t m = code.words.size();
    std::vector<double> like(m);
    std::vector<int> y(code.n, 0);
    double err = 0.0;
    for (;;) {
        for (std::size_t c = 0; c < m; ++c) {
            double l = 1.0;
            for (int i = 0; i < code.n; ++i) l *= ch.p(code.words[c][i], y[i]);
            like[c] = l;
        }
        for (std::size_t c0 = 0; c0 < m; ++c0) {
            if (like[c0] == 0.0) continue;  // output never produced by this word
            double best_other = 0.0;
            for (std::size_t c = 0; c < m; ++c)
                if (c != c0) best_other = std::max(best_other, like[c]);
            if (best_other >= like[c0] * (1.0 - 1e-12)) err += like[c0];
        }
        int i = 0;
        while (i < code.n && ++y[i] == ny) y[i++] = 0;
        if (i == code.n) break;
    }
    return err / static_cast<double>(m);
}

double chernoff_rhs_exact(const SmallCode& code, const DiscreteChannel& ch, double lam,
                          double rho) {
    if (code.words.size() < 2) throw DomainError("codebook needs at least two words");
    if (!(lam > 0.0) || !(rho > 0.0)) throw DomainError("bound parameters must be positive");
    if (!ch.strictly_positive()) throw DomainError("tilted bound needs positive transitions");
    const int ny = ch.output_size();
    double space = 1.0;
    for (int i = 0; i < code.n; ++i) space *= ny;
    if (space > 4.2e6) throw ResourceError("output space too large for exact enumeration");

    const std::size_t m = code.words.size();
    std::vector<double> plain(m), tilted(m);
    std::vector<int> y(code.n, 0);
    double total = 0.0;
    for (;;) {
        for (std::size_t c = 0; c < m; ++c) {
            double l = 1.0, t = 1.0;
            for (int i = 0; i < code.n; ++i) {
                const double p = ch.p(code.words[c][i], y[i]);
                l *= p;
                t *= std::pow(p, lam);
            }
            plain[c] = l;
            tilted[c] = t;
        }
        for (std::size_t c0 = 0; c0 < m; ++c0) {
            double others = 0.0;
            for (std::size_t c = 0; c < m; ++c)
                if (c != c0) others += tilted[c];
            total += plain[c0] / std::pow(tilted[c0], rho) * std::pow(others, rho);
        }
        int i = 0;
        while (i < code.n && ++y[i] == ny) y[i++] = 0;
        if (i == code.n) break;
    }
    return total / static_cast<double>(m);
}

MomentClosureResult moment_closure_rho2(const LdpcEnsemble& ens, const DiscreteChannel& ch,
                                        double lam) {
    if (ch.input_size() != 2) throw DomainError("moment closure needs a binary-input channel");
    if (!ch.strictly_positive()) throw DomainError("moment closure needs positive transitions");
    const int j = ens.j, k = ens.k, ny = ch.output_size();
    std::vector<double> p0(ny), p0l(ny), p1l(ny), pref(ny);
    for (int y = 0; y < ny; ++y) {
        p0[y] = ch.p(0, y);
        p0l[y] = std::pow(ch.p(0, y), lam);
        p1l[y] = std::pow(ch.p(1, y), lam);
        pref[y] = std::pow(ch.p(0, y), 1.0 - 2.0 * lam);
    }
    const auto powi = [](double x, int n) {
        double r = 1.0;
        for (int i = 0; i < n; ++i) r *= x;
        return r;
    };
    // start from the moments of the tilted channel message
    double a = 0.0, m2 = 0.0;
    for (int y = 0; y < ny; ++y) {
        const double u = (p0l[y] - p1l[y]) / (p0l[y] + p1l[y]);
        a += p0[y] * u;
        m2 += p0[y] * u * u;
    }
    constexpr double kStep = 0.3;
    int it = 0;
    double b = 0.0, m2h = 0.0;
    for (; it < 8000; ++it) {
        b = powi(a, k - 1);
        m2h = powi(m2, k - 1);
        const double g00 = 0.25 * (1.0 + 2.0 * b + m2h);
        const double g11 = 0.25 * (1.0 - 2.0 * b + m2h);
        const double g01 = 0.25 * (1.0 - m2h);
        double z = 0.0, na = 0.0, nm2 = 0.0;
        for (int y = 0; y < ny; ++y) {
            const double e00 = p0l[y] * p0l[y] * powi(g00, j - 1);
            const double e11 = p1l[y] * p1l[y] * powi(g11, j - 1);
            const double e01 = p0l[y] * p1l[y] * powi(g01, j - 1);
            z += pref[y] * (e00 + 2.0 * e01 + e11);
            na += pref[y] * (e00 - e11);
            nm2 += pref[y] * (e00 - 2.0 * e01 + e11);
        }
        const double a_new = na / z, m2_new = nm2 / z;
        if (std::abs(a_new - a) < 1e-14 && std::abs(m2_new - m2) < 1e-14) {
            a = a_new;
            m2 = m2_new;
            break;
        }
        a += kStep * (a_new - a);
        m2 += kStep * (m2_new - m2);
    }
    if (it == 8000) throw ConvergenceError("moment closure did not reach a fixed point");

    b = powi(a, k - 1);
    m2h = powi(m2, k - 1);
    const double g00 = 0.25 * (1.0 + 2.0 * b + m2h);
    const double g11 = 0.25 * (1.0 - 2.0 * b + m2h);
    const double g01 = 0.25 * (1.0 - m2h);
    const double i1 = 0.25 * (1.0 + 2.0 * powi(a, k) + powi(m2, k));
    double i2 = 0.0;
    for (int y = 0; y < ny; ++y)
        i2 += pref[y] * (p0l[y] * p0l[y] * powi(g00, j) + 2.0 * p0l[y] * p1l[y] * powi(g01, j) +
                         p1l[y] * p1l[y] * powi(g11, j));
    const double i3 = 0.25 * (1.0 + 2.0 * a * b + m2 * m2h);
    const double jk = static_cast<double>(j) / k;
    MomentClosureResult res;
    res.exponent = -(jk * std::log(i1) + std::log(i2) - j * std::log(i3));
    res.mean = a;
    res.second_moment = m2;
    res.iterations = it;
    return res;
}

double code_count_exact_ln(int k, int j, int n) {
    if (k == 2 && j == 1) {
        if (n < 2 || n % 2 != 0) throw DomainError("matching count needs even n >= 2");
        return std::lgamma(n + 1.0) - (n / 2.0) * std::log(2.0) - std::lgamma(n / 2.0 + 1.0);
    }
    throw DomainError("exact count implemented for k = 2, j = 1 only");
}

double code_count_asymptotic_ln(int k, int j, int n) {
    if (k < 2 || j < 1) throw DomainError("need k >= 2 and j >= 1");
    if ((static_cast<long long>(n) * j) % k != 0) throw DomainError("n*j must be divisible by k");
    const double jk = static_cast<double>(j) / k;
    const double per_n = (jk - j) + (j - jk) * std::log(static_cast<double>(j) * n) -
                         jk * std::lgamma(static_cast<double>(k)) - std::lgamma(j + 1.0);
    return n * per_n;
}

SaddleResiduals code_count_saddle_residuals(int k, int j, int n) {
    if (k < 2 || j < 1 || n < 1) throw DomainError("need k >= 2, j >= 1, n >= 1");
    const double lkf = std::lgamma(static_cast<double>(k));  // ln (k-1)!
    const double q0 = std::exp(lkf / k) * std::pow(static_cast<double>(j), 1.0 / k) *
                      std::pow(static_cast<double>(n), -1.0 + 1.0 / k);
    const double qh0 = std::exp(-lkf / k) * std::pow(static_cast<double>(j) * n, 1.0 - 1.0 / k);
    const double lhs1 = std::pow(static_cast<double>(n), k - 1.0) * std::pow(q0, k - 1.0) /
                        std::exp(lkf);
    return {lhs1 / qh0 - 1.0, (j / qh0) / q0 - 1.0};
}

}  // namespace errexp
