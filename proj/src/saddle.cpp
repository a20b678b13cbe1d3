#include "errexp/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "errexp/errors.hpp"
#include "errexp/parallel.hpp"
#include "errexp/rng.hpp"

namespace errexp {
namespace {

constexpr uint64_t kTagInit = 0;
constexpr uint64_t kTagCheck = 1;
constexpr uint64_t kTagCandY = 2;
constexpr uint64_t kTagCandIdx = 3;
constexpr uint64_t kTagResample = 4;
constexpr uint64_t kTagEval = 5;

constexpr double kTrivialTol = 1e-9;
constexpr double kLogFloor = 1e-300;

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

double safe_log(double x) { return std::log(std::max(x, kLogFloor)); }

// Channel-dependent tables shared by the scalar and population evaluators.
struct Env {
    int j, k, Y;
    double rho, lam;
    std::vector<double> p0, p1;    // P(y|0), P(y|1)
    std::vector<double> p0l, p1l;  // P(y|x)^lambda
    std::vector<double> pref;      // P(y|0)^(1 - lambda*rho)
    std::vector<double> cum0;      // CDF of P(y|0)
    double h0 = 0.0;               // sum_y P(y|0) ln P(y|0)
};

Env make_env(const LdpcEnsemble& ens, const DiscreteChannel& ch, double rho, double lam) {
    if (rho < 0.0) throw DomainError("rho must be non-negative");
    if (lam < 0.0) throw DomainError("lambda must be non-negative");
    BinaryView bv = binary_view(ch);
    Env e;
    e.j = ens.j;
    e.k = ens.k;
    e.Y = static_cast<int>(bv.p0.size());
    e.rho = rho;
    e.lam = lam;
    e.p0 = bv.p0;
    e.p1 = bv.p1;
    e.p0l.resize(e.Y);
    e.p1l.resize(e.Y);
    e.pref.resize(e.Y);
    e.cum0.resize(e.Y);
    double acc = 0.0;
    for (int y = 0; y < e.Y; ++y) {
        e.p0l[y] = std::pow(e.p0[y], lam);
        e.p1l[y] = std::pow(e.p1[y], lam);
        e.pref[y] = std::pow(e.p0[y], 1.0 - lam * rho);
        acc += e.p0[y];
        e.cum0[y] = acc;
        e.h0 += e.p0[y] * std::log(e.p0[y]);
    }
    e.cum0[e.Y - 1] = 1.0;
    return e;
}

// ----- scalar fixed point -----

// One undamped update of the stationarity condition u = D / (1 - D*uh),
// uh = u^(k-1).
double scalar_step(const Env& e, double u) {
    const double uh = ipow(u, e.k - 1);
    const double c = 0.5 * (1.0 + uh);
    const double d = 0.5 * (1.0 - uh);
    double z = 0.0, dsum = 0.0;
    for (int y = 0; y < e.Y; ++y) {
        const double a0 = ipow(c, e.j - 1) * e.p0l[y];
        const double a1 = ipow(d, e.j - 1) * e.p1l[y];
        const double w = c * a0 + d * a1;
        z += e.pref[y] * std::pow(w, e.rho);
        dsum += 0.5 * e.pref[y] * std::pow(w, e.rho - 1.0) * (a0 - a1);
    }
    const double dd = dsum / z;
    const double denom = 1.0 - dd * uh;
    if (std::abs(denom) < 1e-300) return dd > 0.0 ? 1.0 : -1.0;
    return std::clamp(dd / denom, -1.0, 1.0);
}

double scalar_exponent_at(const Env& e, double u) {
    const double uh = ipow(u, e.k - 1);
    const double c = 0.5 * (1.0 + uh);
    const double d = 0.5 * (1.0 - uh);
    double z = 0.0;
    for (int y = 0; y < e.Y; ++y) {
        const double w = ipow(c, e.j) * e.p0l[y] + ipow(d, e.j) * e.p1l[y];
        z += e.pref[y] * std::pow(w, e.rho);
    }
    const double jk = static_cast<double>(e.j) / e.k;
    const double check = safe_log(0.5 * (1.0 + ipow(u, e.k)));
    const double edge = safe_log(0.5 * (1.0 + u * uh));
    return -(jk * e.rho * check + std::log(z) - e.j * e.rho * edge);
}

// d(exponent)/d(rho) at rho -> 0, evaluated at a rho=0 fixed point.
double scalar_slope_at(const Env& e, double u) {
    const double uh = ipow(u, e.k - 1);
    const double c = 0.5 * (1.0 + uh);
    const double d = 0.5 * (1.0 - uh);
    double vterm = 0.0;
    for (int y = 0; y < e.Y; ++y) {
        const double w = ipow(c, e.j) * e.p0l[y] + ipow(d, e.j) * e.p1l[y];
        vterm += e.p0[y] * safe_log(w);
    }
    const double jk = static_cast<double>(e.j) / e.k;
    const double check = safe_log(0.5 * (1.0 + ipow(u, e.k)));
    const double edge = safe_log(0.5 * (1.0 + u * uh));
    return -(jk * check + vterm - e.lam * e.h0 - e.j * edge);
}

struct ScalarFp {
    double u;
    bool converged;
};

ScalarFp damped_solve(const Env& e, double u0) {
    double u = u0;
    for (int it = 0; it < 60000; ++it) {
        const double f = scalar_step(e, u);
        if (std::abs(f - u) < 1e-13) return {f, true};
        u = 0.5 * u + 0.5 * f;
    }
    return {u, false};
}

const std::vector<double>& default_starts() {
    static const std::vector<double> s = {0.1, 0.3, 0.5, 0.7, 0.9, 0.99};
    return s;
}

// ----- population engine -----

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double batch_means_se(const std::vector<double>& xs) {
    const std::size_t n = xs.size();
    if (n < 4) return 0.0;
    const std::size_t b = std::min<std::size_t>(20, n / 2);
    const std::size_t len = n / b;
    std::vector<double> bm(b, 0.0);
    for (std::size_t i = 0; i < b; ++i) {
        double s = 0.0;
        for (std::size_t t = 0; t < len; ++t) s += xs[i * len + t];
        bm[i] = s / static_cast<double>(len);
    }
    const double m = mean_of(bm);
    double v = 0.0;
    for (double x : bm) v += (x - m) * (x - m);
    v /= static_cast<double>(b - 1);
    return std::sqrt(std::max(v, 0.0) / static_cast<double>(b));
}

struct PopEngine {
    const Env& e;
    const PopulationConfig& cfg;
    CounterRng rng;
    std::size_t m, c;  // population and candidate pool sizes
    std::vector<double> pi, pihat, cand_u, cand_w, cum, scratch;

    PopEngine(const Env& env, const PopulationConfig& config)
        : e(env), cfg(config), rng(config.seed) {
        m = static_cast<std::size_t>(cfg.population_size);
        c = m * static_cast<std::size_t>(cfg.candidate_multiplier);
        pi.resize(m);
        pihat.resize(m);
        cand_u.resize(c);
        cand_w.resize(c);
        cum.resize(c);
        scratch.resize(m);
        parallel_for(m, [&](std::size_t i) {
            const double r = rng.uniform(kTagInit, 0, i, 0);
            int y = 0;
            while (y < e.Y - 1 && e.cum0[y] <= r) ++y;
            pi[i] = (e.p0l[y] - e.p1l[y]) / (e.p0l[y] + e.p1l[y]);
        });
    }

    void check_update(uint64_t sweep) {
        parallel_for(m, [&](std::size_t i) {
            double prod = 1.0;
            for (int d = 0; d < e.k - 1; ++d)
                prod *= pi[rng.below(m, kTagCheck, sweep, i, static_cast<uint64_t>(d))];
            pihat[i] = prod;
        });
    }

    void variable_update(uint64_t sweep) {
        parallel_for(c, [&](std::size_t i) {
            const int y = static_cast<int>(rng.below(static_cast<uint64_t>(e.Y), kTagCandY, sweep, i, 0));
            double nu0 = e.p0l[y], nu1 = e.p1l[y];
            for (int d = 0; d < e.j - 1; ++d) {
                const double uh = pihat[rng.below(m, kTagCandIdx, sweep, i, static_cast<uint64_t>(d))];
                nu0 *= 0.5 * (1.0 + uh);
                nu1 *= 0.5 * (1.0 - uh);
            }
            const double s = nu0 + nu1;
            if (s > 0.0) {
                cand_u[i] = (nu0 - nu1) / s;
                cand_w[i] = e.pref[y] * std::pow(s, e.rho);
            } else {  // contradictory incoming messages: zero-weight candidate
                cand_u[i] = 0.0;
                cand_w[i] = 0.0;
            }
        });
        double acc = 0.0;
        for (std::size_t i = 0; i < c; ++i) {
            acc += cand_w[i];
            cum[i] = acc;
        }
        if (!(acc > 0.0) || !std::isfinite(acc))
            throw NumericError("candidate weights degenerate in population resampling");
        const double step = acc / static_cast<double>(m);
        const double r = rng.uniform(kTagResample, sweep, 0, 0);
        std::size_t idx = 0;
        for (std::size_t i = 0; i < m; ++i) {
            const double target = (static_cast<double>(i) + r) * step;
            while (idx + 1 < c && cum[idx] < target) ++idx;
            scratch[i] = cand_u[idx];
        }
        std::swap(pi, scratch);
    }

    void sweep_once(uint64_t sweep) {
        check_update(sweep);
        variable_update(sweep);
    }

    // -[(j/k) ln I1 + ln I2 - j ln I3] from fresh tuples against the current
    // populations.
    double functional(uint64_t sweep) const {
        const auto t = static_cast<std::size_t>(cfg.eval_tuples);
        const double jk = static_cast<double>(e.j) / e.k;
        const double i1 = blocked_sum(t, [&](std::size_t i) {
            double prod = 1.0;
            for (int d = 0; d < e.k; ++d)
                prod *= pi[rng.below(m, kTagEval, sweep, i, static_cast<uint64_t>(d))];
            return std::pow(0.5 * (1.0 + prod), e.rho);
        }) / static_cast<double>(t);
        const double i2 = blocked_sum(t, [&](std::size_t i) {
            double pc = 1.0, pd = 1.0;
            for (int d = 0; d < e.j; ++d) {
                const double uh = pihat[rng.below(m, kTagEval, sweep, i, static_cast<uint64_t>(e.k + d))];
                pc *= 0.5 * (1.0 + uh);
                pd *= 0.5 * (1.0 - uh);
            }
            double acc = 0.0;
            for (int y = 0; y < e.Y; ++y)
                acc += e.pref[y] * std::pow(e.p0l[y] * pc + e.p1l[y] * pd, e.rho);
            return acc;
        }) / static_cast<double>(t);
        const double i3 = blocked_sum(t, [&](std::size_t i) {
            const double u = pi[rng.below(m, kTagEval, sweep, i, static_cast<uint64_t>(e.k + e.j))];
            const double uh = pihat[rng.below(m, kTagEval, sweep, i, static_cast<uint64_t>(e.k + e.j + 1))];
            return std::pow(0.5 * (1.0 + u * uh), e.rho);
        }) / static_cast<double>(t);
        return -(jk * safe_log(i1) + safe_log(i2) - e.j * safe_log(i3));
    }

    double trivial_deviation() const {
        double s = 0.0;
        for (double u : pi) s += std::abs(1.0 - u);
        return s / static_cast<double>(m);
    }
};

}  // namespace

BinaryView binary_view(const DiscreteChannel& ch) {
    if (ch.input_size() != 2)
        throw DomainError("code-ensemble exponents are defined for binary-input channels");
    if (!ch.strictly_positive())
        throw DomainError("tilted-measure evaluations need strictly positive transitions");
    BinaryView bv;
    bv.p0.resize(ch.output_size());
    bv.p1.resize(ch.output_size());
    for (int y = 0; y < ch.output_size(); ++y) {
        bv.p0[y] = ch.p(0, y);
        bv.p1[y] = ch.p(1, y);
    }
    return bv;
}

MessagePopulation::MessagePopulation(MessageKind kind, std::vector<double> samples)
    : kind_(kind), s_(std::move(samples)) {
    if (s_.empty()) throw DomainError("population must not be empty");
    for (double u : s_)
        if (!(u >= -1.0 && u <= 1.0)) throw DomainError("message outside [-1, 1]");
}

double MessagePopulation::mean() const { return mean_of(s_); }

double MessagePopulation::mean_abs_dev_from_one() const {
    double a = 0.0;
    for (double u : s_) a += std::abs(1.0 - u);
    return a / static_cast<double>(s_.size());
}

std::string MessagePopulation::histogram() const {
    constexpr int kBins = 64;
    std::vector<std::size_t> bins(kBins, 0);
    for (double u : s_) {
        int b = static_cast<int>((u + 1.0) * 0.5 * kBins);
        bins[std::clamp(b, 0, kBins - 1)]++;
    }
    std::string out = "# bin_lo bin_hi count (" + std::to_string(s_.size()) + " samples)\n";
    char line[96];
    for (int b = 0; b < kBins; ++b) {
        const double lo = -1.0 + 2.0 * b / kBins, hi = -1.0 + 2.0 * (b + 1) / kBins;
        std::snprintf(line, sizeof line, "%+.6f %+.6f %zu\n", lo, hi, bins[b]);
        out += line;
    }
    return out;
}

std::vector<ScalarSaddle> scalar_stationary_points(const LdpcEnsemble& ens, const DiscreteChannel& ch,
                                                   double rho, double lambda,
                                                   const std::vector<double>& starts) {
    const Env e = make_env(ens, ch, rho, lambda);
    const auto& s0 = starts.empty() ? default_starts() : starts;
    std::vector<ScalarSaddle> out;
    for (double u0 : s0) {
        const ScalarFp fp = damped_solve(e, u0);
        if (!fp.converged) continue;
        if (fp.u <= kTrivialTol || fp.u >= 1.0 - kTrivialTol) continue;  // trivial or mirror
        bool dup = false;
        for (const auto& s : out) dup = dup || std::abs(s.u - fp.u) < 1e-6;
        if (dup) continue;
        out.push_back({fp.u, ipow(fp.u, e.k - 1), scalar_exponent_at(e, fp.u)});
    }
    std::sort(out.begin(), out.end(),
              [](const ScalarSaddle& a, const ScalarSaddle& b) { return a.exponent < b.exponent; });
    return out;
}

ExponentEstimate jensen_exponent(const LdpcEnsemble& ens, const DiscreteChannel& ch, double rho,
                                 double lambda, const std::vector<double>& starts) {
    ExponentEstimate est;
    est.rho = rho;
    est.lambda = lambda;
    const auto pts = scalar_stationary_points(ens, ch, rho, lambda, starts);
    if (pts.empty()) {
        est.trivial_collapsed = true;  // every start reached u = uh = 1
        return est;
    }
    est.value = pts.front().exponent;  // dominant branch: smallest exponent
    return est;
}

SlopeEstimate jensen_smallrho_slope(const LdpcEnsemble& ens, const DiscreteChannel& ch,
                                    double lambda, const std::vector<double>& starts) {
    const Env e = make_env(ens, ch, 0.0, lambda);
    const auto pts = scalar_stationary_points(ens, ch, 0.0, lambda, starts);
    SlopeEstimate out;
    if (pts.empty()) return out;
    out.has_fixed_point = true;
    out.slope = std::numeric_limits<double>::infinity();
    for (const auto& s : pts) {
        const double sl = scalar_slope_at(e, s.u);
        if (sl < out.slope) {
            out.slope = sl;
            out.u = s.u;
            out.uh = s.uh;
        }
    }
    return out;
}

PopulationRun rs_population_run(const LdpcEnsemble& ens, const DiscreteChannel& ch, double rho,
                                double lambda, const PopulationConfig& cfg) {
    if (!cfg.validate()) throw DomainError("invalid population configuration");
    const Env e = make_env(ens, ch, rho, lambda);
    PopEngine eng(e, cfg);
    const bool do_evals = rho != 0.0;
    std::vector<double> evals;
    if (do_evals) evals.reserve(static_cast<std::size_t>(cfg.sweeps - cfg.burn_in));
    for (int s = 0; s < cfg.sweeps; ++s) {
        eng.sweep_once(static_cast<uint64_t>(s));
        if (do_evals && s >= cfg.burn_in) evals.push_back(eng.functional(static_cast<uint64_t>(s)));
        // the all-one state is absorbing, so a collapsed rho=0 run can stop
        if (!do_evals && (s & 15) == 15 && eng.trivial_deviation() < kTrivialTol) break;
    }

    ExponentEstimate est;
    est.rho = rho;
    est.lambda = lambda;
    if (eng.trivial_deviation() < kTrivialTol) {
        est.trivial_collapsed = true;
    } else if (do_evals) {
        est.value = mean_of(evals);
        est.std_error = batch_means_se(evals);
        // one more full update; a stationary functional should land within the
        // per-sweep scatter of the values already collected
        double sd = 0.0;
        for (double x : evals) sd += (x - est.value) * (x - est.value);
        sd = std::sqrt(sd / std::max<std::size_t>(evals.size() - 1, 1));
        eng.sweep_once(static_cast<uint64_t>(cfg.sweeps));
        const double again = eng.functional(static_cast<uint64_t>(cfg.sweeps));
        est.stationarity_residual = std::abs(again - est.value) / std::max(sd, 1e-15);
    }
    return {est, MessagePopulation(MessageKind::variable_to_check, std::move(eng.pi)),
            MessagePopulation(MessageKind::check_to_variable, std::move(eng.pihat))};
}

ExponentEstimate rs_population_exponent(const LdpcEnsemble& ens, const DiscreteChannel& ch,
                                        double rho, double lambda, const PopulationConfig& cfg) {
    return rs_population_run(ens, ch, rho, lambda, cfg).estimate;
}

SlopeEstimate rs_smallrho_slope(const LdpcEnsemble& ens, const DiscreteChannel& ch, double lambda,
                                const PopulationConfig& cfg) {
    const Env e = make_env(ens, ch, 0.0, lambda);
    PopulationRun run = rs_population_run(ens, ch, 0.0, lambda, cfg);
    SlopeEstimate out;
    if (run.estimate.trivial_collapsed) return out;

    const std::vector<double>& pi = run.pi.samples();
    const std::vector<double>& pihat = run.pi_hat.samples();
    const std::size_t m = pi.size();
    const auto t = static_cast<std::size_t>(cfg.eval_tuples);
    CounterRng rng(cfg.seed);
    const auto sb = static_cast<uint64_t>(cfg.sweeps) + 1;

    const SumWithSquares tc = blocked_sum_sq(t, [&](std::size_t i) {
        double prod = 1.0;
        for (int d = 0; d < e.k; ++d)
            prod *= pi[rng.below(m, kTagEval, sb, i, static_cast<uint64_t>(d))];
        return safe_log(0.5 * (1.0 + prod));
    });
    const SumWithSquares tv = blocked_sum_sq(t, [&](std::size_t i) {
        double pc = 1.0, pd = 1.0;
        for (int d = 0; d < e.j; ++d) {
            const double uh = pihat[rng.below(m, kTagEval, sb + 1, i, static_cast<uint64_t>(d))];
            pc *= 0.5 * (1.0 + uh);
            pd *= 0.5 * (1.0 - uh);
        }
        double acc = 0.0;
        for (int y = 0; y < e.Y; ++y)
            acc += e.p0[y] * safe_log(e.p0l[y] * pc + e.p1l[y] * pd);
        return acc;
    });
    const SumWithSquares te = blocked_sum_sq(t, [&](std::size_t i) {
        const double u = pi[rng.below(m, kTagEval, sb + 2, i, 0)];
        const double uh = pihat[rng.below(m, kTagEval, sb + 2, i, 1)];
        return safe_log(0.5 * (1.0 + u * uh));
    });

    const double n = static_cast<double>(t);
    const auto var = [n](const SumWithSquares& s) {
        const double v = (s.sum_sq - s.sum * s.sum / n) / (n - 1.0);
        return std::max(v, 0.0);
    };
    const double jk = static_cast<double>(e.j) / e.k;
    out.slope = -(jk * tc.sum / n + tv.sum / n - e.lam * e.h0 - e.j * te.sum / n);
    out.std_error = std::sqrt((jk * jk * var(tc) + var(tv) + e.j * e.j * var(te)) / n);
    out.has_fixed_point = true;
    out.u = run.pi.mean();
    out.uh = run.pi_hat.mean();
    return out;
}

}  // namespace errexp
