#include "errexp/threshold.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

#include "errexp/errors.hpp"

namespace errexp {
namespace {

constexpr double kGold = 0.6180339887498949;

double golden_max(const std::function<double(double)>& f, double a, double b, int iters) {
    double x1 = b - kGold * (b - a), x2 = a + kGold * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGold * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGold * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

double h2_bits(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -(p * std::log2(p) + (1.0 - p) * std::log2(1.0 - p));
}

// min over tilts of sum_y P(y|0)^(1-t) P(y|1)^t, with its minimizer
struct TiltedOverlap {
    double value;
    double lambda;
};

TiltedOverlap min_tilted_overlap(const DiscreteChannel& ch) {
    const BinaryView bv = binary_view(ch);
    const auto g = [&](double t) {
        double s = 0.0;
        for (std::size_t y = 0; y < bv.p0.size(); ++y)
            s += std::pow(bv.p0[y], 1.0 - t) * std::pow(bv.p1[y], t);
        return -s;  // golden_max minimizes the overlap
    };
    const double t = golden_max(g, 0.0, 1.0, 80);
    return {-g(t), t};
}

// ----- per-probe sign decisions -----

TracePoint probe_jensen1(const LdpcEnsemble& ens, double p) {
    const DiscreteChannel ch = make_bsc(p);
    const SlopeEstimate sl = jensen_smallrho_slope(ens, ch, 1.0);
    if (!sl.has_fixed_point) return {p, 0.0, 0.0, 1.0, "no_nontrivial_saddle", true};
    return {p, sl.slope, 0.0, 1.0, "slope_criterion", sl.slope > 0.0};
}

TracePoint probe_jensen2(const LdpcEnsemble& ens, double p, const ThresholdOptions& opts) {
    const DiscreteChannel ch = make_bsc(p);
    const double lam_lo = 0.0, lam_hi = 2.0;
    bool any = false;
    double best = -std::numeric_limits<double>::infinity(), best_lam = 1.0;
    const auto consider = [&](double lam) {
        const SlopeEstimate sl = jensen_smallrho_slope(ens, ch, lam);
        if (!sl.has_fixed_point) return;
        any = true;
        if (sl.slope > best) {
            best = sl.slope;
            best_lam = lam;
        }
    };
    const int n = std::max(opts.lambda_grid, 3);
    for (int i = 0; i < n; ++i) consider(lam_lo + (lam_hi - lam_lo) * i / (n - 1));
    if (!any) return {p, 0.0, 0.0, 0.0, "no_nontrivial_saddle", true};
    double span = (lam_hi - lam_lo) / (n - 1);
    for (int round = 0; round < 3; ++round) {
        const double a = std::max(lam_lo, best_lam - span), b = std::min(lam_hi, best_lam + span);
        for (int i = 0; i < 9; ++i) consider(a + (b - a) * i / 8.0);
        span *= 0.25;
    }
    return {p, best, 0.0, best_lam, "slope_criterion", best > 0.0};
}

TracePoint probe_replica(const LdpcEnsemble& ens, double p, const ThresholdOptions& opts) {
    const DiscreteChannel ch = make_bsc(p);
    PopulationConfig cfg = opts.pop;
    cfg.eval_tuples = static_cast<int>(opts.slope_tuples);
    int escalations = 0;
    for (;;) {
        const SlopeEstimate sl = rs_smallrho_slope(ens, ch, 1.0, cfg);
        if (!sl.has_fixed_point) return {p, 0.0, 0.0, 1.0, "no_nontrivial_saddle", true};
        const bool resolved = std::abs(sl.slope) >= 3.0 * sl.std_error;
        if (resolved || escalations >= opts.max_escalations) {
            std::string tag = "slope_criterion";
            if (escalations > 0) tag += "+escalated";
            if (!resolved) tag += "+low_confidence";
            return {p, sl.slope, sl.std_error, 1.0, tag, sl.slope > 0.0};
        }
        ++escalations;
        cfg.population_size *= 2;
        cfg.eval_tuples *= 2;
    }
}

TracePoint probe_stability(const LdpcEnsemble& ens, double p) {
    const TiltedOverlap t = min_tilted_overlap(make_bsc(p));
    const double margin = 1.0 - (ens.k - 1) * t.value;
    return {p, margin, 0.0, t.lambda, "stability_boundary", margin > 0.0};
}

TracePoint probe(const LdpcEnsemble& ens, ThresholdMethod method, double p,
                 const ThresholdOptions& opts) {
    // For double-edge symbols the free-tilt saddle appears continuously with a
    // vanishing slope, so the sign is decided by the linear stability of the
    // trivial state instead of by a slope that sits at the noise floor.
    if (ens.j == 2 && method != ThresholdMethod::jensen1) return probe_stability(ens, p);
    switch (method) {
        case ThresholdMethod::jensen1:
            return probe_jensen1(ens, p);
        case ThresholdMethod::jensen2:
            return probe_jensen2(ens, p, opts);
        case ThresholdMethod::replica:
            return probe_replica(ens, p, opts);
    }
    throw DomainError("unknown threshold method");
}

// ----- Nelder-Mead refinement over the (rho, lambda) box -----

struct Vertex {
    double r, l, f;
};

void nelder_mead_max(const std::function<double(double, double)>& f, Vertex& best, double dr,
                     double dl, double rlo, double rhi, double llo, double lhi, int iters) {
    const auto clamp2 = [&](double& r, double& l) {
        r = std::clamp(r, rlo, rhi);
        l = std::clamp(l, llo, lhi);
    };
    std::array<Vertex, 3> s;
    s[0] = best;
    s[1] = {std::clamp(best.r + dr, rlo, rhi), best.l, 0.0};
    s[2] = {best.r, std::clamp(best.l + dl, llo, lhi), 0.0};
    s[1].f = f(s[1].r, s[1].l);
    s[2].f = f(s[2].r, s[2].l);
    for (int it = 0; it < iters; ++it) {
        std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f > b.f; });
        const double cr = 0.5 * (s[0].r + s[1].r), cl = 0.5 * (s[0].l + s[1].l);
        double rr = cr + (cr - s[2].r), rl = cl + (cl - s[2].l);
        clamp2(rr, rl);
        const double fr = f(rr, rl);
        if (fr > s[0].f) {
            double er = cr + 2.0 * (cr - s[2].r), el = cl + 2.0 * (cl - s[2].l);
            clamp2(er, el);
            const double fe = f(er, el);
            s[2] = fe > fr ? Vertex{er, el, fe} : Vertex{rr, rl, fr};
        } else if (fr > s[1].f) {
            s[2] = {rr, rl, fr};
        } else {
            double kr = cr + 0.5 * (s[2].r - cr), kl = cl + 0.5 * (s[2].l - cl);
            clamp2(kr, kl);
            const double fk = f(kr, kl);
            if (fk > s[2].f) {
                s[2] = {kr, kl, fk};
            } else {  // shrink toward the best vertex
                for (int i = 1; i < 3; ++i) {
                    s[i].r = s[0].r + 0.5 * (s[i].r - s[0].r);
                    s[i].l = s[0].l + 0.5 * (s[i].l - s[0].l);
                    s[i].f = f(s[i].r, s[i].l);
                }
            }
        }
    }
    for (const auto& v : s)
        if (v.f > best.f) best = v;
}

}  // namespace

std::string method_name(ThresholdMethod m) {
    switch (m) {
        case ThresholdMethod::jensen1:
            return "jensen1";
        case ThresholdMethod::jensen2:
            return "jensen2";
        case ThresholdMethod::replica:
            return "replica";
    }
    return "?";
}

ThresholdMethod parse_method(const std::string& name) {
    if (name == "jensen1") return ThresholdMethod::jensen1;
    if (name == "jensen2") return ThresholdMethod::jensen2;
    if (name == "replica") return ThresholdMethod::replica;
    throw DomainError("unknown method '" + name + "' (expected jensen1, jensen2 or replica)");
}

double shannon_p(double rate_bits) {
    if (rate_bits <= 0.0 || rate_bits >= 1.0) throw DomainError("rate must lie in (0, 1)");
    const double target = 1.0 - rate_bits;
    double lo = 1e-12, hi = 0.5;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (h2_bits(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double trivial_stability_margin(const LdpcEnsemble& ens, const DiscreteChannel& ch) {
    return 1.0 - (ens.k - 1) * min_tilted_overlap(ch).value;
}

ThresholdResult error_threshold(const LdpcEnsemble& ens, ThresholdMethod method,
                                const ThresholdOptions& opts) {
    if (!(opts.tol > 0.0)) throw DomainError("threshold tolerance must be positive");
    if (!(opts.bracket_lo > 0.0) || opts.bracket_lo >= 0.5)
        throw DomainError("bracket_lo must lie in (0, 0.5)");
    if (!opts.pop.validate()) throw DomainError("invalid population configuration");
    ThresholdResult res;
    res.method = method;
    double lo = opts.bracket_lo;
    double hi = shannon_p(ens.rate_bits());

    TracePoint at_lo = probe(ens, method, lo, opts);
    res.trace.push_back(at_lo);
    if (!at_lo.positive) {
        res.p_c = 0.0;
        res.bracket_lo = res.bracket_hi = 0.0;
        res.note = "non_bracketing";
        return res;
    }
    TracePoint at_hi = probe(ens, method, hi, opts);
    res.trace.push_back(at_hi);
    if (at_hi.positive) {
        res.p_c = hi;
        res.bracket_lo = res.bracket_hi = hi;
        res.note = "non_bracketing_hi";
        return res;
    }
    while (hi - lo > opts.tol) {
        const double mid = 0.5 * (lo + hi);
        const TracePoint tp = probe(ens, method, mid, opts);
        res.trace.push_back(tp);
        (tp.positive ? lo : hi) = mid;
    }
    res.p_c = 0.5 * (lo + hi);
    res.bracket_lo = lo;
    res.bracket_hi = hi;
    return res;
}

namespace {

// Grid stretched quadratically toward rho_min: positive-exponent pockets sit
// at small rho, so uniform spacing over a wide box walks straight past them.
double stretched(double lo, double hi, int i, int n) {
    const double t = static_cast<double>(i) / (n - 1);
    return lo + (hi - lo) * t * t;
}

}  // namespace

OptimizeResult maximize_exponent(const LdpcEnsemble& ens, const DiscreteChannel& ch,
                                 ThresholdMethod method, const OptimizeOptions& opts) {
    if (opts.rho_grid < 2 || opts.lambda_grid < 2) throw DomainError("grid needs at least 2 points");
    OptimizeResult out;
    if (method == ThresholdMethod::jensen1) {
        const auto f = [&](double rho) {
            return jensen_exponent(ens, ch, rho, 1.0 / (1.0 + rho)).value;
        };
        int besti = 0;
        double bestf = -std::numeric_limits<double>::infinity();
        std::vector<double> rs(opts.rho_grid);
        for (int i = 0; i < opts.rho_grid; ++i) {
            rs[i] = stretched(opts.rho_min, opts.rho_max, i, opts.rho_grid);
            const double v = f(rs[i]);
            if (v > bestf) {
                bestf = v;
                besti = i;
            }
        }
        const double a = rs[std::max(besti - 1, 0)];
        const double b = rs[std::min(besti + 1, opts.rho_grid - 1)];
        const double rho = golden_max(f, a, b, opts.refine_iters);
        const double lam = 1.0 / (1.0 + rho);
        ExponentEstimate at = jensen_exponent(ens, ch, rho, lam);
        if (bestf > at.value) at = jensen_exponent(ens, ch, rs[besti], 1.0 / (1.0 + rs[besti]));
        out = {at.value, at.rho, at.lambda, at};
        return out;
    }

    const bool population = method == ThresholdMethod::replica;
    const auto eval = [&](double rho, double lam) -> ExponentEstimate {
        return population ? rs_population_exponent(ens, ch, rho, lam, opts.pop)
                          : jensen_exponent(ens, ch, rho, lam);
    };
    Vertex best{opts.rho_min, opts.lambda_min, -std::numeric_limits<double>::infinity()};
    for (int i = 0; i < opts.rho_grid; ++i) {
        const double rho = stretched(opts.rho_min, opts.rho_max, i, opts.rho_grid);
        for (int l = 0; l < opts.lambda_grid; ++l) {
            const double lam =
                opts.lambda_min + (opts.lambda_max - opts.lambda_min) * l / (opts.lambda_grid - 1);
            const double v = eval(rho, lam).value;
            if (v > best.f) best = {rho, lam, v};
        }
    }
    const double dr = 0.5 * (opts.rho_max - opts.rho_min) / (opts.rho_grid - 1);
    const double dl = 0.5 * (opts.lambda_max - opts.lambda_min) / (opts.lambda_grid - 1);
    nelder_mead_max([&](double r, double l) { return eval(r, l).value; }, best, dr, dl,
                    opts.rho_min, opts.rho_max, opts.lambda_min, opts.lambda_max,
                    opts.refine_iters);
    out.value = best.f;
    out.rho = best.r;
    out.lambda = best.l;
    out.at = eval(best.r, best.l);
    return out;
}

std::vector<TableRow> reproduce_table(const ThresholdOptions& opts) {
    static constexpr int kk[5] = {6, 5, 6, 3, 4};
    static constexpr int jj[5] = {3, 3, 4, 2, 2};
    std::vector<TableRow> rows;
    rows.reserve(5);
    for (int i = 0; i < 5; ++i) {
        const LdpcEnsemble ens = make_ensemble(kk[i], jj[i]);
        TableRow row;
        row.k = ens.k;
        row.j = ens.j;
        row.rate_bits = ens.rate_bits();
        row.jensen1 = error_threshold(ens, ThresholdMethod::jensen1, opts).p_c;
        row.jensen2 = error_threshold(ens, ThresholdMethod::jensen2, opts).p_c;
        row.replica = error_threshold(ens, ThresholdMethod::replica, opts).p_c;
        row.shannon = shannon_p(row.rate_bits);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace errexp
