// command-line front end for the error-exponent library
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "errexp/channel.hpp"
#include "errexp/config.hpp"
#include "errexp/errors.hpp"
#include "errexp/gallager.hpp"
#include "errexp/ldpc.hpp"
#include "errexp/oracle.hpp"
#include "errexp/parallel.hpp"
#include "errexp/replica_random.hpp"
#include "errexp/saddle.hpp"
#include "errexp/threshold.hpp"

using nlohmann::json;
using namespace errexp;

namespace {

constexpr uint64_t kDefaultSeed = 20230117;

std::string iso_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct Common {
    std::string channel_spec = "bsc:0.1";
    std::string config_path;
    std::string out_path;   // CSV / text output, empty = stdout
    std::string json_path;  // run manifest
    uint64_t seed = kDefaultSeed;
    int threads = 0;
    bool serial = false;
};

void add_common(CLI::App* cmd, Common& c, bool with_channel = true) {
    if (with_channel)
        cmd->add_option("--channel", c.channel_spec,
                        "channel spec: bsc:<p> or file:<path> (default bsc:0.1)");
    cmd->add_option("--config", c.config_path, "key=value configuration file");
    cmd->add_option("--out", c.out_path, "write tabular output to this file");
    cmd->add_option("--json", c.json_path, "write a run manifest to this file");
    cmd->add_option("--seed", c.seed, "random seed (fixed default for reproducible runs)");
    cmd->add_option("--threads", c.threads, "worker threads (0 = library default)");
    cmd->add_flag("--serial", c.serial, "use the serial reference kernels");
}

DiscreteChannel resolve_channel(const std::string& spec) {
    if (spec.rfind("bsc:", 0) == 0) return make_bsc(std::stod(spec.substr(4)));
    if (spec.rfind("file:", 0) == 0) return load_channel(spec.substr(5));
    return parse_channel_spec(spec);
}

RunConfig resolve_config(const Common& c) {
    RunConfig rc = c.config_path.empty() ? RunConfig{} : load_config(c.config_path);
    rc.population.seed = c.seed;
    return rc;
}

void apply_threading(const Common& c) {
    set_parallel_enabled(!c.serial);
    set_worker_count(c.threads);
}

class Sink {
  public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw ResourceError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

void write_manifest(const Common& c, const std::string& command, const json& params,
                    const json& results) {
    if (c.json_path.empty()) return;
    json m;
    m["schema"] = "errexp-run/1";
    m["command"] = command;
    m["parameters"] = params;
    m["seed"] = c.seed;
    m["threads"] = c.threads;
    m["serial"] = c.serial;
    m["results"] = results;
    m["generated_at"] = iso_now();
    std::ofstream f(c.json_path);
    if (!f) throw ResourceError("cannot open manifest file '" + c.json_path + "'");
    f << m.dump(2) << "\n";
}

// ----- subcommand bodies -----

int run_capacity(const Common& c, double tol) {
    apply_threading(c);
    const DiscreteChannel ch = resolve_channel(c.channel_spec);
    const CapacityResult cap = capacity(ch, tol);
    Sink sink(c.out_path);
    auto& os = sink.out();
    os << "capacity_bits," << std::setprecision(12) << cap.bits << "\n";
    os << "iterations," << cap.iterations << "\n";
    for (int x = 0; x < cap.input.size(); ++x)
        os << "q" << x << "," << cap.input.q(x) << "\n";
    json res{{"capacity_bits", cap.bits}, {"iterations", cap.iterations},
             {"input", cap.input.probabilities()}};
    write_manifest(c, "capacity", {{"channel", c.channel_spec}, {"tol", tol}}, res);
    return 0;
}

int run_exponent_curve(const Common& c, double rmin, double rmax, int steps) {
    apply_threading(c);
    const DiscreteChannel ch = resolve_channel(c.channel_spec);
    const auto [rc, rb] = critical_rates(ch);
    Sink sink(c.out_path);
    auto& os = sink.out();
    os << std::setprecision(12);
    os << "# capacity_bits=" << rc << " rb_bits=" << rb << "\n";
    os << "rate_bits,exponent_nats,rho_star,at_boundary\n";
    json rows = json::array();
    for (int i = 0; i < steps; ++i) {
        const double r = rmin + (rmax - rmin) * i / std::max(steps - 1, 1);
        const ExponentResult e = random_coding_exponent(r, ch);
        os << r << "," << e.value << "," << e.rho_star << "," << (e.at_boundary ? 1 : 0) << "\n";
        rows.push_back({{"rate", r}, {"value", e.value}, {"rho_star", e.rho_star}});
    }
    write_manifest(c, "exponent-curve",
                   {{"channel", c.channel_spec}, {"rate_min", rmin}, {"rate_max", rmax}},
                   {{"capacity_bits", rc}, {"rb_bits", rb}, {"rows", rows}});
    return 0;
}

int run_replica_curve(const Common& c, double rmin, double rmax, int steps,
                      std::optional<double> rho, std::optional<double> lambda, double rate) {
    apply_threading(c);
    const DiscreteChannel ch = resolve_channel(c.channel_spec);
    Sink sink(c.out_path);
    auto& os = sink.out();
    os << std::setprecision(12);
    if (rho && lambda) {
        const InputDistribution q = optimize_e0_input(ch, *rho);
        const double v1 = e_rs1(ch, q, *rho, *lambda, rate);
        const double v2 = e_rs2(ch, q, *rho, *lambda, rate);
        const BranchSelection sel = select_branch_at_unity(ch, q, *lambda, rate);
        os << "e_rs1_nats," << v1 << "\n";
        os << "e_rs2_nats," << v2 << "\n";
        os << "branch_at_unity," << (sel.branch == RsBranch::RS1 ? "rs1" : "rs2") << "\n";
        os << "derivative_gap," << sel.derivative_gap << "\n";
        write_manifest(c, "replica-curve",
                       {{"channel", c.channel_spec}, {"rho", *rho}, {"lambda", *lambda},
                        {"rate", rate}},
                       {{"e_rs1", v1}, {"e_rs2", v2}, {"derivative_gap", sel.derivative_gap}});
        return 0;
    }
    os << "rate_bits,exponent_nats,regime,rho_star\n";
    json rows = json::array();
    for (int i = 0; i < steps; ++i) {
        const double r = rmin + (rmax - rmin) * i / std::max(steps - 1, 1);
        const ReplicaExponent e = replica_exponent(r, ch);
        const std::string regime = e.regime == RsBranch::RS1 ? "rs1" : "rs2";
        os << r << "," << e.value << "," << regime << "," << e.rho_star << "\n";
        rows.push_back({{"rate", r}, {"value", e.value}, {"regime", regime}});
    }
    write_manifest(c, "replica-curve",
                   {{"channel", c.channel_spec}, {"rate_min", rmin}, {"rate_max", rmax}},
                   {{"rows", rows}});
    return 0;
}

int run_ldpc_exponent(const Common& c, int k, int j, double rho, std::optional<double> lambda,
                      const std::string& method, bool histogram) {
    apply_threading(c);
    const RunConfig rc = resolve_config(c);
    const DiscreteChannel ch = resolve_channel(c.channel_spec);
    const LdpcEnsemble ens = make_ensemble(k, j);
    const double lam = lambda ? *lambda : 1.0 / (1.0 + rho);
    Sink sink(c.out_path);
    auto& os = sink.out();
    os << std::setprecision(12);
    ExponentEstimate est;
    std::string hist_pi, hist_pihat;
    if (method == "jensen") {
        est = jensen_exponent(ens, ch, rho, lam);
    } else if (method == "population") {
        const PopulationRun run = rs_population_run(ens, ch, rho, lam, rc.population);
        est = run.estimate;
        if (histogram) {
            hist_pi = run.pi.histogram();
            hist_pihat = run.pi_hat.histogram();
        }
    } else {
        throw DomainError("method must be jensen or population");
    }
    os << "value_nats," << est.value << "\n";
    os << "std_error," << est.std_error << "\n";
    os << "stationarity_residual," << est.stationarity_residual << "\n";
    os << "trivial_collapsed," << (est.trivial_collapsed ? 1 : 0) << "\n";
    if (!hist_pi.empty())
        os << "# variable-to-check messages\n" << hist_pi
           << "# check-to-variable messages\n" << hist_pihat;
    write_manifest(c, "ldpc-exponent",
                   {{"channel", c.channel_spec}, {"k", k}, {"j", j}, {"rho", rho},
                    {"lambda", lam}, {"method", method}},
                   {{"value", est.value}, {"std_error", est.std_error},
                    {"stationarity_residual", est.stationarity_residual},
                    {"trivial_collapsed", est.trivial_collapsed}});
    return 0;
}

int run_ldpc_threshold(const Common& c, int k, int j, const std::string& method) {
    apply_threading(c);
    const RunConfig rc = resolve_config(c);
    const LdpcEnsemble ens = make_ensemble(k, j);
    const ThresholdResult res = error_threshold(ens, parse_method(method), to_threshold_options(rc));
    Sink sink(c.out_path);
    auto& os = sink.out();
    os << std::setprecision(10);
    os << "p_c," << res.p_c << "\n";
    os << "bracket," << res.bracket_lo << "," << res.bracket_hi << "\n";
    if (!res.note.empty()) os << "note," << res.note << "\n";
    os << "p,statistic,std_error,lambda,positive,tag\n";
    json trace = json::array();
    for (const auto& tp : res.trace) {
        os << tp.p << "," << tp.statistic << "," << tp.std_error << "," << tp.lambda << ","
           << (tp.positive ? 1 : 0) << "," << tp.tag << "\n";
        trace.push_back({{"p", tp.p}, {"statistic", tp.statistic}, {"std_error", tp.std_error},
                         {"lambda", tp.lambda}, {"positive", tp.positive}, {"tag", tp.tag}});
    }
    write_manifest(c, "ldpc-threshold", {{"k", k}, {"j", j}, {"method", method}},
                   {{"p_c", res.p_c}, {"bracket", {res.bracket_lo, res.bracket_hi}},
                    {"note", res.note}, {"trace", trace}});
    return 0;
}

int run_table(const Common& c) {
    apply_threading(c);
    const RunConfig rc = resolve_config(c);
    const auto rows = reproduce_table(to_threshold_options(rc));
    Sink sink(c.out_path);
    auto& os = sink.out();
    os << "k,j,rate_bits,jensen1,jensen2,replica,shannon\n" << std::setprecision(6);
    json jr = json::array();
    for (const auto& r : rows) {
        os << r.k << "," << r.j << "," << r.rate_bits << "," << r.jensen1 << "," << r.jensen2
           << "," << r.replica << "," << r.shannon << "\n";
        jr.push_back({{"k", r.k}, {"j", r.j}, {"rate_bits", r.rate_bits}, {"jensen1", r.jensen1},
                      {"jensen2", r.jensen2}, {"replica", r.replica}, {"shannon", r.shannon}});
    }
    write_manifest(c, "table", json::object(), {{"rows", jr}});
    return 0;
}

int run_verify(const Common& c) {
    apply_threading(c);
    int failures = 0;
    const auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << (detail.empty() ? "" : "  (" + detail + ")")
                  << "\n";
        if (!ok) ++failures;
    };
    const auto fmt2 = [](double a, double b) {
        std::ostringstream d;
        d << std::setprecision(10) << a << " vs " << b;
        return d.str();
    };

    const DiscreteChannel bsc = make_bsc(0.1);
    const InputDistribution unif = InputDistribution::uniform(2);

    {  // capacity of the symmetric binary channel has a closed form
        const double cap = capacity(bsc).bits;
        const double want = 1.0 + 0.1 * std::log2(0.1) + 0.9 * std::log2(0.9);
        report("capacity-bsc", std::abs(cap - want) < 1e-9, fmt2(cap, want));
    }
    {  // occupation-pattern weights resolve the full replica sum
        double total = 0.0;
        for (const auto& occ : enumerate_occupations(3)) total += partition_weight(occ, 4, 3);
        const double want = std::pow(std::pow(2.0, 4) - 1.0, 3);
        report("partition-weights", total == want, fmt2(total, want));
    }
    {  // first branch at the matched tilt reproduces the classical bound
        const double rho = 0.7, rate = 0.3;
        const double a = e_rs1(bsc, unif, rho, 1.0 / (1.0 + rho), rate);
        const double b = gallager_e0(bsc, unif, rho) - rho * rate * std::log(2.0);
        report("branch-vs-classical", std::abs(a - b) < 1e-12, fmt2(a, b));
    }
    {  // reweighted population at rho = 2 agrees with the two-moment closure
        const LdpcEnsemble ens = make_ensemble(6, 3);
        const DiscreteChannel ch = make_bsc(0.07);
        PopulationConfig cfg;
        cfg.population_size = 20000;
        cfg.sweeps = 160;
        cfg.burn_in = 80;
        cfg.eval_tuples = 200000;
        cfg.seed = c.seed;
        const ExponentEstimate est = rs_population_exponent(ens, ch, 2.0, 1.0 / 3.0, cfg);
        const MomentClosureResult mc = moment_closure_rho2(ens, ch, 1.0 / 3.0);
        const double gap = std::abs(est.value - mc.exponent);
        report("population-vs-closure", gap < 4.0 * est.std_error + 1e-6,
               fmt2(est.value, mc.exponent));
    }
    {  // identical seeds give bit-identical runs, serial or threaded
        const LdpcEnsemble ens = make_ensemble(6, 3);
        const DiscreteChannel ch = make_bsc(0.08);
        PopulationConfig cfg;
        cfg.population_size = 5000;
        cfg.sweeps = 60;
        cfg.burn_in = 30;
        cfg.eval_tuples = 20000;
        cfg.seed = c.seed;
        set_parallel_enabled(false);
        const double a = rs_population_exponent(ens, ch, 1.0, 0.5, cfg).value;
        const double b = rs_population_exponent(ens, ch, 1.0, 0.5, cfg).value;
        set_parallel_enabled(true);
        set_worker_count(2);
        const double d = rs_population_exponent(ens, ch, 1.0, 0.5, cfg).value;
        apply_threading(c);
        report("determinism-repeat", a == b, fmt2(a, b));
        report("determinism-threads", a == d, fmt2(a, d));
    }
    std::cout << (failures == 0 ? "verify: all checks passed\n"
                                : "verify: " + std::to_string(failures) + " check(s) failed\n");
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"upper bounds on the decoding-error probability of channel codes"};
    app.require_subcommand(1);

    Common c_cap, c_exp, c_rep, c_lex, c_lth, c_tab, c_ver;
    double cap_tol = 1e-10;
    double exp_rmin = 0.05, exp_rmax = 0.95;
    int exp_steps = 19;
    double rep_rmin = 0.05, rep_rmax = 0.95, rep_rate = 0.5;
    int rep_steps = 19;
    std::optional<double> rep_rho, rep_lambda;
    int lex_k = 6, lex_j = 3;
    double lex_rho = 1.0;
    std::optional<double> lex_lambda;
    std::string lex_method = "population";
    bool lex_hist = false;
    int lth_k = 6, lth_j = 3;
    std::string lth_method = "jensen1";

    auto* cap = app.add_subcommand("capacity", "channel capacity by alternating maximization");
    add_common(cap, c_cap);
    cap->add_option("--tol", cap_tol, "capacity bracket tolerance in bits");

    auto* exp = app.add_subcommand("exponent-curve", "random-coding exponent vs rate");
    add_common(exp, c_exp);
    exp->add_option("--rate-min", exp_rmin);
    exp->add_option("--rate-max", exp_rmax);
    exp->add_option("--steps", exp_steps);

    auto* rep = app.add_subcommand("replica-curve", "two-branch exponent vs rate or point values");
    add_common(rep, c_rep);
    rep->add_option("--rate-min", rep_rmin);
    rep->add_option("--rate-max", rep_rmax);
    rep->add_option("--steps", rep_steps);
    rep->add_option("--rate", rep_rate, "rate for point evaluation");
    rep->add_option("--rho", rep_rho, "point evaluation: replica count");
    rep->add_option("--lambda", rep_lambda, "point evaluation: tilt");

    auto* lex = app.add_subcommand("ldpc-exponent", "code-ensemble exponent at one (rho, lambda)");
    add_common(lex, c_lex);
    lex->add_option("--k", lex_k, "parity-check size");
    lex->add_option("--j", lex_j, "checks per symbol");
    lex->add_option("--rho", lex_rho);
    lex->add_option("--lambda", lex_lambda, "tilt (default 1/(1+rho))");
    lex->add_option("--method", lex_method, "jensen or population");
    lex->add_flag("--histogram", lex_hist, "dump message histograms (population method)");

    auto* lth = app.add_subcommand("ldpc-threshold", "largest flip rate with positive exponent");
    add_common(lth, c_lth, false);
    lth->add_option("--k", lth_k, "parity-check size");
    lth->add_option("--j", lth_j, "checks per symbol");
    lth->add_option("--method", lth_method, "jensen1, jensen2 or replica");

    auto* tab = app.add_subcommand("table", "thresholds for the five reference ensembles");
    add_common(tab, c_tab, false);

    auto* ver = app.add_subcommand("verify", "quick internal consistency checks");
    add_common(ver, c_ver, false);

    try {
        app.parse(argc, argv);
        if (cap->parsed()) return run_capacity(c_cap, cap_tol);
        if (exp->parsed()) return run_exponent_curve(c_exp, exp_rmin, exp_rmax, exp_steps);
        if (rep->parsed())
            return run_replica_curve(c_rep, rep_rmin, rep_rmax, rep_steps, rep_rho, rep_lambda,
                                     rep_rate);
        if (lex->parsed())
            return run_ldpc_exponent(c_lex, lex_k, lex_j, lex_rho, lex_lambda, lex_method,
                                     lex_hist);
        if (lth->parsed()) return run_ldpc_threshold(c_lth, lth_k, lth_j, lth_method);
        if (tab->parsed()) return run_table(c_tab);
        if (ver->parsed()) return run_verify(c_ver);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 6;
    }
    return 0;
}
