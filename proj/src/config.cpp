#include "errexp/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "errexp/errors.hpp"

namespace errexp {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
    throw DomainError("config line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& v, int line) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) fail(line, "trailing characters in number '" + v + "'");
        return x;
    } catch (const std::invalid_argument&) {
        fail(line, "expected a number, got '" + v + "'");
    } catch (const std::out_of_range&) {
        fail(line, "number out of range: '" + v + "'");
    }
}

long parse_long(const std::string& v, int line) {
    const double x = parse_double(v, line);
    const long i = static_cast<long>(x);
    if (static_cast<double>(i) != x) fail(line, "expected an integer, got '" + v + "'");
    return i;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig rc;
    std::istringstream in(text);
    std::string raw, section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(line, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section != "population" && section != "optimizer" && section != "output")
                fail(line, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected key = value");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (section.empty()) fail(line, "key '" + key + "' outside any section");
        if (val.empty()) fail(line, "empty value for '" + key + "'");

        if (section == "population") {
            auto& p = rc.population;
            if (key == "size")
                p.population_size = static_cast<int>(parse_long(val, line));
            else if (key == "sweeps")
                p.sweeps = static_cast<int>(parse_long(val, line));
            else if (key == "burn_in")
                p.burn_in = static_cast<int>(parse_long(val, line));
            else if (key == "candidate_multiplier")
                p.candidate_multiplier = static_cast<int>(parse_long(val, line));
            else if (key == "seed")
                p.seed = static_cast<uint64_t>(parse_long(val, line));
            else if (key == "eval_tuples")
                p.eval_tuples = static_cast<int>(parse_long(val, line));
            else
                fail(line, "unknown key '" + key + "' in [population]");
        } else if (section == "optimizer") {
            auto& o = rc.optimizer;
            if (key == "rho_min")
                o.rho_min = parse_double(val, line);
            else if (key == "rho_max")
                o.rho_max = parse_double(val, line);
            else if (key == "lambda_min")
                o.lambda_min = parse_double(val, line);
            else if (key == "lambda_max")
                o.lambda_max = parse_double(val, line);
            else if (key == "rho_grid")
                o.rho_grid = static_cast<int>(parse_long(val, line));
            else if (key == "lambda_grid")
                o.lambda_grid = static_cast<int>(parse_long(val, line));
            else if (key == "refine_iters")
                o.refine_iters = static_cast<int>(parse_long(val, line));
            else if (key == "threshold_tol")
                o.threshold_tol = parse_double(val, line);
            else if (key == "bracket_lo")
                o.bracket_lo = parse_double(val, line);
            else if (key == "slope_tuples")
                o.slope_tuples = parse_long(val, line);
            else if (key == "max_escalations")
                o.max_escalations = static_cast<int>(parse_long(val, line));
            else if (key == "slope_population")
                o.slope_population = static_cast<int>(parse_long(val, line));
            else if (key == "slope_sweeps")
                o.slope_sweeps = static_cast<int>(parse_long(val, line));
            else
                fail(line, "unknown key '" + key + "' in [optimizer]");
        } else {
            auto& u = rc.output;
            if (key == "csv")
                u.csv = val;
            else if (key == "json")
                u.json = val;
            else if (key == "precision")
                u.precision = static_cast<int>(parse_long(val, line));
            else
                fail(line, "unknown key '" + key + "' in [output]");
        }
    }

    const auto& p = rc.population;
    if (p.population_size < 2) throw DomainError("population size must be at least 2");
    if (p.sweeps < 1) throw DomainError("sweeps must be positive");
    if (p.burn_in < 0 || p.burn_in >= p.sweeps)
        throw DomainError("burn_in must be smaller than sweeps");
    if (p.candidate_multiplier < 1) throw DomainError("candidate_multiplier must be at least 1");
    if (p.eval_tuples < 2) throw DomainError("eval_tuples must be at least 2");
    const auto& o = rc.optimizer;
    if (!(o.rho_max > o.rho_min) || !(o.lambda_max > o.lambda_min))
        throw DomainError("optimizer box is empty");
    if (o.rho_min < 0.0 || o.lambda_min < 0.0) throw DomainError("optimizer box must be in the first quadrant");
    if (o.rho_grid < 2 || o.lambda_grid < 2) throw DomainError("grids need at least 2 points");
    if (!(o.threshold_tol > 0.0)) throw DomainError("threshold_tol must be positive");
    if (!(o.bracket_lo > 0.0) || o.bracket_lo >= 0.5)
        throw DomainError("bracket_lo must lie in (0, 0.5)");
    if (o.slope_tuples < 1000) throw DomainError("slope_tuples must be at least 1000");
    if (o.max_escalations < 0) throw DomainError("max_escalations must be non-negative");
    if (o.slope_population < 2 || o.slope_sweeps < 2)
        throw DomainError("slope population and sweeps must be at least 2");
    if (rc.output.precision < 1 || rc.output.precision > 17)
        throw DomainError("precision must lie in [1, 17]");
    return rc;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ResourceError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

OptimizeOptions to_optimize_options(const RunConfig& rc) {
    OptimizeOptions o;
    o.rho_min = rc.optimizer.rho_min;
    o.rho_max = rc.optimizer.rho_max;
    o.lambda_min = rc.optimizer.lambda_min;
    o.lambda_max = rc.optimizer.lambda_max;
    o.rho_grid = rc.optimizer.rho_grid;
    o.lambda_grid = rc.optimizer.lambda_grid;
    o.refine_iters = rc.optimizer.refine_iters;
    o.pop = rc.population;
    return o;
}

ThresholdOptions to_threshold_options(const RunConfig& rc) {
    ThresholdOptions t;
    t.tol = rc.optimizer.threshold_tol;
    t.bracket_lo = rc.optimizer.bracket_lo;
    t.lambda_grid = rc.optimizer.lambda_grid;
    t.slope_tuples = rc.optimizer.slope_tuples;
    t.max_escalations = rc.optimizer.max_escalations;
    t.pop = rc.population;
    t.pop.population_size = rc.optimizer.slope_population;
    t.pop.sweeps = rc.optimizer.slope_sweeps;
    t.pop.burn_in = rc.optimizer.slope_sweeps / 2;
    return t;
}

}  // namespace errexp
