// Times the population-dynamics kernel serial vs threaded and checks the two
// paths produce bit-identical results.  Usage: bench_population [population]
// [sweeps] [threads]
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "errexp/channel.hpp"
#include "errexp/parallel.hpp"
#include "errexp/saddle.hpp"

using namespace errexp;

namespace {

double timed(const LdpcEnsemble& ens, const DiscreteChannel& ch, const PopulationConfig& cfg,
             double* seconds) {
    const auto t0 = std::chrono::steady_clock::now();
    const ExponentEstimate est = rs_population_exponent(ens, ch, 1.0, 0.5, cfg);
    const auto t1 = std::chrono::steady_clock::now();
    *seconds = std::chrono::duration<double>(t1 - t0).count();
    return est.value;
}

}  // namespace

int main(int argc, char** argv) {
    PopulationConfig cfg;
    cfg.population_size = argc > 1 ? std::atoi(argv[1]) : 200000;
    cfg.sweeps = argc > 2 ? std::atoi(argv[2]) : 60;
    cfg.burn_in = cfg.sweeps / 2;
    cfg.eval_tuples = 200000;
    const int threads = argc > 3 ? std::atoi(argv[3]) : 0;

    const LdpcEnsemble ens = make_ensemble(6, 3);
    const DiscreteChannel ch = make_bsc(0.08);

    double ts = 0.0, tp = 0.0;
    set_parallel_enabled(false);
    const double vs = timed(ens, ch, cfg, &ts);
    set_parallel_enabled(true);
    set_worker_count(threads);
    const double vp = timed(ens, ch, cfg, &tp);

    std::printf("population=%d sweeps=%d workers=%d\n", cfg.population_size, cfg.sweeps,
                worker_count());
    std::printf("serial    %8.3f s   value %.12f\n", ts, vs);
    std::printf("threaded  %8.3f s   value %.12f\n", tp, vp);
    std::printf("speedup   %8.2fx\n", tp > 0.0 ? ts / tp : 0.0);
    if (vs != vp) {
        std::printf("MISMATCH: serial and threaded values differ\n");
        return 1;
    }
    std::printf("values bit-identical\n");
    return 0;
}
