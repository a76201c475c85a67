// Times the planning phase: full-enumeration serial reference against the
// ordered OpenMP kernel, on corridor snapshots at several densities. Also
// checks that both produce identical decisions.
//
//   bench_plan [ticks_per_density]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "crowd/engine.hpp"
#include "crowd/scenarios.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

bool same(const std::vector<crowd::Decision>& a, const std::vector<crowd::Decision>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].alpha_hat != b[i].alpha_hat || a[i].phi_hat != b[i].phi_hat ||
            !(a[i].target == b[i].target)) {
            return false;
        }
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    const int ticks = argc > 1 ? std::atoi(argv[1]) : 20;
    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::printf("threads=%d ticks=%d\n", threads, ticks);
    std::printf("%8s %7s %12s %12s %8s %s\n", "density", "agents", "serial_ms", "kernel_ms",
                "speedup", "equal");

    bool all_equal = true;
    for (const double density : {0.5, 1.0, 2.0, 3.0, 4.0}) {
        crowd::ScenarioSpec spec = crowd::ScenarioSpec::corridor_defaults();
        spec.target_density = density;
        crowd::World world = crowd::build_corridor(spec, 7);
        // Let the crowd settle so the snapshots are not spawn-uniform.
        for (int k = 0; k < 50; ++k) crowd::step(world);

        double serial_s = 0.0, kernel_s = 0.0;
        bool equal = true;
        for (int k = 0; k < ticks; ++k) {
            const crowd::SpatialIndex index = crowd::build_index(world);
            auto t0 = std::chrono::steady_clock::now();
            const auto ref = crowd::plan_all_serial(world, index);
            auto t1 = std::chrono::steady_clock::now();
            const auto fast = crowd::plan_all(world, index);
            auto t2 = std::chrono::steady_clock::now();
            serial_s += std::chrono::duration<double>(t1 - t0).count();
            kernel_s += std::chrono::duration<double>(t2 - t1).count();
            equal = equal && same(ref, fast);
            crowd::step(world);
        }
        all_equal = all_equal && equal;
        std::printf("%8.2f %7zu %12.3f %12.3f %8.2f %s\n", density, world.agents.size(),
                    1e3 * serial_s / ticks, 1e3 * kernel_s / ticks, serial_s / kernel_s,
                    equal ? "yes" : "NO");
    }
    return all_equal ? 0 : 1;
}
