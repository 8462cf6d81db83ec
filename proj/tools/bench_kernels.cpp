// Timing harness: the parallel engine sweeps against a single-threaded run,
// and the closed-form per-mode kernels against the direct
// evolve-then-decompose route they were derived from.

#include <chrono>
#include <cstdio>
#include <vector>

#include "dqpt/engine.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace dqpt;

namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <typename F>
double timed(F&& body) {
    const double t0 = now_seconds();
    body();
    return now_seconds() - t0;
}

// direct route: full evolution operator, raw decomposition, no cached kernels
double direct_route_checksum(const QuenchSpec& spec) {
    const auto ts = time_grid(spec);
    double acc = 0.0;
    for (std::size_t j = 0; j < spec.n_cells; ++j) {
        const double k = 2.0 * 3.14159265358979323846 * static_cast<double>(j) /
                         static_cast<double>(spec.n_cells);
        const ModeQuench mq = make_mode_quench(block_hamiltonian(spec.pre, k),
                                               block_hamiltonian(spec.post, k));
        for (double t : ts) {
            const Vec2 ut = evolve_lower(mq, t);
            const auto c = decompose(ut, mq.basis_i);
            acc += std::norm(c.c_minus) / (std::norm(c.c_minus) + std::norm(c.c_plus));
        }
    }
    return acc;
}

double closed_form_checksum(const QuenchSpec& spec) {
    const auto ts = time_grid(spec);
    double acc = 0.0;
    for (std::size_t j = 0; j < spec.n_cells; ++j) {
        const double k = 2.0 * 3.14159265358979323846 * static_cast<double>(j) /
                         static_cast<double>(spec.n_cells);
        const ModeQuench mq = make_mode_quench(block_hamiltonian(spec.pre, k),
                                               block_hamiltonian(spec.post, k));
        for (double t : ts) {
            const auto c = evolved_coefficients(mq, t);
            acc += std::norm(c.c_minus) / (std::norm(c.c_minus) + std::norm(c.c_plus));
        }
    }
    return acc;
}

}  // namespace

int main(int argc, char** argv) {
    QuenchSpec spec;
    spec.pre = {0.2, 1.0};
    spec.post = {-0.2, 1.0};
    spec.n_cells = argc > 1 ? static_cast<std::size_t>(std::atol(argv[1])) : 1000;
    spec.t_max = 5.0;
    spec.t_steps = argc > 2 ? static_cast<std::size_t>(std::atol(argv[2])) : 1000;
    spec.quad_steps = 512;

#ifdef _OPENMP
    const int hw = omp_get_max_threads();
#else
    const int hw = 1;
#endif
    std::printf("grid: %zu modes x %zu times, %d hardware threads\n", spec.n_cells, spec.t_steps,
                hw);

    RateSeries r1, rn;
    const double t_rate_serial = timed([&] { r1 = loschmidt_rate(spec, 1); });
    const double t_rate_par = timed([&] { rn = loschmidt_rate(spec, hw); });
    bool identical = r1.rate == rn.rate;
    std::printf("loschmidt_rate   serial %7.3f s   %d threads %7.3f s   speedup %.2fx   %s\n",
                t_rate_serial, hw, t_rate_par, t_rate_serial / t_rate_par,
                identical ? "bitwise equal" : "MISMATCH");

    DtopSeries d1, dn;
    const double t_dtop_serial = timed([&] { d1 = dtop(spec, 1); });
    const double t_dtop_par = timed([&] { dn = dtop(spec, hw); });
    identical = d1.nu == dn.nu;
    std::printf("dtop             serial %7.3f s   %d threads %7.3f s   speedup %.2fx   %s\n",
                t_dtop_serial, hw, t_dtop_par, t_dtop_serial / t_dtop_par,
                identical ? "bitwise equal" : "MISMATCH");

    QuenchSpec small = spec;
    small.n_cells = std::min<std::size_t>(spec.n_cells, 300);
    double sum_direct = 0.0, sum_closed = 0.0;
    const double t_direct = timed([&] { sum_direct = direct_route_checksum(small); });
    const double t_closed = timed([&] { sum_closed = closed_form_checksum(small); });
    std::printf("per-mode kernel  direct %7.3f s   closed form %7.3f s   speedup %.2fx   "
                "checksum gap %.2e\n",
                t_direct, t_closed, t_direct / t_closed,
                std::abs(sum_direct - sum_closed) / std::max(1.0, std::abs(sum_direct)));
    return 0;
}
