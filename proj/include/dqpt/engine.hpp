#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dqpt/dynamics.hpp"
#include "dqpt/ssh.hpp"

namespace dqpt {

/// A sudden quench of the momentum-space model on N unit cells:
/// k_j = 2 pi j / N, j = 0..N-1, uniform time grid of t_steps points on
/// [0, t_max], and quad_steps Simpson panels per unit time for the
/// dynamical-phase quadrature.
struct QuenchSpec {
    SshParams pre, post;
    std::size_t n_cells = 2000;
    double t_max = 5.0;
    std::size_t t_steps = 2000;
    std::size_t quad_steps = 512;

    void validate() const;
};

std::vector<double> time_grid(const QuenchSpec& spec);

struct Jump {
    double time;
    double delta;  // in {+-1/2, +-1}
};

struct RateSeries {
    std::vector<double> times;
    std::vector<double> rate;
    std::vector<double> cusps;
};

struct DtopSeries {
    std::vector<double> times;
    std::vector<double> nu;
    std::vector<Jump> jumps;
};

struct FisherCrossing {
    double k_c;
    double t_c;
    double g_residual;  // g_{k_c}(t_c), < 1e-6 by construction
};

struct FisherBranch {
    int n;
    std::vector<double> k_values;
    std::vector<Complex> z_values;  // z_n(k) = i t_n(k); NaN at skipped modes
    std::vector<FisherCrossing> crossings;
};

struct FisherSet {
    std::vector<FisherBranch> branches;
    std::size_t singular_modes = 0;  // AtanhSingular momenta, skipped
};

struct PkGrid {
    std::vector<double> k_values;
    std::vector<double> times;
    std::vector<double> p;  // row-major [k][t]
};

/// Biorthogonal Loschmidt rate LR(t) = -(1/N) sum_k ln g_k(t), summed in
/// ascending-k order. Cusps are local maxima of the second-difference
/// magnitude above 5x its median. threads = 0 uses the OpenMP default;
/// output is bitwise independent of the thread count.
RateSeries loschmidt_rate(const QuenchSpec& spec, int threads = 0);

/// Same aggregation for the self-normal comparison echo.
RateSeries self_normal_rate(const QuenchSpec& spec, int threads = 0);

/// Biorthogonal dynamical topological order parameter nu(t): the winding of
/// the geometric phase over the closed k loop. Links where the prequench
/// eps branch flips (the labeled band swaps) are wrapped modulo pi, all
/// others modulo 2 pi; this quantizes nu to half-integers. Jumps are
/// transitions between settled half-integer plateaus.
DtopSeries dtop(const QuenchSpec& spec, int threads = 0);

/// Fisher-zero branches z_n(k) = i t_n(k) for n in [n_lo, n_hi], with
/// real-axis crossings from (a) transversal sign changes of Im t_n refined
/// by bisection in k, and (b) one-sided endpoint probes at branch-flip
/// momenta. Every crossing is verified by g_{k_c}(t_c) < verify_g.
FisherSet fisher_branches(const QuenchSpec& spec, int n_lo, int n_hi,
                          std::size_t k_samples = 2000, double verify_g = 1e-6,
                          int threads = 0);

/// Two-level transition probability p(k, t) on the full grid.
PkGrid pk_heatmap(const QuenchSpec& spec, int threads = 0);

// ---- Table S1 batch -------------------------------------------------------

struct TableRow {
    std::string label;            // e.g. "I-II"
    SshParams a, b;               // quench endpoints (forward: a -> b)
    std::vector<int> fisher_fwd;  // expected per-branch crossing-count sets
    std::vector<int> fisher_rev;
    std::vector<double> dtop_fwd;  // expected jump-magnitude sets
    std::vector<double> dtop_rev;
};

/// The twelve catalogued quench rows with their reference profiles.
const std::vector<TableRow>& table_s1_rows();

struct TableS1Entry {
    std::string label;
    bool forward;
    std::vector<int> fisher_counts;   // computed set, ascending
    std::vector<int> fisher_expected;
    std::vector<double> dtop_jumps;   // computed |delta| set, ascending
    std::vector<double> dtop_expected;
    bool pass = false;
    std::string error;  // nonempty if the run failed; entry reported, not dropped
};

struct TableS1Options {
    std::size_t n_cells = 2000;
    double t_max = 5.0;
    std::size_t t_steps = 2000;
    std::size_t quad_steps = 512;
    std::size_t k_samples = 2000;
    int n_lo = 0;
    int n_hi = 6;
    int threads = 0;
};

std::vector<TableS1Entry> table_s1_report(const std::vector<TableRow>& rows,
                                          const TableS1Options& opt = {});

}  // namespace dqpt
