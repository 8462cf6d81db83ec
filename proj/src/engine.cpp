#include "dqpt/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dqpt {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr Complex kI(0.0, 1.0);

int resolve_threads(int threads) {
#ifdef _OPENMP
    return threads > 0 ? threads : omp_get_max_threads();
#else
    (void)threads;
    return 1;
#endif
}

double wrap_two_pi(double x) {  // into (-pi, pi]
    x = std::remainder(x, kTwoPi);
    if (x <= -kPi) x += kTwoPi;
    return x;
}

double wrap_pi(double x) {  // into (-pi/2, pi/2]
    x = std::remainder(x, kPi);
    if (x <= -kPi / 2.0) x += kPi;
    return x;
}

double momentum(std::size_t j, std::size_t n) {
    return kTwoPi * static_cast<double>(j) / static_cast<double>(n);
}

ModeQuench mode_at(const QuenchSpec& spec, double k) {
    try {
        return make_mode_quench(block_hamiltonian(spec.pre, k), block_hamiltonian(spec.post, k));
    } catch (const ExceptionalPoint& e) {
        throw ExceptionalPoint(std::string(e.what()) + " at k = " + std::to_string(k));
    }
}

struct ModeBank {
    std::vector<ModeQuench> modes;
    std::vector<bool> swap_after;  // prequench eps branch flips between j and j+1 (cyclic)
};

bool branch_flip(Complex e0, Complex e1) { return std::abs(e1 - e0) > std::abs(e1 + e0); }

ModeBank build_modes(const QuenchSpec& spec, int threads) {
    const std::size_t n = spec.n_cells;
    ModeBank bank;
    bank.modes.resize(n);
    bank.swap_after.assign(n, false);
    std::vector<std::string> failure(1);
    const int nt = resolve_threads(threads);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nt)
#endif
    for (std::size_t j = 0; j < n; ++j) {
        try {
            bank.modes[j] = mode_at(spec, momentum(j, n));
        } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
            if (failure[0].empty()) failure[0] = e.what();
        }
    }
    (void)nt;
    if (!failure[0].empty()) throw ExceptionalPoint(failure[0]);
    for (std::size_t j = 0; j < n; ++j)
        bank.swap_after[j] =
            branch_flip(bank.modes[j].basis_i.e_plus, bank.modes[(j + 1) % n].basis_i.e_plus);
    return bank;
}

// Cusps: local maxima of |second difference| above 5x its median, with a
// small absolute floor so flat series do not trigger on rounding noise.
std::vector<double> detect_cusps(const std::vector<double>& ts, const std::vector<double>& f) {
    const std::size_t n = f.size();
    if (n < 5) return {};
    std::vector<double> d2(n - 2);
    for (std::size_t j = 1; j + 1 < n; ++j)
        d2[j - 1] = std::abs(f[j + 1] - 2.0 * f[j] + f[j - 1]);
    std::vector<double> sorted(d2);
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double med = sorted[sorted.size() / 2];
    const double threshold = std::max(5.0 * med, 1e-9);
    std::vector<double> out;
    for (std::size_t j = 1; j + 1 < d2.size(); ++j)
        if (d2[j] > threshold && d2[j] >= d2[j - 1] && d2[j] >= d2[j + 1])
            out.push_back(ts[j + 1]);
    return out;
}

// Per-interval composite Simpson panel count from a per-unit-time density.
std::size_t panels_per_interval(double dt, std::size_t per_unit) {
    const auto want = static_cast<std::size_t>(std::ceil(dt * static_cast<double>(per_unit)));
    const std::size_t even = want + (want % 2);
    return std::max<std::size_t>(2, even);
}

// Fills one k-row of ln g, phi_G (principal), and optionally p over the time
// grid; the dynamical phase accumulates interval by interval so the whole
// row costs O(t_steps * panels).
struct ModeTraceRow {
    double* ln_g = nullptr;
    double* phi_g = nullptr;
    double* p = nullptr;
    double* ln_g_sn = nullptr;
};

void trace_mode(const ModeQuench& mq, const std::vector<double>& ts, std::size_t quad_per_unit,
                const ModeTraceRow& row) {
    const std::size_t nt = ts.size();
    Complex integral = 0.0;
    const std::size_t sub = panels_per_interval(nt > 1 ? ts[1] - ts[0] : 1.0, quad_per_unit);
    for (std::size_t j = 0; j < nt; ++j) {
        const auto c = evolved_coefficients(mq, ts[j]);
        const double num = std::norm(c.c_minus);
        const double den = num + std::norm(c.c_plus);
        if (row.ln_g) row.ln_g[j] = std::log(num) - std::log(den);
        if (row.p) row.p[j] = std::norm(c.c_plus) / den;
        if (row.phi_g) {
            if (j > 0) {
                // composite Simpson over [t_{j-1}, t_j] with `sub` panels
                const double h = (ts[j] - ts[j - 1]) / static_cast<double>(sub);
                Complex sum = energy_expectation(mq, ts[j - 1]) + energy_expectation(mq, ts[j]);
                for (std::size_t s = 1; s < sub; ++s)
                    sum += energy_expectation(mq, ts[j - 1] + h * static_cast<double>(s)) *
                           ((s % 2) ? 4.0 : 2.0);
                integral += sum * (h / 3.0);
            }
            const Complex phase = -integral + 0.5 * kI * std::log(den);
            row.phi_g[j] = std::arg(c.c_minus) - phase.real();
        }
        if (row.ln_g_sn) row.ln_g_sn[j] = std::log(g_k_self_normal(mq, ts[j]));
    }
}

RateSeries aggregate_rate(const QuenchSpec& spec, int threads, bool self_normal) {
    spec.validate();
    const std::size_t n = spec.n_cells;
    const auto ts = time_grid(spec);
    const std::size_t nt = ts.size();
    const ModeBank bank = build_modes(spec, threads);

    std::vector<double> lng(n * nt);
    const int nthreads = resolve_threads(threads);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nthreads)
#endif
    for (std::size_t j = 0; j < n; ++j) {
        ModeTraceRow row;
        if (self_normal)
            row.ln_g_sn = &lng[j * nt];
        else
            row.ln_g = &lng[j * nt];
        trace_mode(bank.modes[j], ts, spec.quad_steps, row);
    }
    (void)nthreads;

    RateSeries out;
    out.times = ts;
    out.rate.resize(nt);
    const double inv_n = 1.0 / static_cast<double>(n);
    // fixed ascending-k fold per time point, independent of thread count
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nthreads)
#endif
    for (std::size_t t = 0; t < nt; ++t) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += lng[j * nt + t];
        out.rate[t] = -acc * inv_n;
    }
    for (std::size_t t = 0; t < nt; ++t)
        if (!std::isfinite(out.rate[t]))
            throw NumericsError("loschmidt rate non-finite at t = " + std::to_string(ts[t]) +
                                " (grid point sits exactly on a Loschmidt zero)");
    out.cusps = detect_cusps(ts, out.rate);
    return out;
}

std::vector<Jump> extract_jumps(const std::vector<double>& ts, const std::vector<double>& nu,
                                double settle = 0.1) {
    std::vector<Jump> jumps;
    bool have = false;
    double cur = 0.0;
    for (std::size_t j = 0; j < nu.size(); ++j) {
        const double q = std::round(2.0 * nu[j]) / 2.0;
        if (std::abs(nu[j] - q) > settle) continue;  // mid-transition sample
        if (!have) {
            have = true;
            cur = q;
            continue;
        }
        if (q != cur) {
            jumps.push_back({ts[j], q - cur});
            cur = q;
        }
    }
    return jumps;
}

// Refined branch-flip momenta of either Hamiltonian; candidates for Fisher
// curve endpoints.
std::vector<double> flip_momenta(const QuenchSpec& spec, const ModeBank& bank) {
    const std::size_t n = bank.modes.size();
    std::vector<double> out;
    for (std::size_t j = 0; j < n; ++j) {
        const auto& m0 = bank.modes[j];
        const auto& m1 = bank.modes[(j + 1) % n];
        const bool fi = branch_flip(m0.basis_i.e_plus, m1.basis_i.e_plus);
        const bool ff = branch_flip(m0.basis_f.e_plus, m1.basis_f.e_plus);
        if (!fi && !ff) continue;
        double lo = momentum(j, n), hi = momentum(j, n) + kTwoPi / static_cast<double>(n);
        Complex ei = m0.basis_i.e_plus, ef = m0.basis_f.e_plus;
        for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
            const double mid = 0.5 * (lo + hi);
            const ModeQuench mm = mode_at(spec, mid);
            if ((fi && branch_flip(ei, mm.basis_i.e_plus)) ||
                (ff && branch_flip(ef, mm.basis_f.e_plus))) {
                hi = mid;
            } else {
                lo = mid;
                ei = mm.basis_i.e_plus;
                ef = mm.basis_f.e_plus;
            }
        }
        out.push_back(0.5 * (lo + hi));
    }
    return out;
}

bool mode_singular(const ModeQuench& mq, double tol_s = tol::atanh_singular) {
    return std::abs(mq.m - 1.0) < tol_s || std::abs(mq.m + 1.0) < tol_s;
}

Complex critical_time_n(const ModeQuench& mq, int n) {
    const Complex w = std::atanh(mq.m);
    return kPi * (2.0 * n + 1.0) / (2.0 * mq.eps_f) - kI * w / mq.eps_f;
}

}  // namespace

void QuenchSpec::validate() const {
    if (n_cells < 2) throw ValidationError("n_cells must be >= 2");
    if (t_steps < 2) throw ValidationError("t_steps must be >= 2");
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ValidationError("t_max must be positive");
    if (quad_steps < 2) throw ValidationError("quad_steps must be >= 2");
    if (!std::isfinite(pre.eta) || !std::isfinite(pre.gamma) || !std::isfinite(post.eta) ||
        !std::isfinite(post.gamma))
        throw ValidationError("model parameters must be finite");
}

std::vector<double> time_grid(const QuenchSpec& spec) {
    std::vector<double> ts(spec.t_steps);
    const double dt = spec.t_max / static_cast<double>(spec.t_steps - 1);
    for (std::size_t j = 0; j < spec.t_steps; ++j) ts[j] = dt * static_cast<double>(j);
    ts.back() = spec.t_max;
    return ts;
}

RateSeries loschmidt_rate(const QuenchSpec& spec, int threads) {
    return aggregate_rate(spec, threads, false);
}

RateSeries self_normal_rate(const QuenchSpec& spec, int threads) {
    return aggregate_rate(spec, threads, true);
}

DtopSeries dtop(const QuenchSpec& spec, int threads) {
    spec.validate();
    const std::size_t n = spec.n_cells;
    const auto ts = time_grid(spec);
    const std::size_t nt = ts.size();
    const ModeBank bank = build_modes(spec, threads);

    std::vector<double> phi(n * nt);
    const int nthreads = resolve_threads(threads);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nthreads)
#endif
    for (std::size_t j = 0; j < n; ++j) {
        ModeTraceRow row;
        row.phi_g = &phi[j * nt];
        trace_mode(bank.modes[j], ts, spec.quad_steps, row);
    }

    DtopSeries out;
    out.times = ts;
    out.nu.resize(nt);
    std::vector<std::size_t> coarse(nt, 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nthreads)
#endif
    for (std::size_t t = 0; t < nt; ++t) {
        double acc = 0.0;
        std::size_t bad = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const double d = phi[((j + 1) % n) * nt + t] - phi[j * nt + t];
            if (bank.swap_after[j]) {
                acc += wrap_pi(d);
            } else {
                const double w = wrap_two_pi(d);
                if (std::abs(w) >= kPi / 2.0) ++bad;
                acc += w;
            }
        }
        out.nu[t] = acc / kTwoPi;
        coarse[t] = bad;
    }
    (void)nthreads;
    // A zero slipping between grid points makes a bounded number of links
    // steep at isolated times; a persistent excess means the k grid cannot
    // resolve the phase profile.
    const std::size_t allowance = std::max<std::size_t>(4, n / 100);
    for (std::size_t t = 0; t < nt; ++t)
        if (coarse[t] > allowance)
            throw GridTooCoarse("dtop: " + std::to_string(coarse[t]) +
                                " k-links exceed pi/2 at t = " + std::to_string(ts[t]));
    out.jumps = extract_jumps(ts, out.nu);
    return out;
}

FisherSet fisher_branches(const QuenchSpec& spec, int n_lo, int n_hi, std::size_t k_samples,
                          double verify_g, int threads) {
    spec.validate();
    if (k_samples < 256) throw ValidationError("fisher_branches: k_samples must be >= 256");
    if (n_lo > n_hi) throw ValidationError("fisher_branches: empty branch range");
    QuenchSpec kspec = spec;
    kspec.n_cells = k_samples;
    const ModeBank bank = build_modes(kspec, threads);
    const std::size_t n = k_samples;

    std::vector<bool> singular(n);
    for (std::size_t j = 0; j < n; ++j) singular[j] = mode_singular(bank.modes[j]);

    FisherSet out;
    out.singular_modes = static_cast<std::size_t>(std::count(singular.begin(), singular.end(), true));

    // Links whose interior contains a branch flip; sign changes across them
    // are curve discontinuities, not crossings.
    std::vector<bool> flip_link(n, false);
    for (std::size_t j = 0; j < n; ++j) {
        const auto& m0 = bank.modes[j];
        const auto& m1 = bank.modes[(j + 1) % n];
        flip_link[j] = branch_flip(m0.basis_i.e_plus, m1.basis_i.e_plus) ||
                       branch_flip(m0.basis_f.e_plus, m1.basis_f.e_plus);
    }
    const std::vector<double> flips = flip_momenta(kspec, bank);

    const double dk = kTwoPi / static_cast<double>(n);
    out.branches.resize(static_cast<std::size_t>(n_hi - n_lo + 1));
    for (int nb = n_lo; nb <= n_hi; ++nb) {
        FisherBranch branch;
        branch.n = nb;
        branch.k_values.resize(n);
        branch.z_values.resize(n);
        std::vector<Complex> tn(n);
        for (std::size_t j = 0; j < n; ++j) {
            branch.k_values[j] = momentum(j, n);
            if (singular[j]) {
                tn[j] = Complex(std::nan(""), std::nan(""));
            } else {
                tn[j] = critical_time_n(bank.modes[j], nb);
            }
            branch.z_values[j] = kI * tn[j];
        }

        std::vector<FisherCrossing> found;
        auto push_verified = [&](double kc, double tc, const ModeQuench& mq) {
            const double g = g_k(mq, tc);
            if (g < verify_g) found.push_back({kc, tc, g});
        };

        // One-sided endpoint probes at branch-flip momenta: a curve that
        // terminates on the real axis has Im t_n -> 0 on that side.
        for (const double kstar : flips) {
            for (const double side : {-1.0, 1.0}) {
                const double kp = kstar + side * 1e-9;
                ModeQuench mq;
                try {
                    mq = mode_at(kspec, kp);
                } catch (const ExceptionalPoint&) {
                    continue;
                }
                if (mode_singular(mq)) continue;
                const Complex t = critical_time_n(mq, nb);
                if (!std::isfinite(t.real()) || !std::isfinite(t.imag())) continue;
                if (std::abs(t.imag()) < 1e-7 && t.real() > 0.0)
                    push_verified(kp, t.real(), mq);
            }
        }

        // Transversal crossings: bisection in k on Im t_n over sign-change
        // brackets away from flips and singular modes.
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t j2 = (j + 1) % n;
            if (flip_link[j] || singular[j] || singular[j2]) continue;
            const double im0 = tn[j].imag(), im1 = tn[j2].imag();
            if (std::signbit(im0) == std::signbit(im1)) continue;
            double lo = momentum(j, n), hi = momentum(j, n) + dk;
            double flo = im0;
            bool ok = false;
            double kc = 0.0, tc = 0.0;
            ModeQuench mq_c;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                ModeQuench mm;
                try {
                    mm = mode_at(kspec, mid);
                } catch (const ExceptionalPoint&) {
                    break;
                }
                if (mode_singular(mm)) break;
                const Complex t = critical_time_n(mm, nb);
                if (std::abs(t.imag()) < 1e-11) {
                    ok = true;
                    kc = mid;
                    tc = t.real();
                    mq_c = mm;
                    break;
                }
                if (std::signbit(t.imag()) == std::signbit(flo)) {
                    lo = mid;
                    flo = t.imag();
                } else {
                    hi = mid;
                }
            }
            if (ok && tc > 0.0) push_verified(kc, tc, mq_c);
        }

        // dedupe: probes and brackets can land on the same zero
        std::sort(found.begin(), found.end(),
                  [](const FisherCrossing& a, const FisherCrossing& b) {
                      return a.k_c != b.k_c ? a.k_c < b.k_c : a.t_c < b.t_c;
                  });
        for (const auto& c : found) {
            const bool dup = std::any_of(branch.crossings.begin(), branch.crossings.end(),
                                         [&](const FisherCrossing& o) {
                                             return std::abs(o.k_c - c.k_c) < 1e-6 &&
                                                    std::abs(o.t_c - c.t_c) < 1e-6;
                                         });
            if (!dup) branch.crossings.push_back(c);
        }
        out.branches[static_cast<std::size_t>(nb - n_lo)] = std::move(branch);
    }
    return out;
}

PkGrid pk_heatmap(const QuenchSpec& spec, int threads) {
    spec.validate();
    const std::size_t n = spec.n_cells;
    const auto ts = time_grid(spec);
    const std::size_t nt = ts.size();
    const ModeBank bank = build_modes(spec, threads);

    PkGrid out;
    out.times = ts;
    out.k_values.resize(n);
    out.p.resize(n * nt);
    const int nthreads = resolve_threads(threads);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nthreads)
#endif
    for (std::size_t j = 0; j < n; ++j) {
        out.k_values[j] = momentum(j, n);
        ModeTraceRow row;
        row.p = &out.p[j * nt];
        trace_mode(bank.modes[j], ts, spec.quad_steps, row);
    }
    (void)nthreads;
    return out;
}

const std::vector<TableRow>& table_s1_rows() {
    static const std::vector<TableRow> rows = {
        {"I-II", {-2.0, 5.0}, {0.2, 5.0}, {0, 1}, {2}, {1.0}, {0.5}},
        {"I-III", {-2.0, 5.0}, {2.0, 5.0}, {1}, {1}, {1.0}, {1.0}},
        {"II-III", {0.2, 5.0}, {2.0, 5.0}, {2, 3}, {0}, {0.5, 1.0}, {}},
        {"IV-V", {-2.0, 1.0}, {0.2, 1.0}, {1}, {3, 4}, {1.0}, {0.5, 1.0}},
        {"IV-VI", {-2.0, 1.0}, {2.0, 1.0}, {2}, {2}, {1.0}, {1.0}},
        {"V-VI", {0.2, 1.0}, {3.0, 1.0}, {2, 4}, {1}, {0.5, 1.0}, {1.0}},
        {"I-I", {-2.0, 5.0}, {-3.0, 5.0}, {0, 1}, {0, 1}, {1.0}, {1.0}},
        {"II-II", {0.2, 5.0}, {-0.2, 5.0}, {0, 1}, {0, 1}, {0.5}, {0.5}},
        {"III-III", {2.0, 5.0}, {3.0, 5.0}, {1}, {1}, {1.0}, {1.0}},
        {"IV-IV", {-2.0, 1.0}, {-1.0, 1.0}, {0, 2}, {0, 2}, {1.0}, {1.0}},
        {"V-V", {0.2, 1.0}, {-0.2, 1.0}, {1, 2}, {1, 2}, {0.5, 1.0}, {0.5, 1.0}},
        {"VI-VI", {0.5, 1.0}, {5.0, 1.0}, {0, 2}, {0, 2}, {1.0}, {1.0}},
    };
    return rows;
}

std::vector<TableS1Entry> table_s1_report(const std::vector<TableRow>& rows,
                                          const TableS1Options& opt) {
    std::vector<TableS1Entry> report;
    for (const auto& row : rows) {
        for (const bool forward : {true, false}) {
            TableS1Entry entry;
            entry.label = row.label;
            entry.forward = forward;
            entry.fisher_expected = forward ? row.fisher_fwd : row.fisher_rev;
            entry.dtop_expected = forward ? row.dtop_fwd : row.dtop_rev;
            QuenchSpec spec;
            spec.pre = forward ? row.a : row.b;
            spec.post = forward ? row.b : row.a;
            spec.n_cells = opt.n_cells;
            spec.t_max = opt.t_max;
            spec.t_steps = opt.t_steps;
            spec.quad_steps = opt.quad_steps;
            try {
                const FisherSet fs =
                    fisher_branches(spec, opt.n_lo, opt.n_hi, opt.k_samples, 1e-6, opt.threads);
                std::vector<int> counts;
                for (const auto& b : fs.branches)
                    counts.push_back(static_cast<int>(b.crossings.size()));
                std::sort(counts.begin(), counts.end());
                counts.erase(std::unique(counts.begin(), counts.end()), counts.end());
                entry.fisher_counts = counts;

                const DtopSeries ds = dtop(spec, opt.threads);
                std::vector<double> mags;
                for (const auto& jmp : ds.jumps) mags.push_back(std::abs(jmp.delta));
                std::sort(mags.begin(), mags.end());
                mags.erase(std::unique(mags.begin(), mags.end()), mags.end());
                entry.dtop_jumps = mags;

                entry.pass = entry.fisher_counts == entry.fisher_expected &&
                             entry.dtop_jumps == entry.dtop_expected;
            } catch (const std::exception& e) {
                entry.error = e.what();
                entry.pass = false;
            }
            report.push_back(std::move(entry));
        }
    }
    return report;
}

}  // namespace dqpt
