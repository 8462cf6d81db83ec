#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "dqpt/dynamics.hpp"
#include "dqpt/ssh.hpp"
#include "reference.hpp"

using namespace dqpt;

namespace {

constexpr double kPi = std::numbers::pi;

ModeQuench random_quench() {
    return make_mode_quench(ref::random_offdiagonal(), ref::random_offdiagonal());
}

ModeQuench hermitian_quench(double eta_i, double eta_f, double k) {
    return make_mode_quench(block_hamiltonian({eta_i, 0.0}, k), block_hamiltonian({eta_f, 0.0}, k));
}

// momentum where the Hermitian overlap kernel m vanishes, if the bracket has
// a sign change
double kernel_zero(double eta_i, double eta_f, double klo, double khi) {
    auto m_at = [&](double k) { return hermitian_quench(eta_i, eta_f, k).m.real(); };
    double flo = m_at(klo);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (klo + khi);
        const double f = m_at(mid);
        if (std::signbit(f) == std::signbit(flo)) {
            klo = mid;
            flo = f;
        } else {
            khi = mid;
        }
    }
    return 0.5 * (klo + khi);
}

}  // namespace

TEST_CASE("kernel structure") {
    for (int i = 0; i < 500; ++i) {
        const ModeQuench mq = random_quench();
        // hyperbolic identity tying the two kernels
        CHECK(std::abs(mq.m * mq.m - mq.m_cross * mq.m_cross - 1.0) < 1e-10);
    }
    SUBCASE("trivial quench kernel is -1") {
        const Mat2 h = ref::random_offdiagonal();
        const ModeQuench mq = make_mode_quench(h, h);
        CHECK(std::abs(mq.m + 1.0) < 1e-12);
        CHECK(std::abs(mq.m_cross) < 1e-10);
        CHECK(std::abs(overlap_kernel(mq).m + 1.0) < 1e-12);
    }
}

TEST_CASE("evolve_lower") {
    const Mat2 h = ref::random_offdiagonal();
    const ModeQuench triv = make_mode_quench(h, h);
    SUBCASE("t = 0 returns the initial state") {
        const Vec2 v = evolve_lower(triv, 0.0);
        CHECK(std::sqrt(norm2(v - triv.basis_i.u_minus)) < 1e-14);
    }
    SUBCASE("eigenstate evolution is a pure phase factor") {
        const double t = 0.7;
        const Vec2 got = evolve_lower(triv, t);
        const Complex phase = std::exp(Complex(0.0, 1.0) * triv.basis_i.e_plus * t);
        const Vec2 want = phase * triv.basis_i.u_minus;
        CHECK(std::sqrt(norm2(got - want)) < 1e-12 * std::max(1.0, std::abs(phase)));
    }
}

TEST_CASE("amplitude: closed form equals evolve-then-project") {
    for (int i = 0; i < 1000; ++i) {
        const ModeQuench mq = random_quench();
        const double t = ref::uniform(0.0, 3.0);
        const Complex closed = amplitude(mq, t);
        const Complex direct = dot(mq.basis_i.w_minus, evolve_lower(mq, t));
        CHECK(std::abs(closed - direct) < 1e-10 * std::max(1.0, std::abs(direct)));
    }
    SUBCASE("anchors") {
        const ModeQuench mq = random_quench();
        CHECK(std::abs(amplitude(mq, 0.0) - 1.0) < 1e-14);
        const Mat2 h = ref::random_offdiagonal();
        const ModeQuench triv = make_mode_quench(h, h);
        const double t = 1.3;
        const Complex want = std::exp(Complex(0.0, 1.0) * triv.basis_i.e_plus * t);
        CHECK(std::abs(amplitude(triv, t) - want) < 1e-12 * std::abs(want));
    }
}

TEST_CASE("g_k") {
    SUBCASE("trivial quench stays at 1") {
        const Mat2 h = ref::random_offdiagonal();
        const ModeQuench triv = make_mode_quench(h, h);
        for (double t : {0.0, 0.4, 1.1, 2.9}) CHECK(g_k(triv, t) == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("vanishes at an engineered critical point") {
        // hermitian quench with kernel zero: t_c = pi/(2 eps_f) solves Eq. 9
        const double kc = kernel_zero(0.5, -0.5, 1.0, kPi - 0.2);
        const ModeQuench mq = hermitian_quench(0.5, -0.5, kc);
        const double tc = kPi / (2.0 * mq.eps_f.real());
        CHECK(g_k(mq, tc) < 1e-8);
        CHECK(two_level_probability(mq, tc) > 1.0 - 1e-6);
    }
    SUBCASE("echo-form equivalence on random quenches") {
        for (int i = 0; i < 1000; ++i) {
            const ModeQuench mq = random_quench();
            const double t = ref::uniform(0.0, 3.0);
            const double lhs = g_k(mq, t);
            // <u~|u(t)><u~(t)|u> / <u~(t)|u(t)> with raw vectors
            const Vec2 ut = evolve_lower(mq, t);
            const Vec2 u0 = mq.basis_i.u_minus;
            const Complex num =
                biortho_inner(ut, u0, mq.basis_i) * biortho_inner(u0, ut, mq.basis_i);
            const Complex den = biortho_inner(ut, ut, mq.basis_i);
            const double rhs = (num / den).real();
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
        }
    }
    SUBCASE("hermitian limit reduces to the normalized overlap") {
        for (int i = 0; i < 300; ++i) {
            const double k = ref::uniform(0.1, 2 * kPi - 0.1);
            const ModeQuench mq = hermitian_quench(0.7, -0.3, k);
            const double t = ref::uniform(0.0, 4.0);
            const Vec2 u0 = mq.basis_i.u_minus;
            const Vec2 ut = evolve_lower(mq, t);
            const double want = std::norm(dot(u0, ut)) / (norm2(u0) * norm2(ut));
            CHECK(g_k(mq, t) == doctest::Approx(want).epsilon(1e-10));
        }
    }
    SUBCASE("complement identity with the two-level probability") {
        for (int i = 0; i < 500; ++i) {
            const ModeQuench mq = random_quench();
            const double t = ref::uniform(0.0, 3.0);
            CHECK(g_k(mq, t) + two_level_probability(mq, t) == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("critical_times") {
    SUBCASE("singular kernel refusal") {
        const Mat2 h = ref::random_offdiagonal();
        CHECK_THROWS_AS(critical_times(make_mode_quench(h, h), 0, 3), AtanhSingular);
    }
    SUBCASE("hermitian kernel zero gives purely real odd multiples") {
        const double kc = kernel_zero(0.5, -0.5, 1.0, kPi - 0.2);
        const ModeQuench mq = hermitian_quench(0.5, -0.5, kc);
        const auto ts = critical_times(mq, 0, 4);
        REQUIRE(ts.size() == 5);
        const double ef = mq.eps_f.real();
        for (int n = 0; n <= 4; ++n) {
            CHECK(std::abs(ts[n].imag()) < 1e-9);
            CHECK(ts[n].real() == doctest::Approx((2 * n + 1) * kPi / (2 * ef)).epsilon(1e-9));
        }
    }
    SUBCASE("roots of Eq. 9 substituted back kill the echo") {
        int tested = 0;
        for (int i = 0; i < 400 && tested < 60; ++i) {
            const ModeQuench mq = random_quench();
            std::vector<Complex> ts;
            try {
                ts = critical_times(mq, 0, 3);
            } catch (const AtanhSingular&) {
                continue;
            }
            for (const Complex& tc : ts) {
                // complex-time zero: evaluate the closed-form amplitude there
                const Complex x = mq.eps_f * tc;
                const Complex amp = std::cos(x) - Complex(0, 1) * std::sin(x) * mq.m;
                CHECK(std::abs(amp) < 1e-8 * std::max(1.0, std::abs(std::cos(x))));
                ++tested;
            }
        }
        CHECK(tested >= 60);
    }
}

TEST_CASE("dynamical_phase") {
    SUBCASE("t = 0 and validation") {
        const ModeQuench mq = random_quench();
        CHECK(dynamical_phase(mq, 0.0, 64) == 0.0);
        CHECK_THROWS_AS(dynamical_phase(mq, 1.0, 1), ValidationError);
    }
    SUBCASE("trivial hermitian quench accumulates eps t") {
        const Mat2 h = block_hamiltonian({0.4, 0.0}, 1.1);
        const ModeQuench triv = make_mode_quench(h, h);
        const double eps = triv.basis_i.e_plus.real();
        for (double t : {0.3, 1.0, 2.2})
            CHECK(dynamical_phase(triv, t, 256) == doctest::Approx(eps * t).epsilon(1e-10));
    }
    SUBCASE("hermitian quench matches dense brute-force quadrature") {
        for (int i = 0; i < 40; ++i) {
            const double k = ref::uniform(0.1, 2 * kPi - 0.1);
            const ModeQuench mq = hermitian_quench(0.6, -0.4, k);
            const double t = ref::uniform(0.2, 3.0);
            // independent route: <u(s)|H_f|u(s)>/<u(s)|u(s)> via raw evolution
            const std::size_t n = 4096;
            const double h = t / n;
            double acc = 0.0;
            for (std::size_t j = 0; j <= n; ++j) {
                const Vec2 us = evolve_lower(mq, h * static_cast<double>(j));
                const double f = (dot(us, mq.h_f * us) / dot(us, us)).real();
                acc += ((j == 0 || j == n) ? 0.5 : 1.0) * f;
            }
            const double want = -acc * h;
            CHECK(dynamical_phase(mq, t, 512) == doctest::Approx(want).epsilon(1e-6));
        }
    }
    SUBCASE("doubling the panel count is converged") {
        for (int i = 0; i < 100; ++i) {
            const ModeQuench mq = random_quench();
            const double t = ref::uniform(0.2, 2.0);
            const double a = dynamical_phase(mq, t, 512);
            const double b = dynamical_phase(mq, t, 1024);
            CHECK(std::abs(a - b) < 1e-6);
        }
    }
    SUBCASE("refinement oracle at 10x steps") {
        for (int i = 0; i < 60; ++i) {
            const ModeQuench mq = random_quench();
            const double t = ref::uniform(0.2, 2.0);
            CHECK(dynamical_phase(mq, t, 512) ==
                  doctest::Approx(dynamical_phase(mq, t, 5120)).epsilon(1e-8));
        }
    }
}

TEST_CASE("tracked_phase refuses an exact zero passage") {
    // sigma_x -> sigma_y: the kernel m is exactly zero, so the amplitude is
    // cos(t) and vanishes at pi/2; no refinement can track the arg through it
    const Mat2 sx{0.0, 1.0, 1.0, 0.0};
    const Mat2 sy{0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0};
    const ModeQuench mq = make_mode_quench(sx, sy);
    CHECK(mq.m == Complex(0.0));
    CHECK_THROWS_AS(tracked_phase(mq, 2.0), PhaseStepTooLarge);
    // with m = 0 the zeros sit exactly at the odd multiples of pi/2
    const auto ts = critical_times(mq, 0, 2);
    for (int n = 0; n <= 2; ++n) {
        CHECK(std::abs(ts[n].imag()) < 1e-14);
        CHECK(ts[n].real() == doctest::Approx((2 * n + 1) * kPi / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("dynamical_phase flags an under-resolved quadrature") {
    const Mat2 hi{0.0, Complex(4.0, 1.0), Complex(2.0, -1.0), 0.0};
    const Mat2 hf{0.0, Complex(0.0, -3.0), Complex(-2.0, 3.0), 0.0};
    const ModeQuench mq = make_mode_quench(hi, hf);
    CHECK_THROWS_AS(dynamical_phase(mq, 3.0, 2), QuadratureResidue);
    CHECK_NOTHROW(dynamical_phase(mq, 3.0, 2048));
}

TEST_CASE("geometric_phase") {
    SUBCASE("anchors") {
        const ModeQuench mq = random_quench();
        CHECK(geometric_phase(mq, 0.0, 64) == 0.0);
        const Mat2 h = ref::random_offdiagonal();
        const ModeQuench triv = make_mode_quench(h, h);
        for (double t : {0.5, 1.5, 2.5}) {
            // cancellation-limited: the amplitude spans e^{+-|Im eps| t}
            const double span = std::exp(std::min(12.0, std::abs(triv.basis_i.e_plus.imag()) * t));
            CHECK(std::abs(geometric_phase(triv, t, 512)) < 1e-16 * span * span + 1e-12);
        }
    }
    SUBCASE("hermitian Pancharatnam reference") {
        for (int i = 0; i < 60; ++i) {
            const double k = ref::uniform(0.1, 2 * kPi - 0.1);
            const ModeQuench mq = hermitian_quench(0.5, -0.5, k);
            const double t = ref::uniform(0.1, 2.5);
            // reference: phase of the normalized overlap minus the dynamical
            // term e_f (d_i . d_f) t, tracked on a fine grid
            const Vec2 u0 = mq.basis_i.u_minus;
            const std::size_t n = 8192;
            double tracked = 0.0;
            Complex prev = dot(u0, u0);
            for (std::size_t j = 1; j <= n; ++j) {
                const Complex cur = dot(u0, evolve_lower(mq, t * j / double(n)));
                tracked += std::arg(cur / prev);
                prev = cur;
            }
            const double edyn = -(dot(u0, mq.h_f * u0) / dot(u0, u0)).real() * t;
            const double want = tracked - edyn;
            CHECK(geometric_phase(mq, t, 1024) == doctest::Approx(want).epsilon(1e-6));
        }
    }
}

TEST_CASE("two_level_probability") {
    SUBCASE("starts in the lower band") {
        const ModeQuench mq = random_quench();
        CHECK(two_level_probability(mq, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("trivial quench never mixes") {
        const Mat2 h = ref::random_offdiagonal();
        const ModeQuench triv = make_mode_quench(h, h);
        for (double t : {0.5, 1.5, 3.0}) {
            const double span = std::exp(std::min(12.0, std::abs(triv.basis_i.e_plus.imag()) * t));
            CHECK(two_level_probability(triv, t) < 1e-12 + std::pow(1e-15 * span * span, 2));
        }
    }
    SUBCASE("bounded on random grids") {
        for (int i = 0; i < 2000; ++i) {
            const ModeQuench mq = random_quench();
            const double p = two_level_probability(mq, ref::uniform(0.0, 4.0));
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
    }
    SUBCASE("closed-form coefficients match direct decomposition") {
        for (int i = 0; i < 500; ++i) {
            const ModeQuench mq = random_quench();
            const double t = ref::uniform(0.0, 3.0);
            const auto closed = evolved_coefficients(mq, t);
            const auto direct = decompose(evolve_lower(mq, t), mq.basis_i);
            const double scale =
                std::max({1.0, std::abs(direct.c_plus), std::abs(direct.c_minus)});
            CHECK(std::abs(closed.c_plus - direct.c_plus) < 1e-10 * scale);
            CHECK(std::abs(closed.c_minus - direct.c_minus) < 1e-10 * scale);
        }
    }
}
