#include "dqpt/dynamics.hpp"

#include <cmath>
#include <numbers>

namespace dqpt {

namespace {
constexpr Complex kI(0.0, 1.0);
}

ModeQuench make_mode_quench(const Mat2& h_i, const Mat2& h_f, double exceptional_rel) {
    ModeQuench mq;
    mq.h_i = h_i;
    mq.h_f = h_f;
    mq.basis_i = eig_biortho(h_i, exceptional_rel);
    mq.basis_f = eig_biortho(h_f, exceptional_rel);
    mq.eps_f = mq.basis_f.e_plus;
    const Mat2 hf_scaled = h_f * (1.0 / mq.eps_f);
    mq.m = dot(mq.basis_i.w_minus, hf_scaled * mq.basis_i.u_minus);
    mq.m_cross = dot(mq.basis_i.w_plus, hf_scaled * mq.basis_i.u_minus);
    return mq;
}

Vec2 evolve_lower(const ModeQuench& mq, double t) {
    return traceless_exp(mq.h_f, t) * mq.basis_i.u_minus;
}

Complex amplitude(const ModeQuench& mq, double t) {
    const Complex x = mq.eps_f * t;
    return std::cos(x) - kI * std::sin(x) * mq.m;
}

Decomposition evolved_coefficients(const ModeQuench& mq, double t) {
    const Complex x = mq.eps_f * t;
    return {-kI * std::sin(x) * mq.m_cross, std::cos(x) - kI * std::sin(x) * mq.m};
}

double g_k(const ModeQuench& mq, double t, double residue) {
    const Vec2 ut = evolve_lower(mq, t);
    const Complex den = dot(associated_state(ut, mq.basis_i), ut);
    // relative above 1: the denominator grows like e^{2|Im eps_f| t}, so its
    // rounding-level imaginary part scales with it
    if (std::abs(den.imag()) > residue * std::max(1.0, std::abs(den.real())))
        throw ComplexResidue("g_k: denominator imaginary residue " + std::to_string(den.imag()));
    return std::norm(amplitude(mq, t)) / den.real();
}

double g_k_self_normal(const ModeQuench& mq, double t) {
    const Vec2 u0 = mq.basis_i.u_minus;
    const Vec2 ut = evolve_lower(mq, t);
    return std::norm(dot(u0, ut)) / (norm2(u0) * norm2(ut));
}

std::vector<Complex> critical_times(const ModeQuench& mq, int n_lo, int n_hi,
                                    double singular_tol, double exceptional_rel) {
    if (std::abs(mq.m - 1.0) < singular_tol || std::abs(mq.m + 1.0) < singular_tol)
        throw AtanhSingular("critical_times: |m -+ 1| below tolerance, no finite zero");
    if (std::abs(mq.eps_f) < exceptional_rel * std::max(1.0, mq.h_f.max_abs()))
        throw ExceptionalPoint("critical_times: postquench mode at an exceptional point");
    // Principal atanh; its i*pi multivaluedness is absorbed into the index n.
    const Complex w = std::atanh(mq.m);
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(std::max(0, n_hi - n_lo + 1)));
    for (int n = n_lo; n <= n_hi; ++n) {
        const double odd = 2.0 * n + 1.0;
        out.push_back(std::numbers::pi * odd / (2.0 * mq.eps_f) - kI * w / mq.eps_f);
    }
    return out;
}

Complex energy_expectation(const ModeQuench& mq, double t) {
    const auto c = evolved_coefficients(mq, t);
    const Complex cm = c.c_minus, cp = c.c_plus;
    const Complex num = std::conj(cm) * (mq.m * cm - mq.m_cross * cp) +
                        std::conj(cp) * (mq.m_cross * cm - mq.m * cp);
    const double den = std::norm(cm) + std::norm(cp);
    return num * mq.eps_f / den;
}

double dynamical_phase(const ModeQuench& mq, double t, std::size_t quad_steps, double residue) {
    if (quad_steps < 2) throw ValidationError("dynamical_phase: quad_steps must be >= 2");
    if (t == 0.0) return 0.0;
    std::size_t n = quad_steps + (quad_steps % 2);  // composite Simpson needs even panels
    const double h = t / static_cast<double>(n);
    Complex sum = energy_expectation(mq, 0.0) + energy_expectation(mq, t);
    for (std::size_t j = 1; j < n; ++j)
        sum += energy_expectation(mq, h * static_cast<double>(j)) * ((j % 2) ? 4.0 : 2.0);
    const Complex integral = sum * (h / 3.0);

    const auto c = evolved_coefficients(mq, t);
    const double den = std::norm(c.c_minus) + std::norm(c.c_plus);
    const Complex phase = -integral + 0.5 * kI * std::log(den);
    if (std::abs(phase.imag()) > residue)
        throw QuadratureResidue("dynamical_phase: imaginary residue " +
                                std::to_string(phase.imag()) + " at quad_steps " +
                                std::to_string(quad_steps));
    return phase.real();
}

namespace {

// Accumulates arg increments of the amplitude from t0 to t1, bisecting any
// step whose increment reaches pi/2.
double arg_increment(const ModeQuench& mq, double t0, Complex a0, double t1, Complex a1,
                     int depth) {
    const double d = std::arg(a1 / a0);
    if (std::abs(d) < std::numbers::pi / 2.0) return d;
    if (depth >= 48)
        throw PhaseStepTooLarge("tracked_phase: amplitude passes through zero near t = " +
                                std::to_string(0.5 * (t0 + t1)));
    const double tm = 0.5 * (t0 + t1);
    const Complex am = amplitude(mq, tm);
    return arg_increment(mq, t0, a0, tm, am, depth + 1) +
           arg_increment(mq, tm, am, t1, a1, depth + 1);
}

}  // namespace

double tracked_phase(const ModeQuench& mq, double t) {
    if (t == 0.0) return 0.0;
    // Coarse grid sized so a free-evolution phase advances well under pi/2
    // per step; the adaptive bisection handles near-zero passages.
    const double rate = std::abs(mq.eps_f) * (1.0 + std::abs(mq.m));
    const std::size_t n = std::max<std::size_t>(8, static_cast<std::size_t>(rate * t * 4.0) + 1);
    const double h = t / static_cast<double>(n);
    double acc = 0.0;
    Complex prev = amplitude(mq, 0.0);
    for (std::size_t j = 1; j <= n; ++j) {
        const double tj = (j == n) ? t : h * static_cast<double>(j);
        const Complex cur = amplitude(mq, tj);
        acc += arg_increment(mq, tj - h, prev, tj, cur, 0);
        prev = cur;
    }
    return acc;
}

double geometric_phase(const ModeQuench& mq, double t, std::size_t quad_steps) {
    return tracked_phase(mq, t) - dynamical_phase(mq, t, quad_steps);
}

double two_level_probability(const ModeQuench& mq, double t) {
    const auto c = evolved_coefficients(mq, t);
    const double np = std::norm(c.c_plus);
    const double nm = std::norm(c.c_minus);
    return np / (nm + np);
}

}  // namespace dqpt
