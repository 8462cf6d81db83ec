#pragma once

#include <cstddef>
#include <vector>

#include "dqpt/biortho.hpp"

namespace dqpt {

/// One momentum mode of a sudden quench: prequench block h_i, postquench
/// block h_f, both eigensystems, and the closed-form overlap kernels
///   m       = <w_-^i| h_f/eps_f |u_-^i>   (Loschmidt kernel)
///   m_cross = <w_+^i| h_f/eps_f |u_-^i>   (band-mixing kernel)
/// which satisfy m^2 - m_cross^2 = 1.
struct ModeQuench {
    Mat2 h_i, h_f;
    BiorthoBasis basis_i, basis_f;
    Complex eps_f{};
    Complex m{}, m_cross{};
};

ModeQuench make_mode_quench(const Mat2& h_i, const Mat2& h_f,
                            double exceptional_rel = tol::exceptional_rel);

/// The Loschmidt matrix element; kept as a named quantity because the
/// critical-time formula is a function of it alone.
struct OverlapKernel {
    Complex m{};
};
inline OverlapKernel overlap_kernel(const ModeQuench& mq) { return {mq.m}; }

/// e^{-i h_f t} |u_-^i>.
Vec2 evolve_lower(const ModeQuench& mq, double t);

/// <w_-^i|u_-^i(t)> = cos(eps_f t) - i sin(eps_f t) m, closed form.
Complex amplitude(const ModeQuench& mq, double t);

/// Decomposition of the evolved lower state in the prequench basis:
/// (c_-, c_+) = (amplitude, -i sin(eps_f t) m_cross), closed form.
Decomposition evolved_coefficients(const ModeQuench& mq, double t);

/// Per-mode Loschmidt factor |<w_-^i|u_-^i(t)>|^2 / <u~(t)|u(t)>, with the
/// denominator decomposed in the prequench basis. Real and in [0, 1].
double g_k(const ModeQuench& mq, double t, double residue = tol::real_residue);

/// Self-normal comparison factor |<u(0)|u(t)>|^2/(<u(0)|u(0)><u(t)|u(t)>).
double g_k_self_normal(const ModeQuench& mq, double t);

/// t_n = pi (2n+1) / (2 eps_f) - i atanh(m) / eps_f for n in [n_lo, n_hi].
std::vector<Complex> critical_times(const ModeQuench& mq, int n_lo, int n_hi,
                                    double singular_tol = tol::atanh_singular,
                                    double exceptional_rel = tol::exceptional_rel);

/// <u~(t)|h_f|u(t)> / <u~(t)|u(t)>, the complex energy expectation driving
/// the dynamical phase.
Complex energy_expectation(const ModeQuench& mq, double t);

/// phi_dyn(t) = -int_0^t <H> ds + (i/2) ln <u~(t)|u(t)>, composite Simpson on
/// quad_steps panels (rounded up to even). The two terms' imaginary parts
/// cancel; the residue is checked before the real part is returned.
double dynamical_phase(const ModeQuench& mq, double t, std::size_t quad_steps,
                       double residue = tol::quad_residue);

/// arg of amplitude, tracked continuously in t from phi(0) = 0. Steps whose
/// phase increment reaches pi/2 are bisected; if refinement bottoms out the
/// amplitude passed through zero and PhaseStepTooLarge is thrown.
double tracked_phase(const ModeQuench& mq, double t);

/// phi_G = tracked_phase - dynamical_phase.
double geometric_phase(const ModeQuench& mq, double t, std::size_t quad_steps);

/// p(k,t) = |c_+|^2 / (|c_-|^2 + |c_+|^2), probability of having crossed to
/// the upper prequench band.
double two_level_probability(const ModeQuench& mq, double t);

}  // namespace dqpt
