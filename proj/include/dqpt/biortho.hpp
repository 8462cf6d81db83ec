#pragma once

#include <utility>

#include "dqpt/numerics.hpp"

namespace dqpt {

/// Paired right/left eigenvectors of a traceless off-diagonal 2x2 Hamiltonian
/// with eigenvalues +-eps, in the canonical gauge
///   u_+- = (+-sqrt(a/b), 1)/sqrt(2),  w_+- = (+-sqrt(conj(b)/conj(a)), 1)/sqrt(2),
/// sign-corrected so that H u_+ = +eps u_+ and <w_m|u_n> = delta_mn exactly
/// (the principal square roots can land on the wrong sheet individually).
/// "+" always labels eps = principal_sqrt(a*b).
struct BiorthoBasis {
    Complex e_plus{}, e_minus{};
    Vec2 u_plus, u_minus;  // right eigenvectors
    Vec2 w_plus, w_minus;  // left eigenvectors |u~_n>
};

/// Expansion coefficients c_n of a state in a biorthogonal basis.
struct Decomposition {
    Complex c_plus{}, c_minus{};
};

BiorthoBasis eig_biortho(const Mat2& h, double exceptional_rel = tol::exceptional_rel,
                         double diag_tol = tol::trace);

/// c_n = <w_n|psi>, conjugate-linear in the left slot.
Decomposition decompose(const Vec2& psi, const BiorthoBasis& basis);

/// Maps sum c_n u_n to sum c_n w_n (same coefficients, left vectors).
Vec2 associated_state(const Vec2& psi, const BiorthoBasis& basis);

/// <phi~|psi> = sum conj(d_n) c_n with d = decompose(phi), c = decompose(psi).
Complex biortho_inner(const Vec2& psi, const Vec2& phi, const BiorthoBasis& basis);

/// p = <psi~|phi><phi~|psi> / (<psi~|psi><phi~|phi>), clamped to [0,1] after
/// the imaginary residue is checked.
double transition_probability(const Vec2& psi, const Vec2& phi, const BiorthoBasis& basis,
                              double zero_norm = tol::zero_norm,
                              double residue = tol::real_residue);

/// (p_+, p_-) with p_n = |c_n|^2 / sum |c_m|^2.
std::pair<double, double> projection_probabilities(const Vec2& psi, const BiorthoBasis& basis,
                                                   double zero_norm = tol::zero_norm);

/// Evaluates the transition-probability formula with the left state evolved
/// by the Schroedinger equation under H^dag instead of mapped through the
/// associated-state rule. For non-Hermitian hf without PT symmetry the result
/// is complex, i.e. not a probability; kept as a diagnostic of that failure.
Complex naive_left_evolution_diagnostic(const Mat2& hf, const BiorthoBasis& basis_i,
                                        const Vec2& phi, double t);

}  // namespace dqpt
