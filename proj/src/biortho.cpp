#include "dqpt/biortho.hpp"

#include <cmath>

namespace dqpt {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

BiorthoBasis eig_biortho(const Mat2& h, double exceptional_rel, double diag_tol) {
    const double scale = std::max(1.0, h.max_abs());
    if (std::abs(h(0, 0)) > diag_tol * scale || std::abs(h(1, 1)) > diag_tol * scale)
        throw UnsupportedForm("eig_biortho: nonzero diagonal (d_z != 0 family unsupported)");

    const Complex a = h(0, 1);
    const Complex b = h(1, 0);
    const Complex eps = principal_sqrt(a * b);
    if (std::abs(eps) < exceptional_rel * scale)
        throw ExceptionalPoint("eig_biortho: |eps| = " + std::to_string(std::abs(eps)) +
                               " below exceptional-point threshold");

    // sqrt(a/b) and sqrt(ab)/b agree only up to sign across branch cuts;
    // pick the sign that makes (s, 1) the +eps eigenvector.
    Complex s = principal_sqrt(a / b);
    if (std::abs(b * s - eps) > std::abs(b * s + eps)) s = -s;

    // Left vector component, sign-fixed by <w_+|u_+> = 1.
    Complex w = principal_sqrt(std::conj(b) / std::conj(a));
    if (std::abs(std::conj(w) * s - 1.0) > std::abs(std::conj(w) * s + 1.0)) w = -w;

    BiorthoBasis basis;
    basis.e_plus = eps;
    basis.e_minus = -eps;
    basis.u_plus = {s * kInvSqrt2, kInvSqrt2};
    basis.u_minus = {-s * kInvSqrt2, kInvSqrt2};
    basis.w_plus = {w * kInvSqrt2, kInvSqrt2};
    basis.w_minus = {-w * kInvSqrt2, kInvSqrt2};
    return basis;
}

Decomposition decompose(const Vec2& psi, const BiorthoBasis& basis) {
    return {dot(basis.w_plus, psi), dot(basis.w_minus, psi)};
}

Vec2 associated_state(const Vec2& psi, const BiorthoBasis& basis) {
    const auto [cp, cm] = decompose(psi, basis);
    return cp * basis.w_plus + cm * basis.w_minus;
}

Complex biortho_inner(const Vec2& psi, const Vec2& phi, const BiorthoBasis& basis) {
    const auto c = decompose(psi, basis);
    const auto d = decompose(phi, basis);
    return std::conj(d.c_plus) * c.c_plus + std::conj(d.c_minus) * c.c_minus;
}

double transition_probability(const Vec2& psi, const Vec2& phi, const BiorthoBasis& basis,
                              double zero_norm, double residue) {
    const Complex nn_psi = biortho_inner(psi, psi, basis);
    const Complex nn_phi = biortho_inner(phi, phi, basis);
    if (std::abs(nn_psi) < zero_norm || std::abs(nn_phi) < zero_norm)
        throw ZeroNorm("transition_probability: biorthogonal norm below threshold");

    const Complex p = biortho_inner(phi, psi, basis) * biortho_inner(psi, phi, basis) /
                      (nn_psi * nn_phi);
    if (std::abs(p.imag()) > residue)
        throw ComplexResidue("transition_probability: imaginary residue " +
                             std::to_string(p.imag()));
    return std::min(1.0, std::max(0.0, p.real()));
}

std::pair<double, double> projection_probabilities(const Vec2& psi, const BiorthoBasis& basis,
                                                   double zero_norm) {
    const auto c = decompose(psi, basis);
    const double np = std::norm(c.c_plus);
    const double nm = std::norm(c.c_minus);
    const double total = np + nm;
    if (total < zero_norm) throw ZeroNorm("projection_probabilities: zero biorthogonal norm");
    return {np / total, nm / total};
}

Complex naive_left_evolution_diagnostic(const Mat2& hf, const BiorthoBasis& basis_i,
                                        const Vec2& phi, double t) {
    const Vec2 psi_t = traceless_exp(hf, t) * basis_i.u_plus;
    const Vec2 w_s = traceless_exp(hf.adjoint(), t) * basis_i.w_plus;  // the wrong evolution
    const Vec2 phi_assoc = associated_state(phi, basis_i);
    return dot(w_s, phi) * dot(phi_assoc, psi_t) / (dot(w_s, psi_t) * dot(phi_assoc, phi));
}

}  // namespace dqpt
