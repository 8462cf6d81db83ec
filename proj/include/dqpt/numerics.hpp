#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace dqpt {

using Complex = std::complex<double>;

// Default tolerances. Every routine that consumes one of these accepts it as
// a parameter so callers can tighten or relax individual checks.
namespace tol {
inline constexpr double trace = 1e-12;            // traceless precondition
inline constexpr double exceptional_rel = 1e-9;   // |eps| < rel * |h| is an exceptional point
inline constexpr double residual = 1e-10;         // eigen/biorthonormality residuals
inline constexpr double real_residue = 1e-8;      // assert-then-drop imaginary parts
inline constexpr double zero_norm = 1e-14;        // biorthogonal self-inner-product floor
inline constexpr double quad_residue = 1e-6;      // dynamical-phase imaginary residue
inline constexpr double atanh_singular = 1e-12;   // |m -+ 1| below this has no finite zero
inline constexpr double boundary = 1e-9;          // phase-boundary refusal margin
inline constexpr double winding_residue = 0.01;   // max pre-rounding winding defect
}  // namespace tol

struct NumericsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonTraceless : NumericsError {
    using NumericsError::NumericsError;
};
struct UnsupportedForm : NumericsError {
    using NumericsError::NumericsError;
};
struct ExceptionalPoint : NumericsError {
    using NumericsError::NumericsError;
};
struct ZeroNorm : NumericsError {
    using NumericsError::NumericsError;
};
struct ComplexResidue : NumericsError {
    using NumericsError::NumericsError;
};
struct AtanhSingular : NumericsError {
    using NumericsError::NumericsError;
};
struct QuadratureResidue : NumericsError {
    using NumericsError::NumericsError;
};
struct PhaseStepTooLarge : NumericsError {
    using NumericsError::NumericsError;
};
struct GridTooCoarse : NumericsError {
    using NumericsError::NumericsError;
};
struct OnBoundary : NumericsError {
    using NumericsError::NumericsError;
};
struct ValidationError : NumericsError {
    using NumericsError::NumericsError;
};

/// Two-component complex state vector, basis {a,b}.
struct Vec2 {
    Complex c0{}, c1{};

    Vec2() = default;
    Vec2(Complex a, Complex b) : c0(a), c1(b) {}

    Vec2 operator+(const Vec2& o) const { return {c0 + o.c0, c1 + o.c1}; }
    Vec2 operator-(const Vec2& o) const { return {c0 - o.c0, c1 - o.c1}; }
    Vec2 operator*(Complex s) const { return {c0 * s, c1 * s}; }
};
inline Vec2 operator*(Complex s, const Vec2& v) { return v * s; }

/// Euclidean inner product, conjugate-linear in the first argument.
inline Complex dot(const Vec2& x, const Vec2& y) {
    return std::conj(x.c0) * y.c0 + std::conj(x.c1) * y.c1;
}

inline double norm2(const Vec2& v) { return std::norm(v.c0) + std::norm(v.c1); }

/// 2x2 complex matrix, row-major, basis {a,b}: m(r,c) is row r, column c.
struct Mat2 {
    std::array<Complex, 4> e{};

    Mat2() = default;
    Mat2(Complex m00, Complex m01, Complex m10, Complex m11) : e{m00, m01, m10, m11} {}

    Complex& operator()(int r, int c) { return e[2 * r + c]; }
    const Complex& operator()(int r, int c) const { return e[2 * r + c]; }

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    Mat2 adjoint() const {
        return {std::conj(e[0]), std::conj(e[2]), std::conj(e[1]), std::conj(e[3])};
    }

    Complex trace() const { return e[0] + e[3]; }
    Complex det() const { return e[0] * e[3] - e[1] * e[2]; }

    /// Max entry magnitude; the scale used by relative thresholds.
    double max_abs() const {
        double m = 0.0;
        for (const auto& z : e) m = std::max(m, std::abs(z));
        return m;
    }

    Mat2 operator+(const Mat2& o) const {
        return {e[0] + o.e[0], e[1] + o.e[1], e[2] + o.e[2], e[3] + o.e[3]};
    }
    Mat2 operator*(Complex s) const { return {e[0] * s, e[1] * s, e[2] * s, e[3] * s}; }
    Mat2 operator*(const Mat2& o) const {
        return {e[0] * o.e[0] + e[1] * o.e[2], e[0] * o.e[1] + e[1] * o.e[3],
                e[2] * o.e[0] + e[3] * o.e[2], e[2] * o.e[1] + e[3] * o.e[3]};
    }
};

inline Vec2 mat_vec(const Mat2& m, const Vec2& v) {
    return {m(0, 0) * v.c0 + m(0, 1) * v.c1, m(1, 0) * v.c0 + m(1, 1) * v.c1};
}
inline Vec2 operator*(const Mat2& m, const Vec2& v) { return mat_vec(m, v); }

/// Principal square root: Re >= 0, and Im >= 0 when Re == 0.
/// std::sqrt already picks this branch except for a negative real input
/// carrying a -0 imaginary part, which it maps to the lower sheet.
inline Complex principal_sqrt(Complex z) {
    Complex w = std::sqrt(z);
    if (w.real() < 0.0 || (w.real() == 0.0 && w.imag() < 0.0)) w = -w;
    return w;
}

/// Squared eigenvalue invariant of a traceless 2x2 matrix: eps^2 = -det(h).
inline Complex eps_squared(const Mat2& h) { return -h.det(); }

/// Evolution operator U(t) = exp(-i h t) for traceless h, via
/// U = cos(eps t) I - i sin(eps t) h / eps with eps = sqrt(-det h).
/// The formula is branch-independent (cos even, sin(x)/x even), and the
/// eps -> 0 limit is taken by series so exceptional points evolve correctly.
inline Mat2 traceless_exp(const Mat2& h, double t, double trace_tol = tol::trace) {
    if (std::abs(h.trace()) > trace_tol)
        throw NonTraceless("traceless_exp: |trace| = " + std::to_string(std::abs(h.trace())));
    const Complex eps = principal_sqrt(eps_squared(h));
    const Complex x = eps * t;
    Complex c, s_over_eps;
    if (std::abs(x) < 1e-4) {
        const Complex x2 = x * x;
        c = 1.0 - x2 / 2.0 + x2 * x2 / 24.0;
        s_over_eps = t * (1.0 - x2 / 6.0 + x2 * x2 / 120.0);
    } else {
        c = std::cos(x);
        s_over_eps = std::sin(x) / eps;
    }
    const Complex f = Complex(0.0, -1.0) * s_over_eps;
    return {c + f * h(0, 0), f * h(0, 1), f * h(1, 0), c + f * h(1, 1)};
}

}  // namespace dqpt
