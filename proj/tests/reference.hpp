#pragma once

// Test-only reference implementations, kept deliberately independent of the
// library's closed-form code paths: a Taylor evolution operator, a dense
// winding accumulator, and a real-arithmetic Hermitian quench oracle.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "dqpt/numerics.hpp"
#include "dqpt/ssh.hpp"

namespace ref {

using dqpt::Complex;
using dqpt::Mat2;
using dqpt::Vec2;

/// exp(-i h t) by scaling-and-squaring on a plain Taylor series.
inline Mat2 series_evolution(const Mat2& h, double t) {
    Mat2 a = h * Complex(0.0, -t);
    int squarings = 0;
    while (a.max_abs() > 0.25 && squarings < 60) {
        a = a * Complex(0.5, 0.0);
        ++squarings;
    }
    Mat2 result = Mat2::identity();
    Mat2 term = Mat2::identity();
    double factorial = 1.0;
    for (int n = 1; n <= 24; ++n) {
        term = term * a;
        factorial *= n;
        result = result + term * Complex(1.0 / factorial, 0.0);
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

/// Winding of the loop x_k + sign * i y_k about the origin, dense grid.
inline double loop_winding_dense(const dqpt::SshParams& p, int sign, std::size_t samples) {
    const Complex i(0.0, 1.0);
    double acc = 0.0;
    Complex prev;
    for (std::size_t j = 0; j <= samples; ++j) {
        const double k =
            2.0 * std::numbers::pi * static_cast<double>(j % samples) / static_cast<double>(samples);
        const auto [x, y] = dqpt::d_vector(p, k);
        const Complex cur = x + static_cast<double>(sign) * i * y;
        if (j > 0) acc += std::arg(cur / prev);
        prev = cur;
    }
    return acc / (2.0 * std::numbers::pi);
}

inline double winding_dense(const dqpt::SshParams& p, std::size_t samples = 1 << 16) {
    return 0.5 * (loop_winding_dense(p, +1, samples) - loop_winding_dense(p, -1, samples));
}

/// Hermitian (gamma = 0) quench oracle in real d-vector arithmetic.
/// Per mode: g = cos^2(e_f t) + (c sin(e_f t))^2 with c = d_i . d_f (unit
/// vectors), phi_G = arg(cos(e_f t) + i c sin(e_f t)) - e_f c t.
struct HermitianQuenchOracle {
    double eta_i, eta_f;

    struct Mode {
        double ef, c;
    };

    Mode mode(double k) const {
        const double xi = (1.0 + eta_i) + (1.0 - eta_i) * std::cos(k);
        const double yi = (1.0 - eta_i) * std::sin(k);
        const double xf = (1.0 + eta_f) + (1.0 - eta_f) * std::cos(k);
        const double yf = (1.0 - eta_f) * std::sin(k);
        const double ei = std::hypot(xi, yi);
        const double ef = std::hypot(xf, yf);
        return {ef, (xi * xf + yi * yf) / (ei * ef)};
    }

    double g(double k, double t) const {
        const Mode m = mode(k);
        const double c = std::cos(m.ef * t), s = std::sin(m.ef * t);
        return c * c + m.c * m.c * s * s;
    }

    double phi_g(double k, double t) const {
        const Mode m = mode(k);
        return std::atan2(m.c * std::sin(m.ef * t), std::cos(m.ef * t)) - m.ef * m.c * t;
    }

    std::vector<double> rate(const std::vector<double>& ts, std::size_t n_cells) const {
        std::vector<double> lr(ts.size(), 0.0);
        for (std::size_t j = 0; j < n_cells; ++j) {
            const double k =
                2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_cells);
            for (std::size_t t = 0; t < ts.size(); ++t) lr[t] -= std::log(g(k, ts[t]));
        }
        for (auto& v : lr) v /= static_cast<double>(n_cells);
        return lr;
    }

    std::vector<double> dtop(const std::vector<double>& ts, std::size_t n_cells) const {
        std::vector<double> nu(ts.size(), 0.0);
        const double two_pi = 2.0 * std::numbers::pi;
        for (std::size_t t = 0; t < ts.size(); ++t) {
            double acc = 0.0;
            double first = 0.0, prev = 0.0;
            for (std::size_t j = 0; j < n_cells; ++j) {
                const double k = two_pi * static_cast<double>(j) / static_cast<double>(n_cells);
                const double cur = phi_g(k, ts[t]);
                if (j == 0) {
                    first = cur;
                } else {
                    double d = std::remainder(cur - prev, two_pi);
                    acc += d;
                }
                prev = cur;
            }
            acc += std::remainder(first - prev, two_pi);
            nu[t] = acc / two_pi;
        }
        return nu;
    }
};

// ---- random inputs ---------------------------------------------------------

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(0x5eed5eedULL);
    return gen;
}

inline double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline Complex random_complex(double scale = 5.0) {
    return {uniform(-scale, scale), uniform(-scale, scale)};
}

inline Mat2 random_traceless(double scale = 5.0) {
    const Complex d = random_complex(scale);
    return {d, random_complex(scale), random_complex(scale), -d};
}

/// Random member of the d_z = 0 family with both off-diagonals away from 0.
inline Mat2 random_offdiagonal(double scale = 5.0) {
    for (;;) {
        const Complex a = random_complex(scale);
        const Complex b = random_complex(scale);
        if (std::abs(a) > 0.3 && std::abs(b) > 0.3 &&
            std::abs(dqpt::principal_sqrt(a * b)) > 1e-3 * scale)
            return {0.0, a, b, 0.0};
    }
}

inline Vec2 random_state(double scale = 2.0) {
    for (;;) {
        const Vec2 v{random_complex(scale), random_complex(scale)};
        if (dqpt::norm2(v) > 0.1) return v;
    }
}

}  // namespace ref
