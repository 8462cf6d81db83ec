#include "dqpt/ssh.hpp"

#include <cmath>
#include <numbers>

namespace dqpt {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::string region_name(Region r) {
    switch (r) {
        case Region::I: return "I";
        case Region::II: return "II";
        case Region::III: return "III";
        case Region::IV: return "IV";
        case Region::V: return "V";
        case Region::VI: return "VI";
    }
    return "?";
}

Region region_from_name(const std::string& name) {
    if (name == "I") return Region::I;
    if (name == "II") return Region::II;
    if (name == "III") return Region::III;
    if (name == "IV") return Region::IV;
    if (name == "V") return Region::V;
    if (name == "VI") return Region::VI;
    throw ValidationError("unknown region label: " + name);
}

std::pair<Complex, Complex> d_vector(const SshParams& p, double k) {
    const Complex x = (1.0 + p.eta) + (1.0 - p.eta) * std::cos(k);
    const Complex y = Complex((1.0 - p.eta) * std::sin(k), -0.5 * p.gamma);
    return {x, y};
}

Mat2 block_hamiltonian(const SshParams& p, double k) {
    const auto [x, y] = d_vector(p, k);
    const Complex i(0.0, 1.0);
    return {0.0, x - i * y, x + i * y, 0.0};
}

Complex dispersion(const SshParams& p, double k) {
    const auto [x, y] = d_vector(p, k);
    return principal_sqrt(x * x + y * y);
}

namespace {

// Integer winding of an analytic loop about the origin, by accumulating
// principal argument increments over the closed grid.
double loop_winding(const SshParams& p, std::size_t n, bool plus_branch, double origin_tol) {
    const Complex i(0.0, 1.0);
    double acc = 0.0;
    auto point = [&](std::size_t j) {
        const double k = kTwoPi * static_cast<double>(j % n) / static_cast<double>(n);
        const auto [x, y] = d_vector(p, k);
        return plus_branch ? x + i * y : x - i * y;
    };
    Complex prev = point(0);
    if (std::abs(prev) < origin_tol) throw OnBoundary("winding_number: loop passes the origin");
    for (std::size_t j = 1; j <= n; ++j) {
        const Complex cur = point(j);
        if (std::abs(cur) < origin_tol)
            throw OnBoundary("winding_number: loop passes the origin");
        acc += std::arg(cur / prev);
        prev = cur;
    }
    return acc / kTwoPi;
}

}  // namespace

double winding_number(const SshParams& p, std::size_t k_samples, double origin_tol,
                      double residue) {
    if (k_samples < 256) throw ValidationError("winding_number: k_samples must be >= 256");
    const double wp = loop_winding(p, k_samples, true, origin_tol);
    const double wm = loop_winding(p, k_samples, false, origin_tol);
    const double wp_round = std::round(wp);
    const double wm_round = std::round(wm);
    if (std::abs(wp - wp_round) > residue || std::abs(wm - wm_round) > residue)
        throw NumericsError("winding_number: pre-rounding residue exceeds tolerance");
    return 0.5 * (wp_round - wm_round);
}

PhaseLabel classify_phase(const SshParams& p, std::size_t k_samples, double margin) {
    const bool mirrored = p.gamma < 0.0;
    const double g = std::abs(p.gamma);
    const double eta = p.eta;

    if (std::abs(g - 4.0) < margin || std::abs(g - 4.0 * eta) < margin ||
        std::abs(g + 4.0 * eta) < margin)
        throw OnBoundary("classify_phase: point within margin of a phase boundary");

    Region r;
    if (g > 4.0)
        r = (eta < -g / 4.0) ? Region::I : (eta > g / 4.0) ? Region::III : Region::II;
    else
        r = (eta < -g / 4.0) ? Region::IV : (eta > g / 4.0) ? Region::VI : Region::V;

    PhaseLabel label;
    label.region = r;
    label.mirrored = mirrored;
    label.winding = winding_number({eta, g}, k_samples, margin);
    return label;
}

}  // namespace dqpt
