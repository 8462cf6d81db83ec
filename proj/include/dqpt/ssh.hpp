#pragma once

#include <cstddef>
#include <string>
#include <utility>

#include "dqpt/numerics.hpp"

namespace dqpt {

/// Model parameters: eta sets intracell/intercell hopping asymmetry,
/// gamma the degree of non-Hermiticity.
struct SshParams {
    double eta = 0.0;
    double gamma = 0.0;
};

enum class Region { I, II, III, IV, V, VI };

std::string region_name(Region r);
Region region_from_name(const std::string& name);

/// Phase classification; `mirrored` marks points with gamma < 0, labeled by
/// reflection of the gamma > 0 diagram.
struct PhaseLabel {
    Region region;
    bool mirrored = false;
    double winding = 0.0;  // multiple of 1/2
};

/// d_k = ((1+eta) + (1-eta) cos k, (1-eta) sin k - i gamma/2, 0).
/// Returns (x_k, y_k); x is real, carried as Complex for uniformity.
std::pair<Complex, Complex> d_vector(const SshParams& p, double k);

/// Momentum block d_k . sigma with d_z = 0: off-diagonal (x - i y, x + i y).
Mat2 block_hamiltonian(const SshParams& p, double k);

/// Principal sqrt of x^2 + y^2; zero exactly on the phase boundaries.
Complex dispersion(const SshParams& p, double k);

/// Winding number w = (w_+ - w_-)/2 where w_+- are the integer windings of
/// the loops x_k +- i y_k about the origin, accumulated over the k grid.
/// Each loop is analytic so the half-integers are exact, not quadrature
/// artifacts. Throws OnBoundary if a loop passes within `origin_tol` of the
/// origin, and NumericsError if a pre-rounding residue exceeds `residue`.
double winding_number(const SshParams& p, std::size_t k_samples = 4096,
                      double origin_tol = tol::boundary,
                      double residue = tol::winding_residue);

/// Sign tests against the gamma = 4 and gamma = +-4 eta boundary lines;
/// winding attached via winding_number. Refuses points within `margin` of a
/// boundary. gamma < 0 is classified by reflection and flagged mirrored.
PhaseLabel classify_phase(const SshParams& p, std::size_t k_samples = 4096,
                          double margin = tol::boundary);

}  // namespace dqpt
