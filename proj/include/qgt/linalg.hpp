#pragma once

#include <complex>
#include <Eigen/Dense>

#include "qgt/errors.hpp"

namespace qgt {

using complexd = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;

// Dense operators up to this dimension are supported by the eigensolver.
constexpr int kMaxDim = 16;

// Relative threshold below which <psi1|psi2> makes a generalized-expectation
// ratio ill-conditioned (NearOrthogonal).
constexpr double kNearOrthogonalThreshold = 1e-8;
constexpr double kNearOrthogonalThresholdSquared =
    kNearOrthogonalThreshold * kNearOrthogonalThreshold;

// Throws if H is not square, exceeds kMaxDim, or contains NaN/Inf entries.
void validate_matrix(const cmat& h);

enum class GaugeRule {
    LargestComponentRealPositive, // default
    FirstNonzeroRealPositive,
};

// Paired left/right eigenvectors of a pseudo-Hermitian operator with real
// spectrum. Right vectors (columns) are unit norm; left vectors absorb the
// biorthogonal rescaling so that <L_i|R_j> = delta_ij. Energies ascend,
// so column 0 is the ground band.
struct BiorthogonalEigensystem {
    Eigen::VectorXd energies;
    cmat right;
    cmat left;
    double residual = 0.0; // max |<L_i|R_j> - delta_ij|

    int dim() const { return static_cast<int>(energies.size()); }
};

struct EigOptions {
    // Minimum admissible gap between adjacent eigenvalues. Non-positive
    // means automatic: 1e-9 * spectral range, floored at 1e-12 * ||H||_F.
    double gap_tol = 0.0;
    // |Im E| <= reality_tol * max|E| is required of every raw eigenvalue.
    double reality_tol = 1e-10;
};

BiorthogonalEigensystem eig_biorthogonal(const cmat& h, const EigOptions& opt = {});
inline BiorthogonalEigensystem eig_biorthogonal(const cmat& h, double gap_tol) {
    return eig_biorthogonal(h, EigOptions{gap_tol, 1e-10});
}

// Left eigenvectors from the metric relation |L_n> = eta |R_n| up to the
// biorthogonal rescale <L_n|R_n> = 1. If h is supplied, validates
// ||h^dag - eta h eta^-1|| <= 1e-10 ||h|| first.
cmat left_from_right(const cmat& right, const cmat& eta, const cmat* h = nullptr);

// Phase-rotates v so the designated component is real and positive.
// Norm-preserving and idempotent.
cvec gauge_fix(const cvec& v, GaugeRule rule = GaugeRule::LargestComponentRealPositive);

// Gauge-fixes every right vector and applies the inverse-conjugate phase to
// its left partner, preserving <L_i|R_j> = delta_ij.
void gauge_fix(BiorthogonalEigensystem& es,
               GaugeRule rule = GaugeRule::LargestComponentRealPositive);

} // namespace qgt
