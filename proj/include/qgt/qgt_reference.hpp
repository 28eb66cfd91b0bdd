#pragma once

#include "qgt/models.hpp"

namespace qgt {

// One complex QGT component Q^band_{mu nu} at a parameter point.
struct QGTComponent {
    complexd value;
    int band = 0;
    int mu = 0, nu = 0;
    ParamPoint lambda = ParamPoint::Zero();
};

struct MetricCurvaturePair {
    double g = 0.0; // quantum metric component
    double f = 0.0; // Berry curvature component
};

struct ChernResult {
    double c = 0.0;
    int grid_points = 0;
    // Model I scan coordinate; NaN when not applicable.
    double delta2_over_delta1 = std::numeric_limits<double>::quiet_NaN();
};

// Spectral-representation QGT: sum over m != band of
//   <L_band|dH_mu|R_m><L_m|dH_nu|R_band> / (E_band - E_m)^2.
// Gauge-independent; throws DegenerateSpectrum through the eigensolve.
QGTComponent qgt_spectral(const HamiltonianFamily& family, const ParamPoint& lam,
                          int mu, int nu, int band = 0);

// Same contraction on a caller-supplied eigensystem (used by gauge-invariance
// property tests, which rescale eigenvector pairs by hand).
complexd qgt_spectral_from(const BiorthogonalEigensystem& es, const cmat& dh_mu,
                           const cmat& dh_nu, int band);

struct FdOptions {
    double step = 1e-4;
    GaugeRule gauge = GaugeRule::LargestComponentRealPositive;
    // With richardson = true the value is extrapolated from steps h and h/2,
    // and StepTooLarge is thrown when the two disagree beyond
    // consistency_tol * (|Q| + consistency_floor).
    bool richardson = false;
    double consistency_tol = 1e-2;
    double consistency_floor = 1e-6;
};

// Finite-difference oracle on gauge-fixed eigenvectors, first line of the
// QGT definition: <d_mu L|d_nu R> - <d_mu L|R><L|d_nu R>. Independent of the
// spectral path; O(h^2) accurate.
QGTComponent qgt_fd(const HamiltonianFamily& family, const ParamPoint& lam,
                    int mu, int nu, int band = 0, const FdOptions& opt = {});

// g = Re[(Q_mn + Q_nm)/2], f = Re[i (Q_mn - Q_nm)]. Exactly symmetric /
// antisymmetric by construction; for Hermitian-QGT inputs this reduces to
// g = Re Q_mn, f = -2 Im Q_mn.
MetricCurvaturePair metric_curvature(const QGTComponent& q_munu,
                                     const QGTComponent& q_numu);

// C = int_0^pi F_{theta phi}(theta) dtheta by composite trapezoid on a
// uniform n_theta-point grid, with F from the spectral formula. Asserts the
// phi-independence of F numerically at one interior grid point.
ChernResult chern_number(const HamiltonianFamily& family, double phi_fixed,
                         int n_theta);

// Berry curvature F_{mu nu} for one band from the spectral formula.
double berry_curvature(const HamiltonianFamily& family, const ParamPoint& lam,
                       int mu, int nu, int band = 0);

} // namespace qgt
