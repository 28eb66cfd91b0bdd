#pragma once

#include <string>
#include <vector>

#include "qgt/dynamics.hpp"
#include "qgt/qgt_reference.hpp"

namespace qgt {

struct GeneralizedExpectation {
    complexd value;
    complexd numerator;
    complexd denominator;
};

// <psi1|A|psi2> / <psi1|psi2>. Invariant under nonzero rescaling of either
// state. Throws NearOrthogonal when |<psi1|psi2>| < 1e-8 ||psi1|| ||psi2||.
GeneralizedExpectation gev(const cvec& psi1, const cvec& psi2, const cmat& a);

struct ConstantTerm {
    complexd value; // <L_0|(-dH_mu)|R_0> / <L_0|R_0>
};

// Ground-state generalized expectation of the force operator; equals
// -dE_0/dlambda_mu by the biorthogonal Hellmann-Feynman relation.
ConstantTerm force_constant(const HamiltonianFamily& family, const ParamPoint& lam, int mu);

enum class Scheme { EnergyFluctuation, GeneralizedForce };

struct SchemeConfig {
    double v = 1.0;
    double delta_lambda = M_PI / 2;
    IntegratorConfig integrator;
    GroundStatePrep prep;
};

struct QGTEstimate {
    // Scheme 1 fills q (complex). Scheme 2 fills g or f (the other is NaN).
    complexd q{0.0, 0.0};
    double g = std::numeric_limits<double>::quiet_NaN();
    double f = std::numeric_limits<double>::quiet_NaN();
    ParamPoint lambda_target = ParamPoint::Zero();
    int mu = 0, nu = 0;
    Scheme scheme = Scheme::EnergyFluctuation;
    double v = 0.0;
    double delta_lambda = 0.0;
    double measurement_time = 0.0; // t_f
};

// Scheme 1: gev(psi'_mu, psi_nu, (H(tar) - E_0)^2) / v^2 ~ Q^0_{mu nu}.
QGTEstimate scheme1_qgt(const HamiltonianFamily& family, const ParamPoint& lambda_target,
                        int mu, int nu, const SchemeConfig& config = {});

// Scheme 2 curvature: Re[gev(psi'_nu, psi_nu, f_mu) - <f_mu>] / v ~ F^0_{mu nu}.
QGTEstimate scheme2_curvature(const HamiltonianFamily& family, const ParamPoint& lambda_target,
                              int mu, int nu, const SchemeConfig& config = {});

// Scheme 2 metric: Im[gev(psi''_nu, psi_nu, f_mu) - <f_mu>] / 2v ~ g^0_{mu nu}.
QGTEstimate scheme2_metric(const HamiltonianFamily& family, const ParamPoint& lambda_target,
                           int mu, int nu, const SchemeConfig& config = {});

// The four components reported per scan point, in CSV column order:
// Q_{mu mu}, Q_{nu nu}, Re Q_{nu mu}, Im Q_{nu mu} with mu = first parameter.
constexpr int kScanComponents = 4;

struct ScanRow {
    ParamPoint lambda = ParamPoint::Zero();
    std::array<double, kScanComponents> estimate{};
    std::array<double, kScanComponents> reference{};
    std::array<double, kScanComponents> abs_error{};
    std::string failure; // nonempty when this point hit a hard error
};

struct ScanResult {
    std::vector<ScanRow> rows;
    std::array<std::string, kScanComponents> component_names;
    Scheme scheme = Scheme::EnergyFluctuation;
    // Max |reference| per component over the scan; basis of the error budget.
    std::array<double, kScanComponents> reference_scale{};
};

// Runs one scheme over a parameter grid (points differ in lambda only);
// per-point failures are recorded in the row and the scan continues.
ScanResult qgt_scan(const HamiltonianFamily& family, const std::vector<ParamPoint>& grid,
                    Scheme scheme, const SchemeConfig& config = {}, int workers = 0);

// Error budget per component: 5% of the per-scan max reference magnitude,
// absolute floor 0.02 for components that vanish identically.
std::array<double, kScanComponents> error_budget(const ScanResult& scan,
                                                 double fraction = 0.05,
                                                 double zero_floor = 0.02);

struct ChernScanRow {
    double delta2 = 0.0;
    double delta2_over_delta1 = 0.0;
    double c_scheme1 = std::numeric_limits<double>::quiet_NaN();
    double c_scheme2 = std::numeric_limits<double>::quiet_NaN();
    double c_analytic = std::numeric_limits<double>::quiet_NaN();
    bool near_critical = false;
    std::string failure;
};

// Chern number per Delta2 value: measured F_{theta phi} on an n_theta grid
// via both schemes, trapezoid-integrated, against the analytic result.
// Points with |Delta2/Delta1 - 1| < critical_window are flagged.
std::vector<ChernScanRow> chern_scan(const ModelI& base, double q,
                                     const std::vector<double>& delta2_values, int n_theta,
                                     const SchemeConfig& config = {}, int workers = 0,
                                     double critical_window = 0.1);

} // namespace qgt
