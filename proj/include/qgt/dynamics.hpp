#pragma once

#include <optional>
#include <vector>

#include "qgt/models.hpp"

namespace qgt {

// Quadratic parameter drift along one direction:
//   lambda(t) = lambda_target - dlam e_mu + (v^2 t^2 / 4 dlam) e_mu,
// t in [0, t_f], t_f = 2 dlam / v. Starts at rest, reaches speed v at t_f.
struct RampSchedule {
    ParamPoint lambda_target = ParamPoint::Zero();
    int direction = 0;
    double delta_lambda = M_PI / 2;
    double speed = 1.0; // v, the final ramp speed

    double total_time() const { return 2.0 * delta_lambda / speed; }
    ParamPoint start() const;
    ParamPoint value(double t) const;          // throws TimeOutOfRange
    double parameter_speed(double t) const;    // d lambda_mu / dt
};

enum class Generator { H, HDagger, MinusHDagger };

enum class StepMethod {
    ExpMidpoint, // piecewise exponential, midpoint parameter evaluation (order 2)
    ExpMagnus4,  // piecewise exponential, two Gauss nodes + commutator (order 4)
    RK4,         // fixed-step classic Runge-Kutta
};

struct IntegratorConfig {
    StepMethod method = StepMethod::ExpMagnus4;
    // Requested time step; the actual step is t_f / n with n = round(t_f/dt)
    // so an integer number of steps always spans the ramp. dt <= 0 selects
    // the default t_f / 4000.
    double dt = 0.0;
    double tolerance = 1e-8; // self-convergence target used by tests
    // A single step growing the state by more than this many e-folds is
    // treated as an instability.
    double max_log_growth_per_step = 20.0;
    // Record (t, state) every stride steps; 0 disables trajectory capture.
    int trajectory_stride = 0;
};

int step_count(const RampSchedule& schedule, const IntegratorConfig& config);

struct TrajectorySample {
    double t = 0.0;
    Eigen::Vector2cd state;  // unit norm
    double log_scale = 0.0;  // cumulative rescaling up to time t
};

struct EvolvedState {
    Eigen::Vector2cd final_vector; // unit norm
    double log_scale = 0.0;        // accumulated positive rescaling
    std::vector<TrajectorySample> samples;
    RampSchedule schedule;
    Generator generator = Generator::H;
};

// Integrates i d|psi>/dt = G[lambda(t)] |psi> with G in {H, H^dag, -H^dag},
// renormalizing each step (positive real scale, logged). Generalized
// expectation values are invariant under that rescaling.
EvolvedState evolve(const Eigen::Vector2cd& initial, const HamiltonianFamily& family,
                    const RampSchedule& schedule, Generator generator,
                    const IntegratorConfig& config = {});

struct EvolvedTriple {
    EvolvedState psi;              // right ground state under H
    EvolvedState psi_prime;        // left ground state under H^dag
    EvolvedState psi_double_prime; // left ground state under -H^dag
};

struct GroundStatePrep {
    enum class Mode { Eigensolve, AdiabaticRamp };
    Mode mode = Mode::Eigensolve;
    // AdiabaticRamp: quadratic ramp from the model reference point with this
    // final speed; the adiabatic bound ratio is reported on the result.
    double prep_speed = 0.05;
    ParamPoint reference = ParamPoint::Zero();
};

struct PreparedGround {
    Eigen::Vector2cd right;
    Eigen::Vector2cd left;
    // prep_speed / min(|dE| / |<L1|dH|R0>|) along the prep path; only
    // meaningful for AdiabaticRamp (0 for Eigensolve). Values << 1 satisfy
    // the adiabatic condition.
    double adiabaticity_ratio = 0.0;
};

PreparedGround prepare_ground_state(const HamiltonianFamily& family, const ParamPoint& lam,
                                    const GroundStatePrep& prep = {},
                                    const IntegratorConfig& config = {});

EvolvedTriple prepare_triple(const HamiltonianFamily& family, const ParamPoint& lambda_target,
                             int direction, double delta_lambda, double speed,
                             const IntegratorConfig& config = {},
                             const GroundStatePrep& prep = {});

// First-order adiabatic-perturbation data at time t along a ramp.
struct APTExpansion {
    // Excited-band coefficients a_m, m = 1..N-1 (index 0 of this vector is
    // band 1): a_m = i v(t) <L_m|d_lam R_0> / (E_m - E_0).
    std::vector<complexd> a;
    std::vector<double> theta; // dynamical phases per band, int_0^t E_n
    std::vector<double> phi;   // geometric phases per band (eta-normalized gauge)
    std::vector<double> phi_imag; // residual imaginary parts (reality check)
};

APTExpansion apt_coefficients(const HamiltonianFamily& family, const RampSchedule& schedule,
                              double t, int quadrature_points = 2001);

// Normalized first-order APT state |R_0> + sum_m a_m |R_m> at lambda(t).
// Defined up to one global complex factor; compare projectively.
Eigen::Vector2cd apt_state(const HamiltonianFamily& family, const RampSchedule& schedule,
                           double t);

// sqrt(2 - 2|<u|w>|) for unit vectors: distance modulo a global phase/scale.
double projective_distance(const Eigen::Vector2cd& u, const Eigen::Vector2cd& w);

// Writes recorded trajectory samples as CSV: t, Re/Im of each component,
// log_scale column from the final state.
void write_trajectory_csv(std::ostream& out, const EvolvedState& state);

} // namespace qgt
