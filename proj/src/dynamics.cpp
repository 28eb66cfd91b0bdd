#include "qgt/dynamics.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "qgt/format.hpp"

namespace qgt {

namespace {

constexpr complexd kI{0.0, 1.0};

// exp(M) for a 2x2 complex matrix via the traceless decomposition
// M = s I + A, A^2 = delta^2 I: exp(M) = e^s [cosh(delta) I + sinh(delta)/delta A].
Eigen::Matrix2cd expm2(const Eigen::Matrix2cd& m) {
    const complexd half_tr = 0.5 * (m(0, 0) + m(1, 1));
    Eigen::Matrix2cd a = m;
    a(0, 0) -= half_tr;
    a(1, 1) -= half_tr;
    const complexd delta2 = a(0, 0) * a(0, 0) + a(0, 1) * a(1, 0);
    const complexd delta = std::sqrt(delta2);
    complexd ch, sh_over;
    if (std::abs(delta) < 1e-4) {
        // series; relative error ~ |delta|^6
        ch = 1.0 + delta2 * (0.5 + delta2 / 24.0);
        sh_over = 1.0 + delta2 * (1.0 / 6.0 + delta2 / 120.0);
    } else {
        ch = std::cosh(delta);
        sh_over = std::sinh(delta) / delta;
    }
    Eigen::Matrix2cd out = sh_over * a;
    out(0, 0) += ch;
    out(1, 1) += ch;
    return std::exp(half_tr) * out;
}

Eigen::Matrix2cd apply_generator(const Eigen::Matrix2cd& h, Generator gen) {
    switch (gen) {
        case Generator::H: return h;
        case Generator::HDagger: return h.adjoint();
        case Generator::MinusHDagger: return -h.adjoint();
    }
    throw Error("unknown generator");
}

} // namespace

namespace {

void check_ramp(const RampSchedule& ramp) {
    if (ramp.direction != 0 && ramp.direction != 1)
        throw UnknownDirection("ramp direction must be 0 or 1");
    if (!(ramp.delta_lambda > 0.0) || !(ramp.speed > 0.0))
        throw Error("ramp requires positive delta_lambda and speed");
}

} // namespace

ParamPoint RampSchedule::start() const {
    check_ramp(*this);
    ParamPoint p = lambda_target;
    p(direction) -= delta_lambda;
    return p;
}

ParamPoint RampSchedule::value(double t) const {
    check_ramp(*this);
    const double tf = total_time();
    if (t < -1e-12 * tf || t > tf * (1.0 + 1e-12))
        throw TimeOutOfRange("ramp evaluated outside [0, t_f]");
    ParamPoint p = lambda_target;
    p(direction) += -delta_lambda + speed * speed * t * t / (4.0 * delta_lambda);
    return p;
}

double RampSchedule::parameter_speed(double t) const {
    const double tf = total_time();
    if (t < -1e-12 * tf || t > tf * (1.0 + 1e-12))
        throw TimeOutOfRange("ramp speed evaluated outside [0, t_f]");
    return speed * speed * t / (2.0 * delta_lambda);
}

int step_count(const RampSchedule& schedule, const IntegratorConfig& config) {
    if (config.dt <= 0.0)
        return 4000;
    const double tf = schedule.total_time();
    return std::max(1, static_cast<int>(std::llround(tf / config.dt)));
}

EvolvedState evolve(const Eigen::Vector2cd& initial, const HamiltonianFamily& family,
                    const RampSchedule& schedule, Generator generator,
                    const IntegratorConfig& config) {
    const double init_norm = initial.norm();
    if (init_norm == 0.0)
        throw ZeroVector("evolve: zero initial state");

    const int n_steps = step_count(schedule, config);
    const double tf = schedule.total_time();
    const double dt = tf / n_steps;

    auto gen_at = [&](double t) {
        return apply_generator(family.hamiltonian(schedule.value(t)), generator);
    };

    EvolvedState out;
    out.schedule = schedule;
    out.generator = generator;
    Eigen::Vector2cd psi = initial / init_norm;
    double log_scale = std::log(init_norm);

    if (config.trajectory_stride > 0)
        out.samples.push_back({0.0, psi, log_scale});

    static const double gauss_lo = 0.5 - std::sqrt(3.0) / 6.0;
    static const double gauss_hi = 0.5 + std::sqrt(3.0) / 6.0;

    for (int k = 0; k < n_steps; ++k) {
        const double t0 = k * dt;
        switch (config.method) {
            case StepMethod::ExpMidpoint: {
                const Eigen::Matrix2cd g = gen_at(t0 + 0.5 * dt);
                psi = expm2(-kI * dt * g) * psi;
                break;
            }
            case StepMethod::ExpMagnus4: {
                const Eigen::Matrix2cd a1 = -kI * dt * gen_at(t0 + gauss_lo * dt);
                const Eigen::Matrix2cd a2 = -kI * dt * gen_at(t0 + gauss_hi * dt);
                const Eigen::Matrix2cd omega =
                    0.5 * (a1 + a2) + (std::sqrt(3.0) / 12.0) * (a2 * a1 - a1 * a2);
                psi = expm2(omega) * psi;
                break;
            }
            case StepMethod::RK4: {
                auto f = [&](double t, const Eigen::Vector2cd& y) -> Eigen::Vector2cd {
                    return -kI * (gen_at(t) * y);
                };
                const Eigen::Vector2cd k1 = f(t0, psi);
                const Eigen::Vector2cd k2 = f(t0 + 0.5 * dt, psi + 0.5 * dt * k1);
                const Eigen::Vector2cd k3 = f(t0 + 0.5 * dt, psi + 0.5 * dt * k2);
                const Eigen::Vector2cd k4 = f(std::min(t0 + dt, tf), psi + dt * k3);
                psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                break;
            }
        }

        const double s = psi.norm();
        if (!(s > 0.0) || !std::isfinite(s) ||
            std::abs(std::log(s)) > config.max_log_growth_per_step) {
            std::ostringstream msg;
            msg << "evolve: step " << k << " scale factor " << s
                << " indicates instability (dt = " << dt << ")";
            throw StepRejected(msg.str());
        }
        psi /= s;
        log_scale += std::log(s);

        if (config.trajectory_stride > 0 &&
            ((k + 1) % config.trajectory_stride == 0 || k + 1 == n_steps))
            out.samples.push_back({(k + 1) * dt, psi, log_scale});
    }

    out.final_vector = psi;
    out.log_scale = log_scale;
    return out;
}

namespace {

// Straight-line quadratic ramp used for ground-state preparation: starts at
// rest, reaches `speed` (in parameter arc length) at arrival.
struct PathRamp {
    ParamPoint from, to;
    double speed;

    double length() const { return (to - from).norm(); }
    double total_time() const { return 2.0 * length() / speed; }
    ParamPoint at(double t) const {
        const double d = length();
        const double s = speed * speed * t * t / (4.0 * d);
        return from + (to - from) * (s / d);
    }
};

} // namespace

PreparedGround prepare_ground_state(const HamiltonianFamily& family, const ParamPoint& lam,
                                    const GroundStatePrep& prep,
                                    const IntegratorConfig& config) {
    if (prep.mode == GroundStatePrep::Mode::Eigensolve ||
        (lam - prep.reference).norm() < 1e-14) {
        const BiorthogonalEigensystem es = family.eigensystem(lam);
        return {es.right.col(0), es.left.col(0), 0.0};
    }
    if (!(prep.prep_speed > 0.0))
        throw Error("prepare_ground_state: prep_speed must be positive");

    const PathRamp path{prep.reference, lam, prep.prep_speed};
    const ParamPoint dir = (path.to - path.from) / path.length();
    const double tf = path.total_time();
    const int n_steps = std::max(1000, static_cast<int>(std::llround(
                                           tf / (config.dt > 0 ? config.dt : tf / 4000))));
    const double dt = tf / n_steps;

    // Adiabatic speed bound: |v| << min |dE| / |<L1|dH|R0>| along the path.
    double min_bound = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 64; ++k) {
        const ParamPoint p = path.at(tf * k / 64.0);
        const BiorthogonalEigensystem es = family.eigensystem(p);
        const Eigen::Matrix2cd dh =
            dir(0) * family.parameter_derivative(p, 0) + dir(1) * family.parameter_derivative(p, 1);
        const double gap = es.energies(1) - es.energies(0);
        const double coupling = std::abs(es.left.col(1).dot(dh * es.right.col(0)));
        if (coupling > 0.0)
            min_bound = std::min(min_bound, gap / coupling);
    }

    const BiorthogonalEigensystem start = family.eigensystem(path.from);
    Eigen::Vector2cd right = start.right.col(0);
    Eigen::Vector2cd left = start.left.col(0).normalized();
    static const double gauss_lo = 0.5 - std::sqrt(3.0) / 6.0;
    static const double gauss_hi = 0.5 + std::sqrt(3.0) / 6.0;
    for (int k = 0; k < n_steps; ++k) {
        const double t0 = k * dt;
        auto step = [&](Eigen::Vector2cd& psi, bool dagger) {
            auto g = [&](double t) {
                const Eigen::Matrix2cd h = family.hamiltonian(path.at(t));
                return dagger ? Eigen::Matrix2cd(h.adjoint()) : h;
            };
            const Eigen::Matrix2cd a1 = -kI * dt * g(t0 + gauss_lo * dt);
            const Eigen::Matrix2cd a2 = -kI * dt * g(t0 + gauss_hi * dt);
            psi = expm2(0.5 * (a1 + a2) + (std::sqrt(3.0) / 12.0) * (a2 * a1 - a1 * a2)) * psi;
            psi.normalize();
        };
        step(right, false);
        step(left, true);
    }

    PreparedGround out;
    out.right = right;
    out.left = left;
    out.adiabaticity_ratio = prep.prep_speed / min_bound;
    return out;
}

EvolvedTriple prepare_triple(const HamiltonianFamily& family, const ParamPoint& lambda_target,
                             int direction, double delta_lambda, double speed,
                             const IntegratorConfig& config, const GroundStatePrep& prep) {
    if (direction != 0 && direction != 1)
        throw UnknownDirection("prepare_triple: direction must be 0 or 1");
    RampSchedule schedule{lambda_target, direction, delta_lambda, speed};
    const PreparedGround ground = prepare_ground_state(family, schedule.start(), prep, config);

    EvolvedTriple triple{
        evolve(ground.right, family, schedule, Generator::H, config),
        evolve(ground.left, family, schedule, Generator::HDagger, config),
        evolve(ground.left, family, schedule, Generator::MinusHDagger, config),
    };
    return triple;
}

namespace {

// Eigensystem along the ramp in the eta-normalized gauge: <R|eta|R> = 1 with
// L = eta R exactly, so Re<L|dR/dt> = (1/2) d/dt <R|eta|R> vanishes
// identically and the geometric phase is real. Phases are smoothed by
// aligning every frame against the initial one (not the previous one, which
// would be parallel transport and make the connection vanish trivially).
struct GaugedFrame {
    Eigen::Matrix2cd right; // columns per band
    Eigen::Matrix2cd left;
    Eigen::Vector2d energies;
};

GaugedFrame eta_gauged(const HamiltonianFamily& family, const ParamPoint& lam,
                       const GaugedFrame* reference) {
    const BiorthogonalEigensystem es = family.eigensystem(lam);
    GaugedFrame frame;
    frame.energies = es.energies;
    for (int n = 0; n < 2; ++n) {
        Eigen::Vector2cd r = es.right.col(n);
        const double eta_norm = std::real(r.dot(family.eta() * r));
        r /= std::sqrt(eta_norm); // eta is positive definite for q > 0
        if (reference != nullptr) {
            const complexd ov = reference->right.col(n).dot(family.eta() * r);
            if (std::abs(ov) > 1e-12)
                r *= std::conj(ov) / std::abs(ov);
        } else {
            int idx = 0;
            r.cwiseAbs().maxCoeff(&idx);
            r *= std::abs(r(idx)) / r(idx);
        }
        frame.right.col(n) = r;
        frame.left.col(n) = family.eta() * r;
    }
    return frame;
}

} // namespace

APTExpansion apt_coefficients(const HamiltonianFamily& family, const RampSchedule& schedule,
                              double t, int quadrature_points) {
    const double tf = schedule.total_time();
    if (t < 0.0 || t > tf * (1.0 + 1e-12))
        throw TimeOutOfRange("apt_coefficients: t outside [0, t_f]");
    int n_pts = std::max(5, quadrature_points);
    if (n_pts % 2 == 0)
        ++n_pts; // composite Simpson needs an even interval count

    APTExpansion out;

    // a_m at time t via the force identity
    // <L_m|d_lam R_0> = <L_m|dH|R_0> / (E_0 - E_m).
    {
        const ParamPoint lam = schedule.value(t);
        const BiorthogonalEigensystem es = family.eigensystem(lam);
        const Eigen::Matrix2cd dh = family.parameter_derivative(lam, schedule.direction);
        const double v_t = schedule.parameter_speed(t);
        for (int m = 1; m < es.dim(); ++m) {
            const double gap = es.energies(m) - es.energies(0);
            const complexd mat = es.left.col(m).dot(dh * es.right.col(0));
            out.a.push_back(-kI * v_t * mat / (gap * gap));
        }
    }

    // Dynamical and geometric phases by composite Simpson over [0, t].
    const double h = (n_pts > 1) ? t / (n_pts - 1) : 0.0;
    std::vector<GaugedFrame> frames;
    frames.reserve(n_pts);
    for (int k = 0; k < n_pts; ++k) {
        const double tk = std::min(k * h, tf);
        frames.push_back(eta_gauged(family, schedule.value(tk), k > 0 ? &frames[0] : nullptr));
    }

    out.theta.assign(2, 0.0);
    out.phi.assign(2, 0.0);
    out.phi_imag.assign(2, 0.0);
    if (h == 0.0)
        return out;

    auto simpson = [&](auto&& f) {
        auto acc = f(0) + f(n_pts - 1);
        for (int k = 1; k < n_pts - 1; ++k)
            acc += f(k) * ((k % 2 == 1) ? 4.0 : 2.0);
        return acc * (h / 3.0);
    };

    for (int n = 0; n < 2; ++n) {
        out.theta[n] = simpson([&](int k) { return frames[k].energies(n); });

        // <L_n | dR_n/dt> from fourth-order five-point stencils on the gauged
        // frames; the reality of the geometric phase is asserted at 1e-10, so
        // second-order differences are not accurate enough here.
        auto connection = [&](int k) -> complexd {
            static constexpr double kForward[5] = {-25, 48, -36, 16, -3};
            static constexpr double kOffset1[5] = {-3, -10, 18, -6, 1};
            static constexpr double kCentral[5] = {1, -8, 0, 8, -1};
            const double* weights = kCentral;
            int base = k - 2;
            bool mirrored = false;
            if (k == 0) {
                weights = kForward;
                base = 0;
            } else if (k == 1) {
                weights = kOffset1;
                base = 0;
            } else if (k == n_pts - 2) {
                weights = kOffset1;
                base = n_pts - 1;
                mirrored = true;
            } else if (k == n_pts - 1) {
                weights = kForward;
                base = n_pts - 1;
                mirrored = true;
            }
            Eigen::Vector2cd dr = Eigen::Vector2cd::Zero();
            for (int j = 0; j < 5; ++j) {
                const int idx = mirrored ? base - j : base + j;
                const double w = mirrored ? -weights[j] : weights[j];
                dr += w * frames[idx].right.col(n);
            }
            dr /= 12.0 * h;
            return frames[k].left.col(n).dot(dr);
        };
        const complexd phase =
            -kI * simpson([&](int k) { return connection(k); });
        out.phi[n] = phase.real();
        out.phi_imag[n] = phase.imag();
    }
    return out;
}

Eigen::Vector2cd apt_state(const HamiltonianFamily& family, const RampSchedule& schedule,
                           double t) {
    const ParamPoint lam = schedule.value(t);
    const BiorthogonalEigensystem es = family.eigensystem(lam);
    const APTExpansion exp = apt_coefficients(family, schedule, t, 3);
    Eigen::Vector2cd psi = es.right.col(0);
    for (int m = 1; m < es.dim(); ++m)
        psi += exp.a[m - 1] * es.right.col(m);
    return psi.normalized();
}

double projective_distance(const Eigen::Vector2cd& u, const Eigen::Vector2cd& w) {
    const double overlap = std::abs(u.normalized().dot(w.normalized()));
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * overlap));
}

void write_trajectory_csv(std::ostream& out, const EvolvedState& state) {
    out << "t,re_psi0,im_psi0,re_psi1,im_psi1,log_scale\n";
    for (const TrajectorySample& sample : state.samples) {
        out << g12(sample.t) << ',' << g12(sample.state(0).real()) << ','
            << g12(sample.state(0).imag()) << ',' << g12(sample.state(1).real()) << ','
            << g12(sample.state(1).imag()) << ',' << g12(sample.log_scale) << '\n';
    }
}

} // namespace qgt
