#include "qgt/measurement.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace qgt {

namespace {

constexpr complexd kI{0.0, 1.0};

int resolve_workers(int workers, std::size_t jobs) {
    if (workers <= 0)
        workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1)
        workers = 1;
    return static_cast<int>(std::min<std::size_t>(workers, std::max<std::size_t>(jobs, 1)));
}

// Deterministic grid parallelism: results land by index, worker count never
// affects values.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
    workers = resolve_workers(workers, n);
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                fn(i);
        });
    for (auto& t : pool)
        t.join();
}

void check_pair_directions(int mu, int nu) {
    if (mu != 0 && mu != 1)
        throw UnknownDirection("mu must be 0 or 1");
    if (nu != 0 && nu != 1)
        throw UnknownDirection("nu must be 0 or 1");
}

RampSchedule make_schedule(const ParamPoint& target, int direction, const SchemeConfig& c) {
    return RampSchedule{target, direction, c.delta_lambda, c.v};
}

EvolvedState evolve_from_ground(const HamiltonianFamily& family, const RampSchedule& schedule,
                                Generator gen, const SchemeConfig& c) {
    const PreparedGround ground =
        prepare_ground_state(family, schedule.start(), c.prep, c.integrator);
    const Eigen::Vector2cd& init =
        (gen == Generator::H) ? ground.right : ground.left;
    return evolve(init, family, schedule, gen, c.integrator);
}

} // namespace

GeneralizedExpectation gev(const cvec& psi1, const cvec& psi2, const cmat& a) {
    if (psi1.size() != psi2.size() || a.rows() != psi1.size() || a.cols() != psi2.size())
        throw DimensionMismatch("gev: inconsistent dimensions");
    const double n1 = psi1.norm(), n2 = psi2.norm();
    if (n1 == 0.0 || n2 == 0.0)
        throw ZeroVector("gev: zero state");
    GeneralizedExpectation out;
    out.numerator = psi1.dot(a * psi2);
    out.denominator = psi1.dot(psi2);
    if (std::abs(out.denominator) < kNearOrthogonalThreshold * n1 * n2)
        throw NearOrthogonal("gev: |<psi1|psi2>| below 1e-8 * ||psi1|| ||psi2||");
    out.value = out.numerator / out.denominator;
    return out;
}

ConstantTerm force_constant(const HamiltonianFamily& family, const ParamPoint& lam, int mu) {
    if (mu != 0 && mu != 1)
        throw UnknownDirection("force_constant: mu must be 0 or 1");
    const BiorthogonalEigensystem es = family.eigensystem(lam);
    const GeneralizedExpectation e =
        gev(es.left.col(0), es.right.col(0), family.force(lam, mu));
    return {e.value};
}

QGTEstimate scheme1_qgt(const HamiltonianFamily& family, const ParamPoint& lambda_target,
                        int mu, int nu, const SchemeConfig& config) {
    check_pair_directions(mu, nu);
    const RampSchedule ramp_mu = make_schedule(lambda_target, mu, config);
    const RampSchedule ramp_nu = make_schedule(lambda_target, nu, config);

    const EvolvedState psi_prime_mu =
        evolve_from_ground(family, ramp_mu, Generator::HDagger, config);
    const EvolvedState psi_nu = evolve_from_ground(family, ramp_nu, Generator::H, config);

    const double e0 = family.eigenvalues_closed_form(lambda_target).first;
    const Eigen::Matrix2cd shifted =
        family.hamiltonian(lambda_target) - e0 * Eigen::Matrix2cd::Identity();
    const Eigen::Matrix2cd fluct = shifted * shifted;

    const GeneralizedExpectation e =
        gev(psi_prime_mu.final_vector, psi_nu.final_vector, fluct);

    QGTEstimate out;
    out.q = e.value / (config.v * config.v);
    out.lambda_target = lambda_target;
    out.mu = mu;
    out.nu = nu;
    out.scheme = Scheme::EnergyFluctuation;
    out.v = config.v;
    out.delta_lambda = config.delta_lambda;
    out.measurement_time = ramp_nu.total_time();
    return out;
}

namespace {

QGTEstimate scheme2_common(const HamiltonianFamily& family, const ParamPoint& lambda_target,
                           int mu, int nu, const SchemeConfig& config, bool metric) {
    check_pair_directions(mu, nu);
    const RampSchedule ramp_nu = make_schedule(lambda_target, nu, config);

    const EvolvedState bra_state = evolve_from_ground(
        family, ramp_nu, metric ? Generator::MinusHDagger : Generator::HDagger, config);
    const EvolvedState psi_nu = evolve_from_ground(family, ramp_nu, Generator::H, config);

    const Eigen::Matrix2cd f_mu = family.force(lambda_target, mu);
    const GeneralizedExpectation e = gev(bra_state.final_vector, psi_nu.final_vector, f_mu);
    const complexd excess = e.value - force_constant(family, lambda_target, mu).value;

    QGTEstimate out;
    out.lambda_target = lambda_target;
    out.mu = mu;
    out.nu = nu;
    out.scheme = Scheme::GeneralizedForce;
    out.v = config.v;
    out.delta_lambda = config.delta_lambda;
    out.measurement_time = ramp_nu.total_time();
    if (metric)
        out.g = excess.imag() / (2.0 * config.v);
    else
        out.f = excess.real() / config.v;
    return out;
}

} // namespace

QGTEstimate scheme2_curvature(const HamiltonianFamily& family, const ParamPoint& lambda_target,
                              int mu, int nu, const SchemeConfig& config) {
    return scheme2_common(family, lambda_target, mu, nu, config, /*metric=*/false);
}

QGTEstimate scheme2_metric(const HamiltonianFamily& family, const ParamPoint& lambda_target,
                           int mu, int nu, const SchemeConfig& config) {
    return scheme2_common(family, lambda_target, mu, nu, config, /*metric=*/true);
}

ScanResult qgt_scan(const HamiltonianFamily& family, const std::vector<ParamPoint>& grid,
                    Scheme scheme, const SchemeConfig& config, int workers) {
    if (grid.empty())
        throw Error("qgt_scan: empty grid");

    const auto names = family.parameter_names();
    ScanResult result;
    result.scheme = scheme;
    result.component_names = {
        "Q_" + names[0] + names[0],
        "Q_" + names[1] + names[1],
        "ReQ_" + names[1] + names[0],
        "ImQ_" + names[1] + names[0],
    };
    result.rows.resize(grid.size());

    parallel_for(grid.size(), workers, [&](std::size_t i) {
        ScanRow& row = result.rows[i];
        row.lambda = grid[i];
        try {
            const complexd ref_mm = qgt_spectral(family, grid[i], 0, 0).value;
            const complexd ref_nn = qgt_spectral(family, grid[i], 1, 1).value;
            const complexd ref_nm = qgt_spectral(family, grid[i], 1, 0).value;
            row.reference = {ref_mm.real(), ref_nn.real(), ref_nm.real(), ref_nm.imag()};

            if (scheme == Scheme::EnergyFluctuation) {
                const complexd q_mm = scheme1_qgt(family, grid[i], 0, 0, config).q;
                const complexd q_nn = scheme1_qgt(family, grid[i], 1, 1, config).q;
                const complexd q_nm = scheme1_qgt(family, grid[i], 1, 0, config).q;
                row.estimate = {q_mm.real(), q_nn.real(), q_nm.real(), q_nm.imag()};
            } else {
                const double g_mm = scheme2_metric(family, grid[i], 0, 0, config).g;
                const double g_nn = scheme2_metric(family, grid[i], 1, 1, config).g;
                const double g_nm = scheme2_metric(family, grid[i], 1, 0, config).g;
                // F_{nu mu} = -2 Im Q_{nu mu}
                const double f_nm = scheme2_curvature(family, grid[i], 1, 0, config).f;
                row.estimate = {g_mm, g_nn, g_nm, -0.5 * f_nm};
            }
            for (int c = 0; c < kScanComponents; ++c)
                row.abs_error[c] = std::abs(row.estimate[c] - row.reference[c]);
        } catch (const Error& err) {
            row.failure = err.what();
        }
    });

    for (int c = 0; c < kScanComponents; ++c) {
        double scale = 0.0;
        for (const ScanRow& row : result.rows)
            if (row.failure.empty())
                scale = std::max(scale, std::abs(row.reference[c]));
        result.reference_scale[c] = scale;
    }
    return result;
}

std::array<double, kScanComponents> error_budget(const ScanResult& scan, double fraction,
                                                 double zero_floor) {
    std::array<double, kScanComponents> budget{};
    for (int c = 0; c < kScanComponents; ++c) {
        const double scale = scan.reference_scale[c];
        budget[c] = (scale > 1e-9) ? fraction * scale : zero_floor;
    }
    return budget;
}

std::vector<ChernScanRow> chern_scan(const ModelI& base, double q,
                                     const std::vector<double>& delta2_values, int n_theta,
                                     const SchemeConfig& config, int workers,
                                     double critical_window) {
    if (delta2_values.empty())
        throw Error("chern_scan: empty Delta2 list");
    if (n_theta < 2)
        throw Error("chern_scan: need at least 2 theta points");

    std::vector<ChernScanRow> rows(delta2_values.size());

    // One job per (delta2, theta) pair keeps all workers busy on small scans.
    const int nd = static_cast<int>(delta2_values.size());
    struct PointValue {
        double f1 = 0.0, f2 = 0.0, fa = 0.0;
        std::string failure;
    };
    std::vector<PointValue> values(static_cast<std::size_t>(nd) * n_theta);
    const double h = M_PI / (n_theta - 1);

    parallel_for(values.size(), workers, [&](std::size_t j) {
        const int id = static_cast<int>(j) / n_theta;
        const int it = static_cast<int>(j) % n_theta;
        ModelI m = base;
        m.delta2 = delta2_values[id];
        const HamiltonianFamily family(m, q);
        const ParamPoint lam(it * h, 0.0);
        PointValue& pv = values[j];
        try {
            // F_{theta phi}: scheme 1 via 2 Im Q_{phi theta}, scheme 2 directly.
            const complexd q_pt = scheme1_qgt(family, lam, 1, 0, config).q;
            pv.f1 = 2.0 * q_pt.imag();
            pv.f2 = scheme2_curvature(family, lam, 0, 1, config).f;
            pv.fa = berry_curvature(family, lam, 0, 1);
        } catch (const Error& err) {
            pv.failure = err.what();
        }
    });

    for (int id = 0; id < nd; ++id) {
        ChernScanRow& row = rows[id];
        row.delta2 = delta2_values[id];
        row.delta2_over_delta1 = (base.delta1 != 0.0) ? delta2_values[id] / base.delta1
                                                      : std::numeric_limits<double>::quiet_NaN();
        row.near_critical = std::abs(row.delta2_over_delta1 - 1.0) < critical_window;

        double c1 = 0.0, c2 = 0.0, ca = 0.0;
        for (int it = 0; it < n_theta; ++it) {
            const PointValue& pv = values[static_cast<std::size_t>(id) * n_theta + it];
            if (!pv.failure.empty()) {
                row.failure = pv.failure;
                break;
            }
            const double w = (it == 0 || it == n_theta - 1) ? 0.5 : 1.0;
            c1 += w * pv.f1;
            c2 += w * pv.f2;
            ca += w * pv.fa;
        }
        if (row.failure.empty()) {
            row.c_scheme1 = c1 * h;
            row.c_scheme2 = c2 * h;
            row.c_analytic = ca * h;
        }
    }
    return rows;
}

} // namespace qgt
