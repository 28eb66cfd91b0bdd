#include "qgt/experiments.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>

#include <json.hpp>

#include "qgt/format.hpp"

namespace qgt {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point start = clock::now();
    return std::chrono::duration<double>(clock::now() - start).count();
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out)
        throw Error("cannot open output file " + (dir / name).string());
    return out;
}

std::vector<ParamPoint> linear_grid(double lo, double hi, int n, double fixed) {
    std::vector<ParamPoint> grid;
    grid.reserve(n);
    for (int k = 0; k < n; ++k) {
        const double x = (n == 1) ? lo : lo + (hi - lo) * k / (n - 1);
        grid.emplace_back(x, fixed);
    }
    return grid;
}

json scan_summary(const ScanResult& scan, const std::array<double, kScanComponents>& budget,
                  bool& pass, int& failures) {
    json components = json::object();
    for (int c = 0; c < kScanComponents; ++c) {
        double max_err = 0.0, sum_err = 0.0;
        int counted = 0;
        for (const ScanRow& row : scan.rows) {
            if (!row.failure.empty())
                continue;
            max_err = std::max(max_err, row.abs_error[c]);
            sum_err += row.abs_error[c];
            ++counted;
        }
        const bool ok = counted > 0 && max_err <= budget[c];
        pass = pass && ok;
        components[scan.component_names[c]] = {
            {"max_error", max_err},
            {"mean_error", counted ? sum_err / counted : 0.0},
            {"budget", budget[c]},
            {"reference_scale", scan.reference_scale[c]},
            {"pass", ok},
        };
    }
    failures = 0;
    json failed_points = json::array();
    for (const ScanRow& row : scan.rows)
        if (!row.failure.empty()) {
            ++failures;
            failed_points.push_back({{"lambda1", row.lambda(0)},
                                     {"lambda2", row.lambda(1)},
                                     {"error", row.failure}});
        }
    json out = {{"components", components}, {"points", scan.rows.size()}};
    if (!failed_points.empty())
        out["failed_points"] = failed_points;
    return out;
}

// Reference-only table for the analytic scheme selection: no evolutions, the
// spectral values straight into the same CSV shape.
int analytic_figure(const ExperimentConfig& cfg, const std::string& tag,
                    const HamiltonianFamily& family, const std::vector<ParamPoint>& grid,
                    std::ostream& log) {
    const auto names = family.parameter_names();
    auto csv = open_output(cfg.output.directory, tag + "_analytic.csv");
    csv << names[0] << ',' << names[1] << ",Q_" << names[0] << names[0] << ",Q_" << names[1]
        << names[1] << ",ReQ_" << names[1] << names[0] << ",ImQ_" << names[1] << names[0]
        << ",status\n";
    int failures = 0;
    for (const ParamPoint& lam : grid) {
        csv << g12(lam(0)) << ',' << g12(lam(1));
        try {
            const complexd q_mm = qgt_spectral(family, lam, 0, 0).value;
            const complexd q_nn = qgt_spectral(family, lam, 1, 1).value;
            const complexd q_nm = qgt_spectral(family, lam, 1, 0).value;
            csv << ',' << g12(q_mm.real()) << ',' << g12(q_nn.real()) << ','
                << g12(q_nm.real()) << ',' << g12(q_nm.imag()) << ",ok\n";
        } catch (const Error& err) {
            ++failures;
            csv << ",nan,nan,nan,nan," << err.what() << '\n';
        }
    }
    log << tag << " analytic: " << grid.size() << " reference rows written\n";
    return failures == 0 ? kExitOk : kExitNumericalError;
}

int qgt_figure(const ExperimentConfig& cfg, const std::string& tag, std::ostream& log) {
    const HamiltonianFamily family = make_family(cfg);
    const SchemeConfig sc = make_scheme_config(cfg);
    const std::vector<ParamPoint> grid = linear_grid(
        cfg.scan.lambda1_min, cfg.scan.lambda1_max, cfg.scan.grid_points, cfg.scan.lambda2_fixed);

    if (cfg.scheme.kind == "circuit-check")
        throw ConfigError(tag + ": scheme kind 'circuit-check' belongs to the circuit-check "
                          "subcommand");
    if (cfg.scheme.kind == "analytic")
        return analytic_figure(cfg, tag, family, grid, log);

    const double t0 = now_seconds();
    json summary = {{"figure", tag},
                    {"budget_fraction", 0.05},
                    {"zero_floor", 0.02},
                    {"v", sc.v},
                    {"delta_lambda", sc.delta_lambda},
                    {"grid_points", cfg.scan.grid_points}};
    bool pass = true;
    int total_failures = 0;

    const bool run1 = cfg.scheme.kind == "scheme1" || cfg.scheme.kind == "both";
    const bool run2 = cfg.scheme.kind == "scheme2" || cfg.scheme.kind == "both";
    json schemes = json::object();
    for (int which = 1; which <= 2; ++which) {
        if ((which == 1 && !run1) || (which == 2 && !run2))
            continue;
        const Scheme scheme =
            (which == 1) ? Scheme::EnergyFluctuation : Scheme::GeneralizedForce;
        const ScanResult scan = qgt_scan(family, grid, scheme, sc, cfg.workers);
        const auto budget = error_budget(scan);
        const std::string name = (which == 1) ? "scheme1" : "scheme2";

        auto csv = open_output(cfg.output.directory, tag + "_" + name + ".csv");
        write_scan_csv(csv, family, scan);

        int failures = 0;
        bool scheme_pass = true;
        schemes[name] = scan_summary(scan, budget, scheme_pass, failures);
        schemes[name]["pass"] = scheme_pass;
        pass = pass && scheme_pass;
        total_failures += failures;
        log << tag << " " << name << ": "
            << (scheme_pass ? "within budget" : "BUDGET EXCEEDED") << "\n";
    }
    summary["schemes"] = schemes;
    summary["elapsed_seconds"] = now_seconds() - t0;
    summary["pass"] = pass && total_failures == 0;

    auto js = open_output(cfg.output.directory, tag + "_summary.json");
    js << summary.dump(2) << "\n";

    if (total_failures > 0)
        return kExitNumericalError;
    return pass ? kExitOk : kExitBudgetViolation;
}

} // namespace

void write_scan_csv(std::ostream& out, const HamiltonianFamily& family,
                    const ScanResult& scan) {
    const auto names = family.parameter_names();
    out << names[0] << ',' << names[1];
    for (const auto& comp : scan.component_names)
        out << ',' << comp << "_est";
    for (const auto& comp : scan.component_names)
        out << ',' << comp << "_ref";
    for (const auto& comp : scan.component_names)
        out << ",err_" << comp;
    out << ",status\n";
    for (const ScanRow& row : scan.rows) {
        out << g12(row.lambda(0)) << ',' << g12(row.lambda(1));
        for (int c = 0; c < kScanComponents; ++c)
            out << ',' << g12(row.estimate[c]);
        for (int c = 0; c < kScanComponents; ++c)
            out << ',' << g12(row.reference[c]);
        for (int c = 0; c < kScanComponents; ++c)
            out << ',' << g12(row.abs_error[c]);
        out << ',' << (row.failure.empty() ? "ok" : row.failure) << '\n';
    }
}

void write_chern_csv(std::ostream& out, const std::vector<ChernScanRow>& rows) {
    out << "delta2_over_delta1,C_scheme1,C_scheme2,C_analytic,near_critical,status\n";
    for (const ChernScanRow& row : rows) {
        out << g12(row.delta2_over_delta1) << ',' << g12(row.c_scheme1) << ','
            << g12(row.c_scheme2) << ',' << g12(row.c_analytic) << ','
            << (row.near_critical ? 1 : 0) << ','
            << (row.failure.empty() ? "ok" : row.failure) << '\n';
    }
}

int run_fig1(const ExperimentConfig& cfg, std::ostream& log) {
    ExperimentConfig c = cfg;
    if (!c.model_section_seen)
        c.model = ModelConfig{}; // paper defaults: q=3, 10/15/0
    if (c.model.variant != "model1")
        throw ConfigError("fig1 requires the model1 variant");
    if (!c.scan_section_seen) {
        c.scan.lambda1_min = 0.0;
        c.scan.lambda1_max = M_PI;
        c.scan.lambda2_fixed = 0.0;
    }
    return qgt_figure(c, "fig1", log);
}

int run_fig3(const ExperimentConfig& cfg, std::ostream& log) {
    ExperimentConfig c = cfg;
    if (!c.model_section_seen) {
        c.model.variant = "model2";
        c.model.b_over_2pi = 15.0;
    }
    if (c.model.variant != "model2")
        throw ConfigError("fig3 requires the model2 variant");
    if (!c.scan_section_seen) {
        c.scan.lambda1_min = -2.0 * M_PI;
        c.scan.lambda1_max = 2.0 * M_PI;
        c.scan.lambda2_fixed = M_PI / 2;
    }
    return qgt_figure(c, "fig3", log);
}

namespace {

// Linear interpolation of the Delta2/Delta1 value where C crosses 1/2.
double crossing_of_half(const std::vector<ChernScanRow>& rows,
                        double ChernScanRow::*member) {
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const double a = rows[i].*member, b = rows[i + 1].*member;
        if (!std::isfinite(a) || !std::isfinite(b))
            continue;
        if ((a - 0.5) * (b - 0.5) <= 0.0 && a != b) {
            const double t = (0.5 - a) / (b - a);
            return rows[i].delta2_over_delta1 +
                   t * (rows[i + 1].delta2_over_delta1 - rows[i].delta2_over_delta1);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

} // namespace

int run_fig2(const ExperimentConfig& cfg, std::ostream& log) {
    ExperimentConfig c = cfg;
    if (!c.model_section_seen)
        c.model = ModelConfig{};
    if (c.model.variant != "model1")
        throw ConfigError("fig2 requires the model1 variant");

    const double two_pi = 2.0 * M_PI;
    const ModelI base{two_pi * c.model.omega1_over_2pi, two_pi * c.model.delta1_over_2pi, 0.0};
    std::vector<double> delta2_values;
    for (int k = 0; k < c.fig2.delta2_points; ++k) {
        const double f = (c.fig2.delta2_points == 1)
                             ? c.fig2.delta2_over_2pi_min
                             : c.fig2.delta2_over_2pi_min +
                                   (c.fig2.delta2_over_2pi_max - c.fig2.delta2_over_2pi_min) *
                                       k / (c.fig2.delta2_points - 1);
        delta2_values.push_back(two_pi * f);
    }

    const double t0 = now_seconds();
    const SchemeConfig sc = make_scheme_config(c);
    const std::vector<ChernScanRow> rows =
        chern_scan(base, c.model.q, delta2_values, c.fig2.n_theta, sc, c.workers);

    auto csv = open_output(c.output.directory, "fig2_chern.csv");
    write_chern_csv(csv, rows);

    bool pass = true;
    int failures = 0;
    json points = json::array();
    for (const ChernScanRow& row : rows) {
        if (!row.failure.empty()) {
            ++failures;
            continue;
        }
        const double r = row.delta2_over_delta1;
        bool row_ok = true;
        if (r <= 0.8)
            row_ok = std::abs(row.c_scheme1 - 1.0) <= 0.1 && std::abs(row.c_scheme2 - 1.0) <= 0.1;
        else if (r >= 1.2)
            row_ok = std::abs(row.c_scheme1) <= 0.1 && std::abs(row.c_scheme2) <= 0.1;
        pass = pass && row_ok;
        points.push_back({{"delta2_over_delta1", r},
                          {"C_scheme1", row.c_scheme1},
                          {"C_scheme2", row.c_scheme2},
                          {"C_analytic", row.c_analytic},
                          {"near_critical", row.near_critical},
                          {"pass", row_ok}});
    }

    const double cross1 = crossing_of_half(rows, &ChernScanRow::c_scheme1);
    const double cross2 = crossing_of_half(rows, &ChernScanRow::c_scheme2);
    const bool crossing_ok = std::isfinite(cross1) && std::isfinite(cross2) &&
                             std::abs(cross1 - 1.0) <= 0.1 && std::abs(cross2 - 1.0) <= 0.1;
    pass = pass && crossing_ok;

    json summary = {{"figure", "fig2"},
                    {"n_theta", c.fig2.n_theta},
                    {"points", points},
                    {"transition_scheme1", cross1},
                    {"transition_scheme2", cross2},
                    {"transition_within_tolerance", crossing_ok},
                    {"elapsed_seconds", now_seconds() - t0},
                    {"pass", pass && failures == 0}};
    auto js = open_output(c.output.directory, "fig2_summary.json");
    js << summary.dump(2) << "\n";

    log << "fig2: transition at " << g12(cross1) << " (scheme1) / " << g12(cross2)
        << " (scheme2)\n";
    if (failures > 0)
        return kExitNumericalError;
    return pass ? kExitOk : kExitBudgetViolation;
}

namespace {

cvec random_state(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    cvec v(dim);
    for (int i = 0; i < dim; ++i)
        v(i) = complexd{gauss(rng), gauss(rng)};
    if (v.norm() == 0.0)
        v(0) = 1.0;
    return v;
}

cmat random_operator(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    cmat a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            a(i, j) = complexd{gauss(rng), gauss(rng)};
    return a;
}

} // namespace

int run_circuit_check(const ExperimentConfig& cfg, std::ostream& log) {
    const double t0 = now_seconds();
    std::mt19937_64 rng(cfg.circuit.seed);

    struct Case {
        std::string label;
        cvec psi1, psi2;
        cmat op;
    };
    std::vector<Case> cases;
    for (int k = 0; k < cfg.circuit.random_instances; ++k) {
        Case c{"random_" + std::to_string(k), random_state(rng, 2), random_state(rng, 2),
               random_operator(rng, 2)};
        cases.push_back(std::move(c));
    }

    // Scheme benchmark pairs at a Model I point.
    {
        ExperimentConfig base = cfg;
        base.model = ModelConfig{};
        const HamiltonianFamily family = make_family(base);
        const SchemeConfig sc = make_scheme_config(base);
        const ParamPoint tar(M_PI / 2, 0.0);
        for (int mu = 0; mu < 2; ++mu) {
            const RampSchedule ramp{tar, mu, sc.delta_lambda, sc.v};
            const BiorthogonalEigensystem start = family.eigensystem(ramp.start());
            const EvolvedState psi =
                evolve(start.right.col(0), family, ramp, Generator::H, sc.integrator);
            const EvolvedState psi_p =
                evolve(start.left.col(0), family, ramp, Generator::HDagger, sc.integrator);
            const EvolvedState psi_pp =
                evolve(start.left.col(0), family, ramp, Generator::MinusHDagger, sc.integrator);

            const double e0 = family.eigenvalues_closed_form(tar).first;
            const Eigen::Matrix2cd shifted =
                family.hamiltonian(tar) - e0 * Eigen::Matrix2cd::Identity();
            const std::string dir = family.parameter_names()[mu];
            cases.push_back({"scheme1_fluct_" + dir, psi_p.final_vector, psi.final_vector,
                             shifted * shifted});
            cases.push_back({"scheme2_curv_" + dir, psi_p.final_vector, psi.final_vector,
                             family.force(tar, 1 - mu)});
            cases.push_back({"scheme2_metric_" + dir, psi_pp.final_vector, psi.final_vector,
                             family.force(tar, 1 - mu)});
        }
    }

    // A deliberately orthogonal pair exercises the NearOrthogonal path.
    {
        cvec e0(2), e1(2);
        e0 << 1.0, 0.0;
        e1 << 0.0, 1.0;
        cases.push_back({"orthogonal_pair", e0, e1, random_operator(rng, 2)});
    }

    double max_dev = 0.0;
    std::string worst = "none";
    int near_orthogonal = 0;
    json details = json::array();
    const bool sampled = cfg.circuit.shots > 0;
    for (const Case& c : cases) {
        try {
            complexd via_circuit;
            if (sampled)
                via_circuit =
                    gev_via_circuit_sampled(c.psi1, c.psi2, c.op,
                                            ShotOptions{cfg.circuit.shots, cfg.circuit.seed})
                        .value;
            else
                via_circuit = gev_via_circuit(c.psi1, c.psi2, c.op);
            const complexd direct = gev(c.psi1, c.psi2, c.op).value;
            const double dev = std::abs(via_circuit - direct);
            if (dev > max_dev) {
                max_dev = dev;
                worst = c.label;
            }
            details.push_back({{"case", c.label}, {"deviation", dev}});
        } catch (const NearOrthogonal&) {
            ++near_orthogonal;
            details.push_back({{"case", c.label}, {"near_orthogonal", true}});
        }
    }

    const bool pass = !sampled && max_dev <= 1e-10;
    json summary = {{"cases", details.size()},
                    {"near_orthogonal_excluded", near_orthogonal},
                    {"max_deviation", max_dev},
                    {"worst_case", worst},
                    {"shots", cfg.circuit.shots},
                    {"elapsed_seconds", now_seconds() - t0}};
    if (sampled)
        summary["note"] = "shot-sampling mode: statistical report only, no pass/fail";
    else
        summary["pass"] = pass;

    auto js = open_output(cfg.output.directory, "circuit_check.json");
    js << summary.dump(2) << "\n";
    log << "circuit-check: max |circuit - direct| = " << max_dev << " over "
        << details.size() << " cases (" << near_orthogonal << " near-orthogonal excluded)\n";
    if (sampled)
        return kExitOk;
    return pass ? kExitOk : kExitBudgetViolation;
}

int run_qgt_point(const ExperimentConfig& cfg, const ParamPoint& lam, std::ostream& log,
                  const std::string& trajectory_path) {
    const HamiltonianFamily family = make_family(cfg);
    const SchemeConfig sc = make_scheme_config(cfg);
    const auto names = family.parameter_names();

    const complexd ref_mm = qgt_spectral(family, lam, 0, 0).value;
    const complexd ref_nn = qgt_spectral(family, lam, 1, 1).value;
    const complexd ref_nm = qgt_spectral(family, lam, 1, 0).value;

    const complexd s1_mm = scheme1_qgt(family, lam, 0, 0, sc).q;
    const complexd s1_nn = scheme1_qgt(family, lam, 1, 1, sc).q;
    const complexd s1_nm = scheme1_qgt(family, lam, 1, 0, sc).q;

    const double s2_mm = scheme2_metric(family, lam, 0, 0, sc).g;
    const double s2_nn = scheme2_metric(family, lam, 1, 1, sc).g;
    const double s2_re = scheme2_metric(family, lam, 1, 0, sc).g;
    const double s2_im = -0.5 * scheme2_curvature(family, lam, 1, 0, sc).f;

    log << "point " << names[0] << " = " << g12(lam(0)) << ", " << names[1] << " = "
        << g12(lam(1)) << " (q = " << g12(family.q()) << ")\n";
    auto row = [&](const std::string& label, double ref, double s1, double s2) {
        log << "  " << label << ": analytic " << g12(ref) << ", scheme1 " << g12(s1)
            << ", scheme2 " << g12(s2) << "\n";
    };
    row("Q_" + names[0] + names[0], ref_mm.real(), s1_mm.real(), s2_mm);
    row("Q_" + names[1] + names[1], ref_nn.real(), s1_nn.real(), s2_nn);
    row("ReQ_" + names[1] + names[0], ref_nm.real(), s1_nm.real(), s2_re);
    row("ImQ_" + names[1] + names[0], ref_nm.imag(), s1_nm.imag(), s2_im);

    // Circuit cross-check of the scheme-1 ratio at this point.
    const RampSchedule ramp{lam, 0, sc.delta_lambda, sc.v};
    const BiorthogonalEigensystem start = family.eigensystem(ramp.start());
    const EvolvedState psi = evolve(start.right.col(0), family, ramp, Generator::H, sc.integrator);
    const EvolvedState psi_p =
        evolve(start.left.col(0), family, ramp, Generator::HDagger, sc.integrator);
    const double e0 = family.eigenvalues_closed_form(lam).first;
    const Eigen::Matrix2cd shifted = family.hamiltonian(lam) - e0 * Eigen::Matrix2cd::Identity();
    const complexd direct = gev(psi_p.final_vector, psi.final_vector, shifted * shifted).value;
    const complexd circuit = gev_via_circuit(psi_p.final_vector, psi.final_vector, shifted * shifted);
    log << "  circuit vs direct gev deviation: " << g12(std::abs(circuit - direct)) << "\n";

    if (!trajectory_path.empty()) {
        IntegratorConfig sampling = sc.integrator;
        sampling.trajectory_stride = std::max(1, step_count(ramp, sampling) / 200);
        const EvolvedState sampled =
            evolve(start.right.col(0), family, ramp, Generator::H, sampling);
        std::ofstream out(trajectory_path, std::ios::binary);
        if (!out)
            throw Error("cannot open trajectory file " + trajectory_path);
        write_trajectory_csv(out, sampled);
        log << "  trajectory written to " << trajectory_path << "\n";
    }
    return kExitOk;
}

int run_chern(const ExperimentConfig& cfg, std::ostream& log) {
    ExperimentConfig c = cfg;
    if (!c.model_section_seen)
        c.model = ModelConfig{};
    if (c.model.variant != "model1")
        throw ConfigError("chern requires the model1 variant");
    return run_fig2(c, log);
}

} // namespace qgt
