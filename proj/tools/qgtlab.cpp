// qgtlab: reproduces the benchmark figures of the pseudo-Hermitian QGT
// measurement schemes as deterministic data tables.

#include <iostream>

#include <CLI11.hpp>

#include "qgt/experiments.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    int workers = -1;
    double v = 0.0;
    double dlam = 0.0;
    int ntheta = 0;
    std::string scheme;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "configuration file");
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--workers", flags.workers, "worker threads (0 = hardware)");
    cmd->add_option("--v", flags.v, "final ramp speed");
    cmd->add_option("--dlam", flags.dlam, "ramp offset Delta lambda");
    cmd->add_option("--ntheta", flags.ntheta, "grid points along the scanned parameter");
    cmd->add_option("--scheme", flags.scheme, "scheme1 | scheme2 | both | analytic");
}

qgt::ExperimentConfig load_config(const CommonFlags& flags) {
    qgt::ExperimentConfig cfg;
    if (!flags.config_path.empty())
        cfg = qgt::parse_config_file(flags.config_path);
    // Flags win over the file.
    if (!flags.out_dir.empty())
        cfg.output.directory = flags.out_dir;
    if (flags.workers >= 0)
        cfg.workers = flags.workers;
    if (flags.v > 0.0)
        cfg.dynamics.v = flags.v;
    if (flags.dlam > 0.0)
        cfg.dynamics.delta_lambda = flags.dlam;
    if (flags.ntheta > 0) {
        cfg.scan.grid_points = flags.ntheta;
        cfg.fig2.n_theta = flags.ntheta;
    }
    if (!flags.scheme.empty()) {
        if (flags.scheme != "scheme1" && flags.scheme != "scheme2" && flags.scheme != "both" &&
            flags.scheme != "analytic" && flags.scheme != "circuit-check")
            throw qgt::ConfigError(
                "--scheme must be scheme1 | scheme2 | both | analytic | circuit-check");
        cfg.scheme.kind = flags.scheme;
    }
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-Hermitian QGT measurement laboratory"};
    app.require_subcommand(1);

    CommonFlags fig1_flags, fig2_flags, fig3_flags, circuit_flags, qgt_flags, chern_flags;

    CLI::App* fig1 = app.add_subcommand("fig1", "Model I QGT components, both schemes");
    add_common(fig1, fig1_flags);

    CLI::App* fig2 = app.add_subcommand("fig2", "Model I Chern-number phase diagram");
    add_common(fig2, fig2_flags);
    int fig2_points = 0;
    fig2->add_option("--d2-points", fig2_points, "number of Delta2 scan points");

    CLI::App* fig3 = app.add_subcommand("fig3", "Model II QGT components, both schemes");
    add_common(fig3, fig3_flags);

    CLI::App* circuit = app.add_subcommand("circuit-check", "controlled-SWAP equivalence report");
    add_common(circuit, circuit_flags);
    int shots = -1, instances = 0;
    circuit->add_option("--shots", shots, "enable shot sampling with this many shots");
    circuit->add_option("--instances", instances, "number of randomized instances");

    CLI::App* qgt_cmd = app.add_subcommand("qgt", "single-point estimates, all schemes");
    add_common(qgt_cmd, qgt_flags);
    double l1 = M_PI / 2, l2 = 0.0;
    std::string trajectory_path;
    qgt_cmd->add_option("--l1", l1, "first parameter value");
    qgt_cmd->add_option("--l2", l2, "second parameter value");
    qgt_cmd->add_option("--trajectory", trajectory_path,
                        "write the sampled ramp evolution to this CSV file");

    CLI::App* chern = app.add_subcommand("chern", "custom Chern scan (Model I)");
    add_common(chern, chern_flags);
    double d2_min = 0.0, d2_max = 30.0;
    int d2_points = 0;
    chern->add_option("--d2-min", d2_min, "Delta2/2pi scan start");
    chern->add_option("--d2-max", d2_max, "Delta2/2pi scan end");
    chern->add_option("--d2-points", d2_points, "number of Delta2 scan points");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fig1->parsed())
            return qgt::run_fig1(load_config(fig1_flags), std::cout);
        if (fig2->parsed()) {
            qgt::ExperimentConfig cfg = load_config(fig2_flags);
            if (fig2_points > 0)
                cfg.fig2.delta2_points = fig2_points;
            return qgt::run_fig2(cfg, std::cout);
        }
        if (fig3->parsed())
            return qgt::run_fig3(load_config(fig3_flags), std::cout);
        if (circuit->parsed()) {
            qgt::ExperimentConfig cfg = load_config(circuit_flags);
            if (shots >= 0)
                cfg.circuit.shots = shots;
            if (instances > 0)
                cfg.circuit.random_instances = instances;
            return qgt::run_circuit_check(cfg, std::cout);
        }
        if (qgt_cmd->parsed())
            return qgt::run_qgt_point(load_config(qgt_flags), qgt::ParamPoint(l1, l2), std::cout,
                                      trajectory_path);
        if (chern->parsed()) {
            qgt::ExperimentConfig cfg = load_config(chern_flags);
            cfg.fig2.delta2_over_2pi_min = d2_min;
            cfg.fig2.delta2_over_2pi_max = d2_max;
            if (d2_points > 0)
                cfg.fig2.delta2_points = d2_points;
            return qgt::run_chern(cfg, std::cout);
        }
    } catch (const qgt::ConfigError& err) {
        std::cerr << "configuration error: " << err.what() << "\n";
        return qgt::kExitConfigError;
    } catch (const qgt::Error& err) {
        std::cerr << "numerical error: " << err.what() << "\n";
        return qgt::kExitNumericalError;
    }
    return qgt::kExitConfigError;
}
