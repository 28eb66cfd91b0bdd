#pragma once

#include <optional>
#include <string>

#include "qgt/measurement.hpp"

namespace qgt {

// Experiment configuration: key/value blocks with per-command defaults.
// Unknown sections or keys are rejected with file:line locations; a [model]
// block, when present, must be complete for its variant.

struct ModelConfig {
    std::string variant = "model1"; // model1 | model2
    double q = 3.0;
    // Frequencies in the captions' per-2pi units; converted to angular
    // frequencies when the family is built.
    double omega1_over_2pi = 10.0;
    double delta1_over_2pi = 15.0;
    double delta2_over_2pi = 0.0;
    double b_over_2pi = 15.0;
};

struct SchemeSelection {
    std::string kind = "both"; // scheme1 | scheme2 | both | analytic
};

struct ScanConfig {
    int grid_points = 21;
    // Scanned parameter is lambda_1; lambda_2 is held fixed.
    double lambda1_min = 0.0;
    double lambda1_max = M_PI;
    double lambda2_fixed = 0.0;
};

struct DynamicsConfig {
    double delta_lambda = M_PI / 2;
    double v = 1.0;
    std::string method = "magnus4"; // midpoint | magnus4 | rk4
    int steps = 4000;
};

struct Fig2Config {
    double delta2_over_2pi_min = 0.0;
    double delta2_over_2pi_max = 30.0;
    int delta2_points = 16;
    int n_theta = 21;
};

struct CircuitCheckConfig {
    int random_instances = 128;
    std::uint64_t seed = 20240917;
    int shots = 0; // > 0 switches to the statistical shot-sampling report
};

struct OutputConfig {
    std::string directory = "out";
};

struct ExperimentConfig {
    ModelConfig model;
    SchemeSelection scheme;
    ScanConfig scan;
    DynamicsConfig dynamics;
    Fig2Config fig2;
    CircuitCheckConfig circuit;
    OutputConfig output;
    int workers = 0; // 0 = available parallelism; never affects output bytes

    bool model_section_seen = false;
    bool scan_section_seen = false;
};

// Parses the structured-text format ([section] blocks, key = value lines,
// '#' comments). Throws ConfigError with "<path>:<line>: ..." locations.
ExperimentConfig parse_config_file(const std::string& path);

// Same parser over in-memory text (used by tests); `name` labels errors.
ExperimentConfig parse_config_text(const std::string& text, const std::string& name);

// Library objects from a validated configuration.
HamiltonianFamily make_family(const ExperimentConfig& cfg);
SchemeConfig make_scheme_config(const ExperimentConfig& cfg);

} // namespace qgt
