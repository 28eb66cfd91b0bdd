#pragma once

#include <iosfwd>

#include "qgt/circuit.hpp"
#include "qgt/config.hpp"

namespace qgt {

// Exit-code contract shared by every experiment runner.
enum ExitCode : int {
    kExitOk = 0,
    kExitBudgetViolation = 1,
    kExitConfigError = 2,
    kExitNumericalError = 3,
};

// Fig. 1: Model I QGT components on a 21-point theta grid, both schemes,
// against the spectral reference. Writes fig1_scheme1.csv, fig1_scheme2.csv
// and fig1_summary.json under cfg.output.directory.
int run_fig1(const ExperimentConfig& cfg, std::ostream& log);

// Fig. 2: Chern-number phase diagram over a Delta2 scan. Writes
// fig2_chern.csv and fig2_summary.json.
int run_fig2(const ExperimentConfig& cfg, std::ostream& log);

// Fig. 3: Model II QGT components on a 21-point x grid. Writes
// fig3_scheme1.csv, fig3_scheme2.csv and fig3_summary.json.
int run_fig3(const ExperimentConfig& cfg, std::ostream& log);

// Controlled-SWAP circuit equivalence: max |circuit - direct| over randomized
// instances plus the scheme benchmark pairs; pass iff <= 1e-10. Writes
// circuit_check.json. With cfg.circuit.shots > 0, a statistical report only.
int run_circuit_check(const ExperimentConfig& cfg, std::ostream& log);

// Single-point diagnostics: all four components from both schemes, the
// analytic reference, and circuit cross-checks of the scheme ratios. A
// nonempty trajectory_path additionally writes the sampled evolution of the
// right ground state under H (drift along the first parameter) as CSV.
int run_qgt_point(const ExperimentConfig& cfg, const ParamPoint& lam, std::ostream& log,
                  const std::string& trajectory_path = "");

// Custom Chern scan (Model I).
int run_chern(const ExperimentConfig& cfg, std::ostream& log);

// Deterministic CSV writers (fixed %.12g formatting, '.' decimal separator,
// ',' field separator, header row).
void write_scan_csv(std::ostream& out, const HamiltonianFamily& family,
                    const ScanResult& scan);
void write_chern_csv(std::ostream& out, const std::vector<ChernScanRow>& rows);

} // namespace qgt
