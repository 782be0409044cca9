#pragma once

#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "gpjc/jc_reference.hpp"

namespace gpjc {

inline constexpr const char* kToolVersion = "1.0.0";

enum class Scenario { Rabi, CollapseRevival, DivergenceDemo, Custom };
enum class Pipeline { QoClosed, QoMatrix, Stenholm, CanonicalOde, StandardFpe };
enum class OutputFormat { Csv, Json };

// Name parsing throws config_error on unknown names.
Scenario parse_scenario(const std::string& name);
Pipeline parse_pipeline(const std::string& name);
OutputFormat parse_format(const std::string& name);
std::string name_of(Scenario s);
std::string name_of(Pipeline p);

// Preset initial state and couplings for a scenario (Omega = 1, resonant):
// rabi = one photon against the empty upper level, collapse_revival = eta = 5
// coherent field, divergence_demo = four-photon Fock. Custom starts from an
// empty config; the caller supplies amplitude arrays. n_max is left at 0 =
// "pick by the truncation rule".
ScenarioConfig scenario_defaults(Scenario s);

// One batch run. dt is the integration step of the ODE pipelines; a row is
// emitted every out_stride steps, so the output grid is t_j = j*dt*out_stride
// for every pipeline (the analytic ones evaluate exactly on it). t_end < 0
// picks the scenario default horizon.
struct RunSpec {
    Scenario scenario = Scenario::Rabi;
    Pipeline pipeline = Pipeline::QoClosed;
    ScenarioConfig cfg = scenario_defaults(Scenario::Rabi);
    double dt = 1e-3;
    int out_stride = 100;
    double t_end = -1.0;
    std::string out_path;  // empty = stdout
    OutputFormat format = OutputFormat::Csv;
};

// Fills defaults (horizon, n_max <= 0 by the truncation rule), builds the
// output grid, and validates the whole spec. standard_fpe describes a
// non-normalizable object and is only allowed where that is the point:
// divergence_demo and custom. Idempotent.
void finalize_spec(RunSpec& spec);

struct SeriesRow {
    double t = 0.0;
    Observables obs;
    // standard_fpe only: mode-amplitude suprema of the two solution functions
    double max_phi1 = 0.0, max_phi2 = 0.0;
};

struct SeriesResult {
    RunSpec spec;  // finalized copy
    std::vector<SeriesRow> rows;
};

// Evaluates the pipeline on the spec's output grid. For standard_fpe the
// observable columns are naive termwise moment sums of the non-normalizable
// solution -- growth diagnostics, not probabilities.
SeriesResult run_series(RunSpec spec);

// Reproducibility header: tool version, pipeline, scenario, couplings,
// initial-state parameters, truncation and grid. Deterministic key order.
nlohmann::json emit_series_metadata(const RunSpec& spec);

// CSV: one `#`-prefixed metadata line, a column-name line, then %.17g rows.
// JSON: {metadata, columns, rows}. Both byte-deterministic for a fixed spec.
void write_series(const SeriesResult& r, std::ostream& os);

// finalize + evaluate + write to spec.out_path (stdout when empty); returns 0.
int run(RunSpec spec);

struct ColumnDiff {
    std::string column;
    double max_abs = 0.0;
    double rms = 0.0;
};

struct CompareReport {
    std::vector<ColumnDiff> columns;
    double tolerance = 0.0;
    double worst = 0.0;  // max over columns of max_abs
    bool within = false;
};

// Per-column differences of two runs over the shared grid. The tolerance
// class is set by the pipeline pair: 1e-6 when an ODE integration is
// involved, 1e-8 for the enlarged-space matrix oracle, 1e-10 between
// analytic pipelines. Grids must match exactly; standard_fpe series are
// rejected (nothing commensurable to compare).
CompareReport compare_series(const SeriesResult& a, const SeriesResult& b);

// Runs both specs and prints the per-column report; returns 0 when every
// column is within tolerance, 2 otherwise.
int compare(RunSpec spec_a, RunSpec spec_b, std::ostream& os);

}  // namespace gpjc
