#include "gpjc/run.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <ostream>

#include "gpjc/phase_space.hpp"
#include "gpjc/solvers.hpp"

namespace gpjc {

namespace {

constexpr cplx kI{0.0, 1.0};

// Faithful pipelines must emit rows that look like a one-atom state: the
// probability sum, the empty sectors, and rho21 = conj(rho12). Violations
// mean an internal inconsistency, not bad user input.
constexpr double kRowInvariantTol = 1e-8;

const char* kScenarioNames[] = {"rabi", "collapse_revival", "divergence_demo", "custom"};
const char* kPipelineNames[] = {"qo_closed", "qo_matrix", "stenholm", "canonical_ode",
                                "standard_fpe"};

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double default_horizon(Scenario s) {
    switch (s) {
        case Scenario::Rabi: return 10.0;
        case Scenario::CollapseRevival: return 80.0;  // past the first revival
        case Scenario::DivergenceDemo: return 10.0;
        case Scenario::Custom: return 10.0;
    }
    throw config_error("unknown scenario");
}

bool same_initial(const InitialState& a, const InitialState& b) {
    return a.kind == b.kind && a.atom == b.atom && a.fock_m == b.fock_m && a.eta == b.eta &&
           a.custom_a1 == b.custom_a1 && a.custom_a2 == b.custom_a2;
}

bool same_config(const ScenarioConfig& a, const ScenarioConfig& b) {
    return a.rabi_Omega == b.rabi_Omega && a.detuning_Delta == b.detuning_Delta &&
           a.cavity_omega == b.cavity_omega && a.n_max == b.n_max &&
           same_initial(a.initial, b.initial);
}

void check_row_invariants(const Observables& o, double t) {
    const double bad =
        std::max({std::abs(o.P0), std::abs(o.P12), std::abs(o.P1 + o.P2 - 1.0),
                  std::abs(o.norm - 1.0), std::abs(o.rho21 - std::conj(o.rho12))});
    if (!(bad <= kRowInvariantTol))
        throw std::runtime_error("internal: row at t = " + std::to_string(t) +
                                 " violates the one-atom invariants by " + std::to_string(bad));
}

SeriesRow standard_rule_row(const StandardRuleSolution& sol, double t, double omega) {
    // Naive termwise moment sums of a non-normalizable object: growth
    // diagnostics laid out in the usual columns, not probabilities.
    SeriesRow row;
    row.t = t;
    const int nb = static_cast<int>(sol.phi1.size());
    Observables o;
    o.P1 = sol.R2_11.diagonal().sum().real();  // phi1 plays the lower-level role
    o.P2 = sol.R2_22.diagonal().sum().real();
    double nbar = 0.0, norm = 0.0;
    for (int a = 0; a < nb; ++a) {
        const double r4 = (sol.R2_11(a, a) + sol.R2_22(a, a)).real();
        norm += r4;
        nbar += a * r4;
    }
    o.nbar = nbar;
    o.norm = norm;
    o.trunc_mass = std::abs(sol.R2_11(nb - 1, nb - 1) + sol.R2_22(nb - 1, nb - 1));
    o.rho12 = -std::exp(-kI * omega * t) * sol.R2_21.diagonal().sum();
    o.rho21 = std::conj(o.rho12);
    row.obs = o;
    row.max_phi1 = sol.phi1.cwiseAbs().maxCoeff();
    row.max_phi2 = sol.phi2.cwiseAbs().maxCoeff();
    return row;
}

std::vector<std::string> column_names(Pipeline p) {
    std::vector<std::string> cols = {"t",        "P0",   "P1",   "P2",        "P12",
                                     "rho12_re", "rho12_im", "nbar", "norm", "trunc_mass"};
    if (p == Pipeline::StandardFpe) {
        cols.push_back("max_phi1");
        cols.push_back("max_phi2");
    }
    return cols;
}

std::vector<double> column_values(const SeriesRow& r, Pipeline p) {
    std::vector<double> v = {r.t,    r.obs.P0,           r.obs.P1,           r.obs.P2,
                             r.obs.P12, r.obs.rho12.real(), r.obs.rho12.imag(), r.obs.nbar,
                             r.obs.norm, r.obs.trunc_mass};
    if (p == Pipeline::StandardFpe) {
        v.push_back(r.max_phi1);
        v.push_back(r.max_phi2);
    }
    return v;
}

}  // namespace

Scenario parse_scenario(const std::string& name) {
    for (int i = 0; i < 4; ++i)
        if (name == kScenarioNames[i]) return static_cast<Scenario>(i);
    throw config_error("unknown scenario: " + name);
}

Pipeline parse_pipeline(const std::string& name) {
    for (int i = 0; i < 5; ++i)
        if (name == kPipelineNames[i]) return static_cast<Pipeline>(i);
    throw config_error("unknown pipeline: " + name);
}

OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw config_error("unknown output format: " + name);
}

std::string name_of(Scenario s) { return kScenarioNames[static_cast<int>(s)]; }
std::string name_of(Pipeline p) { return kPipelineNames[static_cast<int>(p)]; }

ScenarioConfig scenario_defaults(Scenario s) {
    ScenarioConfig cfg;
    cfg.rabi_Omega = 1.0;
    cfg.n_max = 0;  // pick by the truncation rule
    switch (s) {
        case Scenario::Rabi:
            cfg.initial.kind = InitialState::Kind::Fock;
            cfg.initial.atom = 1;
            cfg.initial.fock_m = 1;
            break;
        case Scenario::CollapseRevival:
            cfg.initial.kind = InitialState::Kind::Coherent;
            cfg.initial.atom = 1;
            cfg.initial.eta = 5.0;
            break;
        case Scenario::DivergenceDemo:
            cfg.initial.kind = InitialState::Kind::Fock;
            cfg.initial.atom = 1;
            cfg.initial.fock_m = 4;
            break;
        case Scenario::Custom:
            cfg.initial.kind = InitialState::Kind::Custom;
            break;
    }
    return cfg;
}

void finalize_spec(RunSpec& spec) {
    if (spec.pipeline == Pipeline::StandardFpe && spec.scenario != Scenario::DivergenceDemo &&
        spec.scenario != Scenario::Custom)
        throw config_error("pipeline standard_fpe only pairs with divergence_demo or custom");
    if (!(spec.dt > 0.0)) throw config_error("dt must be positive");
    if (spec.out_stride < 1) throw config_error("out_stride must be at least 1");
    if (spec.t_end < 0.0) spec.t_end = default_horizon(spec.scenario);
    if (!(spec.t_end > 0.0)) throw config_error("t_end must be positive");
    if (spec.cfg.n_max <= 0) spec.cfg.n_max = default_n_max(spec.cfg.initial);

    const double row_dt = spec.dt * spec.out_stride;
    const auto rows = static_cast<std::size_t>(std::floor(spec.t_end / row_dt + 1e-9)) + 1;
    spec.cfg.time_grid.resize(rows);
    for (std::size_t j = 0; j < rows; ++j) spec.cfg.time_grid[j] = static_cast<double>(j) * row_dt;

    validate_config(spec.cfg);
}

SeriesResult run_series(RunSpec spec) {
    finalize_spec(spec);
    const ScenarioConfig& cfg = spec.cfg;
    const auto& grid = cfg.time_grid;

    SeriesResult res;
    res.spec = spec;
    res.rows.reserve(grid.size());

    switch (spec.pipeline) {
        case Pipeline::QoClosed: {
            for (double t : grid) {
                SeriesRow row;
                row.t = t;
                row.obs = amplitude_observables(closed_form_amplitudes(cfg, t), cfg);
                res.rows.push_back(row);
            }
            break;
        }
        case Pipeline::QoMatrix: {
            const DensityPropagator prop(cfg);
            const Eigen::MatrixXcd rho0 = initial_density(cfg);
            for (double t : grid) {
                SeriesRow row;
                row.t = t;
                row.obs = density_observables(prop.at(rho0, t), cfg);
                res.rows.push_back(row);
            }
            break;
        }
        case Pipeline::Stenholm: {
            const StenholmConstants c = stenholm_constants(initial_amplitudes(cfg), cfg);
            for (double t : grid) {
                SeriesRow row;
                row.t = t;
                row.obs = phase_observables(stenholm_coefficients(c, t, cfg));
                res.rows.push_back(row);
            }
            break;
        }
        case Pipeline::CanonicalOde: {
            CanonicalIntegrator integ(initial_coefficients(cfg), cfg, spec.dt);
            for (double t : grid) {
                if (t > 0.0) integ.advance_to(t);
                SeriesRow row;
                row.t = t;
                row.obs = phase_observables(integ.state());
                res.rows.push_back(row);
            }
            break;
        }
        case Pipeline::StandardFpe: {
            // The four-photon Fock demo uses the textbook unit constants;
            // anything else derives the mode constants from the initial state.
            const StandardRuleConstants c =
                (spec.scenario == Scenario::DivergenceDemo &&
                 cfg.initial.kind == InitialState::Kind::Fock)
                    ? standard_rule_unit_constants(cfg.initial.fock_m, cfg)
                    : standard_rule_constants(initial_amplitudes(cfg), cfg);
            for (double t : grid)
                res.rows.push_back(standard_rule_row(standard_fpe_solution(c, t), t,
                                                     cfg.cavity_omega));
            break;
        }
    }

    if (spec.pipeline != Pipeline::StandardFpe)
        for (const SeriesRow& row : res.rows) check_row_invariants(row.obs, row.t);
    return res;
}

nlohmann::json emit_series_metadata(const RunSpec& spec) {
    nlohmann::json j;
    j["version"] = kToolVersion;
    j["scenario"] = name_of(spec.scenario);
    j["pipeline"] = name_of(spec.pipeline);
    j["Omega"] = spec.cfg.rabi_Omega;
    j["Delta"] = spec.cfg.detuning_Delta;
    j["omega"] = spec.cfg.cavity_omega;
    j["n_max"] = spec.cfg.n_max;
    j["dt"] = spec.dt;
    j["out_stride"] = spec.out_stride;
    j["t_end"] = spec.t_end;
    const InitialState& init = spec.cfg.initial;
    nlohmann::json ji;
    switch (init.kind) {
        case InitialState::Kind::Fock:
            ji["kind"] = "fock";
            ji["atom"] = init.atom;
            ji["m"] = init.fock_m;
            break;
        case InitialState::Kind::Coherent:
            ji["kind"] = "coherent";
            ji["atom"] = init.atom;
            ji["eta"] = {init.eta.real(), init.eta.imag()};
            break;
        case InitialState::Kind::Custom:
            ji["kind"] = "custom";
            ji["size"] = init.custom_a1.size();
            break;
    }
    j["initial"] = ji;
    if (spec.pipeline != Pipeline::StandardFpe) j["row_invariant_tol"] = kRowInvariantTol;
    return j;
}

void write_series(const SeriesResult& r, std::ostream& os) {
    const auto cols = column_names(r.spec.pipeline);
    if (r.spec.format == OutputFormat::Csv) {
        os << "# " << emit_series_metadata(r.spec).dump() << "\n";
        for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
        os << "\n";
        for (const SeriesRow& row : r.rows) {
            const auto vals = column_values(row, r.spec.pipeline);
            for (std::size_t i = 0; i < vals.size(); ++i) os << (i ? "," : "") << fmt17(vals[i]);
            os << "\n";
        }
        return;
    }
    nlohmann::json j;
    j["metadata"] = emit_series_metadata(r.spec);
    j["columns"] = cols;
    auto rows = nlohmann::json::array();
    for (const SeriesRow& row : r.rows) rows.push_back(column_values(row, r.spec.pipeline));
    j["rows"] = std::move(rows);
    os << j.dump(2) << "\n";
}

int run(RunSpec spec) {
    finalize_spec(spec);
    const SeriesResult res = run_series(spec);
    if (spec.out_path.empty()) {
        write_series(res, std::cout);
        return 0;
    }
    std::ofstream out(spec.out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + spec.out_path);
    write_series(res, out);
    if (!out.good()) throw std::runtime_error("short write: " + spec.out_path);
    return 0;
}

CompareReport compare_series(const SeriesResult& a, const SeriesResult& b) {
    if (a.spec.pipeline == Pipeline::StandardFpe || b.spec.pipeline == Pipeline::StandardFpe)
        throw config_error(
            "standard_fpe emits a non-normalizable diagnostic; there is nothing commensurable "
            "to compare");
    if (!same_config(a.spec.cfg, b.spec.cfg)) throw config_error("compared runs differ in config");
    if (a.rows.size() != b.rows.size()) throw config_error("time grids differ in length");
    for (std::size_t i = 0; i < a.rows.size(); ++i)
        if (a.rows[i].t != b.rows[i].t) throw config_error("time grids differ");

    const auto involves = [&](Pipeline p) {
        return a.spec.pipeline == p || b.spec.pipeline == p;
    };
    CompareReport rep;
    rep.tolerance = involves(Pipeline::CanonicalOde) ? 1e-6
                    : involves(Pipeline::QoMatrix)   ? 1e-8
                                                     : 1e-10;

    const auto pick = [](const Observables& o, int c) -> double {
        switch (c) {
            case 0: return o.P0;
            case 1: return o.P1;
            case 2: return o.P2;
            case 3: return o.P12;
            case 4: return o.rho12.real();
            case 5: return o.rho12.imag();
            case 6: return o.nbar;
            default: return o.norm;
        }
    };
    const char* names[] = {"P0", "P1", "P2", "P12", "rho12_re", "rho12_im", "nbar", "norm"};
    for (int c = 0; c < 8; ++c) {
        ColumnDiff d;
        d.column = names[c];
        double sq = 0.0;
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
            const double diff = pick(a.rows[i].obs, c) - pick(b.rows[i].obs, c);
            d.max_abs = std::max(d.max_abs, std::abs(diff));
            sq += diff * diff;
        }
        d.rms = a.rows.empty() ? 0.0 : std::sqrt(sq / static_cast<double>(a.rows.size()));
        rep.worst = std::max(rep.worst, d.max_abs);
        rep.columns.push_back(d);
    }
    rep.within = rep.worst <= rep.tolerance;
    return rep;
}

int compare(RunSpec spec_a, RunSpec spec_b, std::ostream& os) {
    finalize_spec(spec_a);
    finalize_spec(spec_b);
    const SeriesResult ra = run_series(spec_a);
    const SeriesResult rb = run_series(spec_b);
    const CompareReport rep = compare_series(ra, rb);

    nlohmann::json head;
    head["pipeline_a"] = name_of(spec_a.pipeline);
    head["pipeline_b"] = name_of(spec_b.pipeline);
    head["scenario"] = name_of(spec_a.scenario);
    head["rows"] = ra.rows.size();
    head["tolerance"] = rep.tolerance;
    os << "# " << head.dump() << "\n";
    os << "column,max_abs,rms\n";
    for (const ColumnDiff& d : rep.columns)
        os << d.column << "," << fmt17(d.max_abs) << "," << fmt17(d.rms) << "\n";
    os << (rep.within ? "WITHIN" : "EXCEEDED") << " tolerance " << fmt17(rep.tolerance)
       << " (worst " << fmt17(rep.worst) << ")\n";
    return rep.within ? 0 : 2;
}

}  // namespace gpjc
