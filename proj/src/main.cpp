#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>

#include "gpjc/run.hpp"
#include "gpjc/solvers.hpp"

namespace {

using gpjc::cplx;
using gpjc::config_error;

// "re" or "re,im"
cplx parse_complex(const std::string& s) {
    std::size_t used = 0;
    double re = 0.0, im = 0.0;
    try {
        re = std::stod(s, &used);
        if (used < s.size()) {
            if (s[used] != ',') throw config_error("bad complex literal: " + s);
            std::size_t used2 = 0;
            im = std::stod(s.substr(used + 1), &used2);
            if (used + 1 + used2 != s.size()) throw config_error("bad complex literal: " + s);
        }
    } catch (const std::invalid_argument&) {
        throw config_error("bad complex literal: " + s);
    } catch (const std::out_of_range&) {
        throw config_error("bad complex literal: " + s);
    }
    return {re, im};
}

// number or [re, im]
cplx json_complex(const nlohmann::json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw config_error("expected a number or [re, im] pair");
}

std::vector<cplx> json_amplitudes(const nlohmann::json& j) {
    if (!j.is_array()) throw config_error("amplitude array expected");
    std::vector<cplx> v;
    v.reserve(j.size());
    for (const auto& e : j) v.push_back(json_complex(e));
    return v;
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open file: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error(path + ": " + e.what());
    }
}

void apply_custom_state(const nlohmann::json& j, gpjc::InitialState& init) {
    if (!j.is_object() || !j.contains("a1") || !j.contains("a2"))
        throw config_error("custom state needs amplitude arrays a1 and a2");
    init.kind = gpjc::InitialState::Kind::Custom;
    init.custom_a1 = json_amplitudes(j["a1"]);
    init.custom_a2 = json_amplitudes(j["a2"]);
}

const char* const kConfigKeys[] = {"scenario",   "pipeline",   "pipeline_b", "omega_rabi",
                                   "detuning",   "omega_cavity", "eta",      "fock_m",
                                   "atom",       "custom_state", "n_max",    "dt",
                                   "out_stride", "t_end",        "out",      "format"};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Jaynes-Cummings simulator on a fermion-boson phase space"};
    app.require_subcommand(1);

    std::string scenario, pipeline, pipeline_b, config_path, custom_state_path, out_path, format,
        eta;
    double omega_rabi = 0, detuning = 0, omega_cavity = 0, dt = 0, t_end = 0;
    int fock_m = 0, atom = 0, n_max = 0, out_stride = 0;

    const auto add_common = [&](CLI::App* c) {
        c->add_option("--scenario", scenario, "rabi|collapse_revival|divergence_demo|custom");
        c->add_option("--pipeline", pipeline,
                      "qo_closed|qo_matrix|stenholm|canonical_ode|standard_fpe");
        c->add_option("--config", config_path, "JSON config file; explicit flags override it");
        c->add_option("--omega-rabi", omega_rabi, "coupling Omega");
        c->add_option("--detuning", detuning, "Delta, atomic minus cavity frequency");
        c->add_option("--omega-cavity", omega_cavity, "cavity frequency omega");
        c->add_option("--eta", eta, "coherent field amplitude, re[,im]");
        c->add_option("--fock-m", fock_m, "photon number of a Fock initial state");
        c->add_option("--atom", atom, "initial atomic level, 1 (lower) or 2 (upper)");
        c->add_option("--custom-state", custom_state_path,
                      "JSON file with amplitude arrays a1, a2");
        c->add_option("--n-max", n_max, "photon truncation; 0 = rule from the initial state");
        c->add_option("--dt", dt, "integration step of the ODE pipelines");
        c->add_option("--out-stride", out_stride, "integration steps between output rows");
        c->add_option("--t-end", t_end, "time horizon; default depends on the scenario");
    };

    CLI::App* run_cmd = app.add_subcommand("run", "emit an observable time series");
    add_common(run_cmd);
    run_cmd->add_option("--out", out_path, "output path; stdout when omitted");
    run_cmd->add_option("--format", format, "csv|json");

    CLI::App* cmp_cmd = app.add_subcommand("compare", "run two pipelines and diff the columns");
    add_common(cmp_cmd);
    cmp_cmd->add_option("--pipeline-b", pipeline_b, "second pipeline")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }
    CLI::App* cmd = run_cmd->parsed() ? run_cmd : cmp_cmd;

    try {
        nlohmann::json file = nlohmann::json::object();
        if (cmd->count("--config")) file = read_json_file(config_path);
        if (!file.is_object()) throw config_error("config file must hold a JSON object");
        for (const auto& [key, value] : file.items()) {
            (void)value;
            bool known = false;
            for (const char* k : kConfigKeys) known = known || key == k;
            if (!known) throw config_error("unknown config key: " + key);
        }

        gpjc::RunSpec spec;
        std::string scen_name = "rabi";
        if (file.contains("scenario")) scen_name = file["scenario"].get<std::string>();
        if (cmd->count("--scenario")) scen_name = scenario;
        spec.scenario = gpjc::parse_scenario(scen_name);
        spec.cfg = gpjc::scenario_defaults(spec.scenario);

        // the divergence demo is about the standard-rule solution; elsewhere
        // the closed-form oracle is the natural default
        std::string pipe_name = spec.scenario == gpjc::Scenario::DivergenceDemo
                                    ? "standard_fpe"
                                    : "qo_closed";
        if (file.contains("pipeline")) pipe_name = file["pipeline"].get<std::string>();
        if (cmd->count("--pipeline")) pipe_name = pipeline;
        spec.pipeline = gpjc::parse_pipeline(pipe_name);

        if (file.contains("eta") && file.contains("fock_m"))
            throw config_error("config sets both eta and fock_m");
        if (cmd->count("--eta") && cmd->count("--fock-m"))
            throw config_error("give either --eta or --fock-m, not both");

        if (file.contains("omega_rabi")) spec.cfg.rabi_Omega = file["omega_rabi"].get<double>();
        if (file.contains("detuning")) spec.cfg.detuning_Delta = file["detuning"].get<double>();
        if (file.contains("omega_cavity"))
            spec.cfg.cavity_omega = file["omega_cavity"].get<double>();
        if (file.contains("fock_m")) {
            spec.cfg.initial.kind = gpjc::InitialState::Kind::Fock;
            spec.cfg.initial.fock_m = file["fock_m"].get<int>();
        }
        if (file.contains("eta")) {
            spec.cfg.initial.kind = gpjc::InitialState::Kind::Coherent;
            spec.cfg.initial.eta = json_complex(file["eta"]);
        }
        if (file.contains("custom_state")) apply_custom_state(file["custom_state"], spec.cfg.initial);
        if (file.contains("atom")) spec.cfg.initial.atom = file["atom"].get<int>();
        if (file.contains("n_max")) spec.cfg.n_max = file["n_max"].get<int>();
        if (file.contains("dt")) spec.dt = file["dt"].get<double>();
        if (file.contains("out_stride")) spec.out_stride = file["out_stride"].get<int>();
        if (file.contains("t_end")) spec.t_end = file["t_end"].get<double>();
        if (file.contains("out")) spec.out_path = file["out"].get<std::string>();
        if (file.contains("format")) spec.format = gpjc::parse_format(file["format"].get<std::string>());

        if (cmd->count("--omega-rabi")) spec.cfg.rabi_Omega = omega_rabi;
        if (cmd->count("--detuning")) spec.cfg.detuning_Delta = detuning;
        if (cmd->count("--omega-cavity")) spec.cfg.cavity_omega = omega_cavity;
        if (cmd->count("--fock-m")) {
            spec.cfg.initial.kind = gpjc::InitialState::Kind::Fock;
            spec.cfg.initial.fock_m = fock_m;
        }
        if (cmd->count("--eta")) {
            spec.cfg.initial.kind = gpjc::InitialState::Kind::Coherent;
            spec.cfg.initial.eta = parse_complex(eta);
        }
        if (cmd->count("--custom-state"))
            apply_custom_state(read_json_file(custom_state_path), spec.cfg.initial);
        if (cmd->count("--atom")) spec.cfg.initial.atom = atom;
        if (cmd->count("--n-max")) spec.cfg.n_max = n_max;
        if (cmd->count("--dt")) spec.dt = dt;
        if (cmd->count("--out-stride")) spec.out_stride = out_stride;
        if (cmd->count("--t-end")) spec.t_end = t_end;
        if (run_cmd->parsed()) {
            if (run_cmd->count("--out")) spec.out_path = out_path;
            if (run_cmd->count("--format")) spec.format = gpjc::parse_format(format);
            return gpjc::run(spec);
        }

        std::string pipe_b_name;
        if (file.contains("pipeline_b")) pipe_b_name = file["pipeline_b"].get<std::string>();
        if (cmd->count("--pipeline-b")) pipe_b_name = pipeline_b;
        gpjc::RunSpec spec_b = spec;
        spec_b.pipeline = gpjc::parse_pipeline(pipe_b_name);
        return gpjc::compare(spec, spec_b, std::cout);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const gpjc::truncation_error& e) {
        std::cerr << "truncation leak: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
