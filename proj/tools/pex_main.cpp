// pex: analyze the excitation structure of sampled regressor signals.
//
// Subcommands: generate, analyze, diagnose, decompose, simulate. Every run
// writes a manifest echoing the fully resolved parameters, so any output can
// be reproduced with `--config <manifest>`. Exit codes: 0 = pass, 1 = analytic
// fail, 2 = usage or data error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "pex/pex.hpp"

namespace fs = std::filesystem;
using pex::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw pex::InputError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw pex::InputError("malformed JSON in " + path + ": " + e.what());
    }
}

void write_json_atomic(const fs::path& path, const json& j) {
    pex::detail::atomic_write_text(path, j.dump(2) + "\n");
}

/// Config-file overlay: flags win, then config values, then defaults.
class ConfigOverlay {
public:
    void load(const std::string& path) { cfg_ = load_json_file(path); }

    template <typename T>
    void apply(const CLI::Option* opt, const std::string& key, T& value) const {
        if (opt->count() == 0 && cfg_.contains(key)) value = cfg_.at(key).get<T>();
    }

    bool flag_or_key(const CLI::Option* opt, const std::string& key) const {
        if (opt->count() > 0) return true;
        return cfg_.contains(key) && cfg_.at(key).get<bool>();
    }

    const json& raw() const { return cfg_; }

private:
    json cfg_;
};

void write_manifest(const fs::path& anchor, const json& resolved) {
    fs::path path = anchor;
    path += ".manifest.json";
    write_json_atomic(path, resolved);
}

// ---------------------------------------------------------------------------
// generate

struct GenerateParams {
    std::string config;
    std::string kind;
    double horizon = 10.0;
    double dt = 1e-3;
    double t0 = 0.0;
    std::vector<double> freqs{1.0};
    std::vector<double> amps{1.0};
    std::vector<double> phases{0.0};
    std::string mixing = "identity";
    double rate = 1.0;
    std::vector<double> value{1.0};
    std::string out;
};

Eigen::MatrixXd parse_mixing(const std::string& spec, long m) {
    if (spec == "identity") return Eigen::MatrixXd::Identity(m, m);
    std::vector<double> entries;
    std::string token;
    std::istringstream in(spec);
    while (std::getline(in, token, ',')) entries.push_back(std::stod(token));
    if (entries.empty() || entries.size() % static_cast<std::size_t>(m) != 0)
        throw pex::InputError("mixing entry count must be a positive multiple of the source count");
    const long q = static_cast<long>(entries.size()) / m;
    Eigen::MatrixXd mixing(q, m);
    for (long i = 0; i < q; ++i)
        for (long j = 0; j < m; ++j) mixing(i, j) = entries[i * m + j];
    return mixing;
}

pex::SampledSignal build_signal(const GenerateParams& p) {
    pex::TimeGrid grid = pex::TimeGrid::over(p.t0, p.horizon, p.dt);
    if (p.kind == "sinusoid") {
        return pex::sample_sinusoid_mix(p.freqs, p.amps, p.phases,
                                        parse_mixing(p.mixing, static_cast<long>(p.freqs.size())),
                                        grid);
    }
    if (p.kind == "vanishing") {
        return pex::envelope_scale(
            pex::sample_sinusoid_mix(p.freqs, p.amps, p.phases,
                                     parse_mixing(p.mixing, static_cast<long>(p.freqs.size())),
                                     grid),
            p.rate);
    }
    if (p.kind == "constant") {
        Eigen::VectorXd c(static_cast<long>(p.value.size()));
        for (long i = 0; i < c.size(); ++i) c(i) = p.value[static_cast<std::size_t>(i)];
        return pex::sample_constant(c, grid);
    }
    if (p.kind == "pathological") {
        auto [w1, w2] =
            pex::pathological_pair(pex::sample_constant(Eigen::VectorXd::Ones(1), grid));
        return pex::stack(w1, w2);
    }
    throw pex::InputError("unknown generator kind '" + p.kind + "'");
}

json generate_manifest(const GenerateParams& p) {
    return json{{"command", "generate"}, {"kind", p.kind},     {"horizon", p.horizon},
                {"dt", p.dt},            {"t0", p.t0},         {"freqs", p.freqs},
                {"amps", p.amps},        {"phases", p.phases}, {"mixing", p.mixing},
                {"rate", p.rate},        {"value", p.value},   {"out", p.out}};
}

int run_generate(const GenerateParams& p) {
    pex::SampledSignal w = build_signal(p);
    pex::write_signal_csv(p.out, w);
    write_manifest(p.out, generate_manifest(p));
    std::cout << "wrote " << p.out << " (" << w.dim() << " x " << w.samples()
              << " samples, tag " << pex::to_string(w.continuity_tag) << ")\n";
    return kExitPass;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeParams {
    std::string config;
    std::string signal;
    double T = 1.0;
    double beta = 0.1;
    double t_tail = 0.0;
    std::string out;
};

int run_analyze(const AnalyzeParams& p) {
    pex::SampledSignal w = pex::read_signal_csv(p.signal);
    pex::GramSweep sweep = pex::build_gram_sweep(w);
    pex::PEVerdict matrix = pex::matrix_pe_test(sweep, p.T, p.t_tail, p.beta);

    json directional = json::array();
    for (long i = 0; i < w.dim(); ++i) {
        Eigen::VectorXd axis = Eigen::VectorXd::Unit(w.dim(), i);
        directional.push_back(
            pex::verdict_to_json(pex::directional_pe_test(sweep, axis, p.T, p.t_tail, p.beta),
                                 axis));
    }
    json report{{"signal", p.signal},
                {"matrix", pex::verdict_to_json(matrix)},
                {"directional", directional}};
    std::cout << report.dump(2) << "\n";
    if (!p.out.empty()) {
        write_json_atomic(p.out, report);
        write_manifest(p.out, json{{"command", "analyze"},
                                   {"signal", p.signal},
                                   {"T", p.T},
                                   {"beta", p.beta},
                                   {"t_tail", p.t_tail},
                                   {"out", p.out}});
    }
    return matrix.pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// diagnose

struct DiagnoseParams {
    std::string config;
    std::string signal;
    double T = 1.0;
    double beta = 0.1;
    double t_tail = 0.0;
    double eig_tol = pex::kDefaultEigTol;
    int n_dirs = pex::kDefaultProbeCount;
    unsigned long long seed = 0;
    std::string out;
};

int run_diagnose(const DiagnoseParams& p) {
    pex::SampledSignal w = pex::read_signal_csv(p.signal);
    pex::PEReport report =
        pex::estimate_pe_subspace(w, p.T, p.t_tail, p.beta, p.eig_tol, p.n_dirs, p.seed);

    std::cout << "degree of PE: " << report.q_pe << " of " << w.dim() << "\n";
    std::cout << "tail Gram eigenvalues:";
    for (long i = 0; i < report.eigenvalues.size(); ++i)
        std::cout << ' ' << report.eigenvalues(i);
    std::cout << "\nregularity: " << pex::to_string(report.regular_evidence.flag) << " ("
              << report.regular_evidence.witnesses.size() << " witness direction(s))\n";

    json j = pex::report_to_json(report);
    j["signal"] = p.signal;
    std::cout << j.dump(2) << "\n";
    if (!p.out.empty()) {
        write_json_atomic(p.out, j);
        write_manifest(p.out, json{{"command", "diagnose"},
                                   {"signal", p.signal},
                                   {"T", p.T},
                                   {"beta", p.beta},
                                   {"t_tail", p.t_tail},
                                   {"eig_tol", p.eig_tol},
                                   {"n_dirs", p.n_dirs},
                                   {"seed", p.seed},
                                   {"out", p.out}});
    }
    return report.regular_evidence.flag == pex::RegularityReport::Flag::ConsistentWithRegular
               ? kExitPass
               : kExitFail;
}

// ---------------------------------------------------------------------------
// decompose

struct DecomposeParams {
    std::string config;
    std::string signal;
    std::string w_subspace;  // JSON file with the PE subspace
    std::string v_subspace;  // optional complement; orthogonal complement if empty
    bool estimate = false;
    double T = 1.0;
    double beta = 0.1;
    double t_tail = 0.0;
    double eig_tol = pex::kDefaultEigTol;
    double residual_tol = 1e-9;
    std::string out_prefix = "decomposition";
};

int run_decompose(const DecomposeParams& p) {
    pex::SampledSignal w = pex::read_signal_csv(p.signal);

    pex::Subspace w_space = pex::Subspace::zero(w.dim());
    if (p.estimate) {
        w_space = pex::estimate_pe_subspace(w, p.T, p.t_tail, p.beta, p.eig_tol).W_hat;
    } else if (!p.w_subspace.empty()) {
        w_space = pex::subspace_from_json(load_json_file(p.w_subspace));
    } else {
        throw pex::InputError("decompose needs --w_subspace <file> or --estimate");
    }
    pex::Subspace v_space = p.v_subspace.empty()
                                ? pex::complement(w_space)
                                : pex::subspace_from_json(load_json_file(p.v_subspace));

    pex::PEDecomposition d = pex::pe_decompose(w, w_space, v_space);
    const std::string pe_path = p.out_prefix + "_pe.csv";
    const std::string perp_path = p.out_prefix + "_perp.csv";
    const std::string report_path = p.out_prefix + "_report.json";
    if (d.w_pe.dim() > 0) pex::write_signal_csv(pe_path, d.w_pe);
    if (d.w_perp.dim() > 0) pex::write_signal_csv(perp_path, d.w_perp);

    json report = pex::decomposition_to_json(d);
    report["signal"] = p.signal;
    report["w_pe_csv"] = d.w_pe.dim() > 0 ? json(pe_path) : json();
    report["w_perp_csv"] = d.w_perp.dim() > 0 ? json(perp_path) : json();
    write_json_atomic(report_path, report);
    write_manifest(p.out_prefix, json{{"command", "decompose"},
                                      {"signal", p.signal},
                                      {"w_subspace", p.w_subspace},
                                      {"v_subspace", p.v_subspace},
                                      {"estimate", p.estimate},
                                      {"T", p.T},
                                      {"beta", p.beta},
                                      {"t_tail", p.t_tail},
                                      {"eig_tol", p.eig_tol},
                                      {"residual_tol", p.residual_tol},
                                      {"out_prefix", p.out_prefix}});

    std::cout << "q_pe = " << d.W.dim() << ", max reconstruction residual = "
              << d.reconstruction_residual << " (relative)\n";
    return d.reconstruction_residual <= p.residual_tol ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateParams {
    std::string config;
    std::string signal;
    std::vector<double> psi_true;
    std::vector<double> psi_hat0;
    double dt = 1e-3;
    double t_end = 0.0;  // 0 = full signal horizon
    std::string integrator = "rk4";
    double tail_fraction = 0.25;
    double regulation_tol = 1e-2;
    bool retention = false;
    double retention_tol = 1e-2;
    std::string out_prefix = "run";
};

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    Eigen::VectorXd out(static_cast<long>(v.size()));
    for (long i = 0; i < out.size(); ++i) out(i) = v[static_cast<std::size_t>(i)];
    return out;
}

Eigen::MatrixXd gain_from_json(const json& cfg, long q) {
    if (!cfg.contains("gamma")) return Eigen::MatrixXd::Identity(q, q);
    const json& g = cfg.at("gamma");
    if (g.is_number()) return g.get<double>() * Eigen::MatrixXd::Identity(q, q);
    Eigen::MatrixXd gain(q, q);
    if (static_cast<long>(g.size()) != q)
        throw pex::InputError("gamma matrix must have q rows");
    for (long i = 0; i < q; ++i) {
        const json& row = g.at(static_cast<std::size_t>(i));
        if (static_cast<long>(row.size()) != q)
            throw pex::InputError("gamma matrix must be q x q");
        for (long j = 0; j < q; ++j)
            gain(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
    }
    return gain;
}

int run_simulate(const SimulateParams& p, const json& cfg) {
    if (p.signal.empty()) throw pex::InputError("simulate needs a signal CSV");
    pex::SampledSignal w = pex::read_signal_csv(p.signal);
    const long q = w.dim();
    if (static_cast<long>(p.psi_true.size()) != q)
        throw pex::InputError("psi_true must have one entry per signal row");
    if (static_cast<long>(p.psi_hat0.size()) != q)
        throw pex::InputError("psi_hat0 must have one entry per signal row");

    pex::AdaptiveProblem problem(w, to_vector(p.psi_true), to_vector(p.psi_hat0),
                                 gain_from_json(cfg, q));
    const double t_end = p.t_end > 0.0 ? p.t_end : w.grid.horizon_end();
    pex::Integrator method = pex::integrator_from_string(p.integrator);

    std::optional<pex::Subspace> w_space;
    if (cfg.contains("W")) w_space = pex::subspace_from_json(cfg.at("W"));
    else if (cfg.contains("W_file"))
        w_space = pex::subspace_from_json(load_json_file(cfg.at("W_file").get<std::string>()));

    bool all_pass = true;
    json report{{"signal", p.signal},
                {"integrator", p.integrator},
                {"dt", p.dt},
                {"t_end", t_end},
                {"psi_true", p.psi_true},
                {"psi_hat0", p.psi_hat0}};

    pex::RunResult run;
    if (p.retention) {
        if (!w_space) throw pex::InputError("retention experiment needs W");
        pex::RetentionReport retention =
            pex::retention_experiment(problem, *w_space, p.dt, t_end, p.retention_tol, method);
        run = std::move(retention.run);
        report["retention"] = json{{"target", pex::vector_to_json(retention.target)},
                                   {"gap", retention.gap},
                                   {"tol", retention.tol},
                                   {"pass", retention.ok}};
        all_pass = all_pass && retention.ok;
    } else {
        run = pex::simulate_gradient_law(problem, p.dt, t_end, method);
    }

    const bool regulated = pex::check_error_regulation(run, p.tail_fraction, p.regulation_tol);
    report["regulation"] = json{{"tail_fraction", p.tail_fraction},
                                {"tol", p.regulation_tol},
                                {"pass", regulated}};
    all_pass = all_pass && regulated;

    if (w_space) {
        auto [member, distance] = pex::check_affine_set_membership(
            run.psi_hat_final, problem.psi_true, *w_space, 10.0 * p.regulation_tol);
        report["membership"] = json{{"distance", distance},
                                    {"tol", 10.0 * p.regulation_tol},
                                    {"pass", member}};
        all_pass = all_pass && member;
    }
    report["psi_hat_final"] = pex::vector_to_json(run.psi_hat_final);

    const std::string traj_path = p.out_prefix + "_trajectory.csv";
    const std::string report_path = p.out_prefix + "_report.json";
    pex::write_trajectory_csv(traj_path, run);
    write_json_atomic(report_path, report);

    json manifest{{"command", "simulate"},
                  {"signal", p.signal},
                  {"psi_true", p.psi_true},
                  {"psi_hat0", p.psi_hat0},
                  {"dt", p.dt},
                  {"t_end", t_end},
                  {"integrator", p.integrator},
                  {"tail_fraction", p.tail_fraction},
                  {"regulation_tol", p.regulation_tol},
                  {"retention", p.retention},
                  {"retention_tol", p.retention_tol},
                  {"out_prefix", p.out_prefix}};
    if (cfg.contains("gamma")) manifest["gamma"] = cfg.at("gamma");
    if (cfg.contains("W")) manifest["W"] = cfg.at("W");
    if (cfg.contains("W_file")) manifest["W_file"] = cfg.at("W_file");
    write_manifest(p.out_prefix, manifest);

    std::cout << report.dump(2) << "\n";
    return all_pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"persistent-excitation analysis toolkit"};
    app.require_subcommand(1);

    GenerateParams gen;
    CLI::App* generate = app.add_subcommand("generate", "sample a signal to CSV");
    auto* gen_cfg = generate->add_option("--config", gen.config, "JSON config file");
    auto* gen_kind = generate->add_option("--kind", gen.kind, "generator")
                         ->check(CLI::IsMember({"sinusoid", "vanishing", "constant",
                                                "pathological"}));
    auto* gen_horizon = generate->add_option("--horizon", gen.horizon);
    auto* gen_dt = generate->add_option("--dt", gen.dt);
    auto* gen_t0 = generate->add_option("--t0", gen.t0);
    auto* gen_freqs = generate->add_option("--freqs", gen.freqs)->delimiter(',');
    auto* gen_amps = generate->add_option("--amps", gen.amps)->delimiter(',');
    auto* gen_phases = generate->add_option("--phases", gen.phases)->delimiter(',');
    auto* gen_mixing = generate->add_option("--mixing", gen.mixing,
                                            "row-major entries or 'identity'");
    auto* gen_rate = generate->add_option("--rate", gen.rate, "envelope decay rate");
    auto* gen_value = generate->add_option("--value", gen.value)->delimiter(',');
    auto* gen_out = generate->add_option("--out", gen.out, "output CSV path");

    AnalyzeParams ana;
    CLI::App* analyze = app.add_subcommand("analyze", "matrix and per-axis PE verdicts");
    auto* ana_cfg = analyze->add_option("--config", ana.config, "JSON config file");
    auto* ana_signal = analyze->add_option("--signal", ana.signal, "signal CSV");
    auto* ana_T = analyze->add_option("--T", ana.T, "window length (s)");
    auto* ana_beta = analyze->add_option("--beta", ana.beta, "excitation level");
    auto* ana_tail = analyze->add_option("--t_tail", ana.t_tail, "tail start (s)");
    auto* ana_out = analyze->add_option("--out", ana.out, "also write the JSON here");

    DiagnoseParams diag;
    CLI::App* diagnose = app.add_subcommand("diagnose", "PE subspace estimate + regularity");
    auto* diag_cfg = diagnose->add_option("--config", diag.config, "JSON config file");
    auto* diag_signal = diagnose->add_option("--signal", diag.signal, "signal CSV");
    auto* diag_T = diagnose->add_option("--T", diag.T, "window length (s)");
    auto* diag_beta = diagnose->add_option("--beta", diag.beta, "excitation level");
    auto* diag_tail = diagnose->add_option("--t_tail", diag.t_tail, "tail start (s)");
    auto* diag_eig = diagnose->add_option("--eig_tol", diag.eig_tol, "eigenvalue cutoff");
    auto* diag_dirs = diagnose->add_option("--n_dirs", diag.n_dirs, "random probes per region");
    auto* diag_seed = diagnose->add_option("--seed", diag.seed, "probe RNG seed");
    auto* diag_out = diagnose->add_option("--out", diag.out, "also write the JSON here");

    DecomposeParams dec;
    CLI::App* decompose = app.add_subcommand("decompose", "split w into w_pe and w_perp");
    auto* dec_cfg = decompose->add_option("--config", dec.config, "JSON config file");
    auto* dec_signal = decompose->add_option("--signal", dec.signal, "signal CSV");
    auto* dec_w = decompose->add_option("--w_subspace", dec.w_subspace, "subspace JSON file");
    auto* dec_v = decompose->add_option("--v_subspace", dec.v_subspace, "complement JSON file");
    auto* dec_est = decompose->add_flag("--estimate", dec.estimate, "estimate W from the data");
    auto* dec_T = decompose->add_option("--T", dec.T, "window length for --estimate");
    auto* dec_beta = decompose->add_option("--beta", dec.beta, "level for --estimate");
    auto* dec_tail = decompose->add_option("--t_tail", dec.t_tail, "tail for --estimate");
    auto* dec_eig = decompose->add_option("--eig_tol", dec.eig_tol, "eigenvalue cutoff");
    auto* dec_res = decompose->add_option("--residual_tol", dec.residual_tol,
                                          "reconstruction gate");
    auto* dec_prefix = decompose->add_option("--out_prefix", dec.out_prefix, "output prefix");

    SimulateParams sim;
    CLI::App* simulate = app.add_subcommand("simulate", "gradient adaptive law experiment");
    auto* sim_cfg = simulate->add_option("--config", sim.config, "JSON config file");
    auto* sim_signal = simulate->add_option("--signal", sim.signal, "regressor CSV");
    auto* sim_psi_true = simulate->add_option("--psi_true", sim.psi_true)->delimiter(',');
    auto* sim_psi_hat0 = simulate->add_option("--psi_hat0", sim.psi_hat0)->delimiter(',');
    auto* sim_dt = simulate->add_option("--dt", sim.dt, "integration step");
    auto* sim_t_end = simulate->add_option("--t_end", sim.t_end, "0 = full horizon");
    auto* sim_integrator = simulate->add_option("--integrator", sim.integrator)
                               ->check(CLI::IsMember({"rk4", "euler"}));
    auto* sim_tail = simulate->add_option("--tail_fraction", sim.tail_fraction);
    auto* sim_reg = simulate->add_option("--regulation_tol", sim.regulation_tol);
    auto* sim_ret = simulate->add_flag("--retention", sim.retention, "retention experiment");
    auto* sim_ret_tol = simulate->add_option("--retention_tol", sim.retention_tol);
    auto* sim_prefix = simulate->add_option("--out_prefix", sim.out_prefix, "output prefix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (generate->parsed()) {
            ConfigOverlay overlay;
            if (gen_cfg->count() > 0) overlay.load(gen.config);
            overlay.apply(gen_kind, "kind", gen.kind);
            overlay.apply(gen_horizon, "horizon", gen.horizon);
            overlay.apply(gen_dt, "dt", gen.dt);
            overlay.apply(gen_t0, "t0", gen.t0);
            overlay.apply(gen_freqs, "freqs", gen.freqs);
            overlay.apply(gen_amps, "amps", gen.amps);
            overlay.apply(gen_phases, "phases", gen.phases);
            overlay.apply(gen_mixing, "mixing", gen.mixing);
            overlay.apply(gen_rate, "rate", gen.rate);
            overlay.apply(gen_value, "value", gen.value);
            overlay.apply(gen_out, "out", gen.out);
            if (gen.kind.empty()) throw pex::InputError("generate needs --kind");
            if (gen.out.empty()) throw pex::InputError("generate needs --out");
            return run_generate(gen);
        }
        if (analyze->parsed()) {
            ConfigOverlay overlay;
            if (ana_cfg->count() > 0) overlay.load(ana.config);
            overlay.apply(ana_signal, "signal", ana.signal);
            overlay.apply(ana_T, "T", ana.T);
            overlay.apply(ana_beta, "beta", ana.beta);
            overlay.apply(ana_tail, "t_tail", ana.t_tail);
            overlay.apply(ana_out, "out", ana.out);
            if (ana.signal.empty()) throw pex::InputError("analyze needs --signal");
            return run_analyze(ana);
        }
        if (diagnose->parsed()) {
            ConfigOverlay overlay;
            if (diag_cfg->count() > 0) overlay.load(diag.config);
            overlay.apply(diag_signal, "signal", diag.signal);
            overlay.apply(diag_T, "T", diag.T);
            overlay.apply(diag_beta, "beta", diag.beta);
            overlay.apply(diag_tail, "t_tail", diag.t_tail);
            overlay.apply(diag_eig, "eig_tol", diag.eig_tol);
            overlay.apply(diag_dirs, "n_dirs", diag.n_dirs);
            overlay.apply(diag_seed, "seed", diag.seed);
            overlay.apply(diag_out, "out", diag.out);
            if (diag.signal.empty()) throw pex::InputError("diagnose needs --signal");
            return run_diagnose(diag);
        }
        if (decompose->parsed()) {
            ConfigOverlay overlay;
            if (dec_cfg->count() > 0) overlay.load(dec.config);
            overlay.apply(dec_signal, "signal", dec.signal);
            overlay.apply(dec_w, "w_subspace", dec.w_subspace);
            overlay.apply(dec_v, "v_subspace", dec.v_subspace);
            overlay.apply(dec_est, "estimate", dec.estimate);
            overlay.apply(dec_T, "T", dec.T);
            overlay.apply(dec_beta, "beta", dec.beta);
            overlay.apply(dec_tail, "t_tail", dec.t_tail);
            overlay.apply(dec_eig, "eig_tol", dec.eig_tol);
            overlay.apply(dec_res, "residual_tol", dec.residual_tol);
            overlay.apply(dec_prefix, "out_prefix", dec.out_prefix);
            if (dec.signal.empty()) throw pex::InputError("decompose needs --signal");
            return run_decompose(dec);
        }
        if (simulate->parsed()) {
            ConfigOverlay overlay;
            if (sim_cfg->count() > 0) overlay.load(sim.config);
            overlay.apply(sim_signal, "signal", sim.signal);
            overlay.apply(sim_psi_true, "psi_true", sim.psi_true);
            overlay.apply(sim_psi_hat0, "psi_hat0", sim.psi_hat0);
            overlay.apply(sim_dt, "dt", sim.dt);
            overlay.apply(sim_t_end, "t_end", sim.t_end);
            overlay.apply(sim_integrator, "integrator", sim.integrator);
            overlay.apply(sim_tail, "tail_fraction", sim.tail_fraction);
            overlay.apply(sim_reg, "regulation_tol", sim.regulation_tol);
            sim.retention = overlay.flag_or_key(sim_ret, "retention");
            overlay.apply(sim_ret_tol, "retention_tol", sim.retention_tol);
            overlay.apply(sim_prefix, "out_prefix", sim.out_prefix);
            return run_simulate(sim, overlay.raw());
        }
    } catch (const pex::CsvError& e) {
        std::cerr << "error: " << e.what() << " (line " << e.line << ")\n";
        return kExitUsage;
    } catch (const pex::DivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
