// hamgadget: compile small circuits and adaptive oracle machines into local
// Hamiltonians and verify their spectral claims by exact diagonalization.
//
// Exit codes: 0 success / all assertions pass, 1 assertion failure,
// 2 usage or validation error.

#include <chrono>
#include <iostream>

#include <CLI11.hpp>

#include "hamgadget/json_io.hpp"
#include "hamgadget/suites.hpp"

using namespace hamgadget;

namespace {

struct CommonFlags {
    std::uint64_t seed = kDefaultSeed;
    double tol = 1e-10;
    std::int64_t dense_cutoff = 1500;
    int jobs = 0;
    std::string out;

    void attach(CLI::App* cmd) {
        cmd->add_option("--seed", seed, "seed for iterative/randomized paths");
        cmd->add_option("--tol", tol, "residual tolerance (relative to the operator scale)");
        cmd->add_option("--dense-cutoff", dense_cutoff, "largest dimension solved densely");
        cmd->add_option("--jobs", jobs, "worker threads (default: HAMGADGET_JOBS or 1)");
        cmd->add_option("--out,-o", out, "output file (default: stdout)");
    }

    SpectralOptions spectral() const {
        SpectralOptions opts;
        opts.seed = seed;
        opts.tol = tol;
        opts.dense_threshold = dense_cutoff;
        opts.jobs = resolve_jobs(jobs);
        return opts;
    }

    RunManifest manifest(const std::string& command) const {
        RunManifest m;
        m.command = command;
        m.seed = seed;
        m.tol = tol;
        m.dense_cutoff = dense_cutoff;
        m.jobs = resolve_jobs(jobs);
        return m;
    }

    void emit(json j, RunManifest m, std::chrono::steady_clock::time_point t0) const {
        m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        j["manifest"] = manifest_to_json(m);
        if (out.empty())
            std::cout << j.dump(2) << "\n";
        else
            write_json(out, j);
    }
};

QuantumCircuit default_simulator(const QueryMachine& mach, int L) {
    require(mach.m == 1, "built-in simulator circuits cover single-query machines; supply a circuit file");
    return make_m1_simulator(mach, L);
}

QuantumCircuit default_corr_base(const QueryMachine& mach, int L) {
    require(mach.m == 1, "built-in simulator circuits cover single-query machines; supply a circuit file");
    require(L >= 1, "base circuit needs at least one gate");
    QuantumCircuit c;
    c.layout = RegisterLayout::qubits({{"W", 3}, {"Q", 1}});
    c.readonly_register = "Q";
    for (int t = 0; t + 1 < L; ++t) c.gates.emplace_back(gates::ID(), std::vector<int>{0}, "ID");
    bool f0 = mach.final_accept.at("0"), f1 = mach.final_accept.at("1");
    if (f0 && f1)
        c.gates.emplace_back(gates::X(), std::vector<int>{0}, "X");
    else if (!f0 && !f1)
        c.gates.emplace_back(gates::ID(), std::vector<int>{0}, "ID");
    else if (!f0 && f1)
        c.gates.emplace_back(gates::CNOT(), std::vector<int>{3, 0}, "CNOT");
    else
        c.gates.emplace_back(gates::CNOT0(), std::vector<int>{3, 0}, "CNOT0");
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hamgadget: local-Hamiltonian construction and verification workbench"};
    app.require_subcommand(1);

    auto* cmd_compile = app.add_subcommand("compile", "compile a circuit into clock Hamiltonian components");
    CommonFlags f_compile;
    std::string compile_circuit_path, compile_encoding = "unary";
    double compile_delta = 1.0;
    bool compile_hout = false;
    cmd_compile->add_option("circuit", compile_circuit_path, "circuit JSON")->required();
    cmd_compile->add_option("--encoding", compile_encoding, "clock encoding: abstract|unary")
        ->check(CLI::IsMember({"abstract", "unary"}));
    cmd_compile->add_option("--delta", compile_delta, "overall scale");
    cmd_compile->add_flag("--hout", compile_hout, "include the output penalty component");
    f_compile.attach(cmd_compile);

    auto* cmd_qh = app.add_subcommand("build-queryham", "build the adaptive query Hamiltonian");
    CommonFlags f_qh;
    std::string qh_machine_path, qh_encoding = "binary";
    cmd_qh->add_option("machine", qh_machine_path, "query machine JSON")->required();
    cmd_qh->add_option("--encoding", qh_encoding, "answer encoding: binary|unary")
        ->check(CLI::IsMember({"binary", "unary"}));
    f_qh.attach(cmd_qh);

    auto* cmd_as = app.add_subcommand("build-apxsim", "assemble a ground-observable instance");
    CommonFlags f_as;
    std::string as_machine_path, as_circuit_path;
    double as_gamma = 100.0;
    int as_auto_L = 4;
    cmd_as->add_option("machine", as_machine_path, "query machine JSON")->required();
    cmd_as->add_option("circuit", as_circuit_path, "simulator circuit JSON (optional for m=1)");
    cmd_as->add_option("--gamma", as_gamma, "clock strength multiplier");
    cmd_as->add_option("--auto-circuit-gates", as_auto_L, "gate count of the generated m=1 simulator");
    f_as.attach(cmd_as);

    auto* cmd_corr = app.add_subcommand("build-apx2corr", "assemble a two-point correlation instance");
    CommonFlags f_corr;
    std::string corr_machine_path, corr_circuit_path;
    double corr_gamma = 100.0;
    int corr_auto_L = 1;
    cmd_corr->add_option("machine", corr_machine_path, "query machine JSON")->required();
    cmd_corr->add_option("circuit", corr_circuit_path, "base circuit JSON with pristine W2, W3");
    cmd_corr->add_option("--gamma", corr_gamma, "clock strength multiplier");
    cmd_corr->add_option("--auto-circuit-gates", corr_auto_L, "gate count of the generated base circuit");
    f_corr.attach(cmd_corr);

    auto* cmd_sg = app.add_subcommand("build-spectralgap", "assemble a gap-promise instance with validation");
    CommonFlags f_sg;
    std::string sg_machine_path;
    double sg_delta = 0.01, sg_gamma = 1.0;
    bool sg_skip_validation = false;
    cmd_sg->add_option("machine", sg_machine_path, "query machine JSON")->required();
    cmd_sg->add_option("--validation-delta", sg_delta, "gap-estimate precision for query validation");
    cmd_sg->add_option("--gamma", sg_gamma, "recorded in provenance");
    cmd_sg->add_flag("--skip-validation", sg_skip_validation, "assemble without query validation");
    f_sg.attach(cmd_sg);

    auto* cmd_decide = app.add_subcommand("decide", "run the promise decider on an instance");
    CommonFlags f_decide;
    std::string decide_path;
    cmd_decide->add_option("instance", decide_path, "instance JSON")->required();
    f_decide.attach(cmd_decide);

    auto* cmd_verify = app.add_subcommand("verify", "run a verification suite");
    CommonFlags f_verify;
    std::string verify_suite, verify_config_path;
    cmd_verify->add_option("suite", verify_suite, "suite name")->required();
    cmd_verify->add_option("config", verify_config_path, "suite configuration JSON");
    f_verify.attach(cmd_verify);

    auto* cmd_vote = app.add_subcommand("vote", "exact + Monte-Carlo hierarchical voting");
    CommonFlags f_vote;
    std::string vote_machine_path, vote_verifier_path;
    int vote_p_amp = 10, vote_n_c = 0;
    long long vote_trials = 1000000;
    cmd_vote->add_option("machine", vote_machine_path, "query machine JSON")->required();
    cmd_vote->add_option("--verifier", vote_verifier_path, "verifier model JSON (default: honest model)");
    cmd_vote->add_option("--p-amp", vote_p_amp, "amplification exponent");
    cmd_vote->add_option("--n-c", vote_n_c, "down-weighting rounds + 1 (default 2^m)");
    cmd_vote->add_option("--trials", vote_trials, "Monte-Carlo trials (0 disables)");
    f_vote.attach(cmd_vote);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    auto t0 = std::chrono::steady_clock::now();
    try {
        if (cmd_compile->parsed()) {
            auto man = f_compile.manifest("compile");
            auto circuit = circuit_from_json(load_json(compile_circuit_path, &man));
            CompileOptions copts;
            copts.mode = compile_encoding == "unary" ? ClockMode::unary : ClockMode::abstract_level;
            copts.delta = compile_delta;
            copts.include_hout = compile_hout;
            Hamiltonian h = compile_circuit(circuit, copts);
            json out = hamiltonian_to_json(h);
            out["encoding"] = compile_encoding;
            out["delta"] = compile_delta;
            f_compile.emit(std::move(out), man, t0);
            return 0;
        }
        if (cmd_qh->parsed()) {
            auto man = f_qh.manifest("build-queryham");
            auto mach = machine_from_json(load_json(qh_machine_path, &man));
            Hamiltonian h = qh_encoding == "binary" ? build_query_hamiltonian(mach)
                                                    : build_unary_query_hamiltonian(mach);
            json out = hamiltonian_to_json(h);
            out["encoding"] = qh_encoding;
            out["epsilon"] = mach.epsilon;
            f_qh.emit(std::move(out), man, t0);
            return 0;
        }
        if (cmd_as->parsed()) {
            auto man = f_as.manifest("build-apxsim");
            auto mach = machine_from_json(load_json(as_machine_path, &man));
            QuantumCircuit circuit = as_circuit_path.empty()
                                         ? default_simulator(mach, as_auto_L)
                                         : circuit_from_json(load_json(as_circuit_path, &man));
            auto inst = build_apx_sim(mach, circuit, as_gamma);
            f_as.emit(apx_sim_instance_to_json(inst), man, t0);
            return 0;
        }
        if (cmd_corr->parsed()) {
            auto man = f_corr.manifest("build-apx2corr");
            auto mach = machine_from_json(load_json(corr_machine_path, &man));
            QuantumCircuit circuit = corr_circuit_path.empty()
                                         ? default_corr_base(mach, corr_auto_L)
                                         : circuit_from_json(load_json(corr_circuit_path, &man));
            auto inst = build_apx_2corr(mach, circuit, corr_gamma);
            f_corr.emit(apx_2corr_instance_to_json(inst), man, t0);
            return 0;
        }
        if (cmd_sg->parsed()) {
            auto man = f_sg.manifest("build-spectralgap");
            auto mach = machine_from_json(load_json(sg_machine_path, &man));
            auto inst =
                build_spectral_gap_instance(mach, mach.epsilon, sg_delta, sg_gamma, sg_skip_validation);
            f_sg.emit(spectral_gap_instance_to_json(inst), man, t0);
            return 0;
        }
        if (cmd_decide->parsed()) {
            auto man = f_decide.manifest("decide");
            json inst_json = load_json(decide_path, &man);
            std::string type = inst_json.value("type", std::string("apx-sim"));
            json out;
            if (type == "apx-sim") {
                auto inst = apx_sim_instance_from_json(inst_json);
                auto d = decide_apx_sim(inst, f_decide.spectral());
                out["verdict"] = verdict_name(d.verdict);
                out["intermediate"] = json{{"lambda", d.lambda},
                                           {"lambda_h2", d.lambda_h2},
                                           {"ground_min_a", d.ground_min_a},
                                           {"low_energy_min", d.low_energy_min},
                                           {"a", inst.threshold_a},
                                           {"b", inst.threshold_b},
                                           {"delta", inst.delta}};
            } else if (type == "spectral-gap") {
                auto inst = spectral_gap_instance_from_json(inst_json);
                auto d = decide_spectral_gap(inst.h_final, inst.alpha, f_decide.spectral());
                out["verdict"] = verdict_name(d.verdict);
                out["intermediate"] = json{{"gap", d.gap}, {"alpha", d.alpha}};
            } else {
                throw Error("no decider for instance type '" + type + "'");
            }
            f_decide.emit(std::move(out), man, t0);
            return 0;
        }
        if (cmd_verify->parsed()) {
            auto man = f_verify.manifest("verify " + verify_suite);
            bool known = false;
            for (const auto& s : suite_names()) known = known || s == verify_suite;
            require(known, "unknown suite name: " + verify_suite);
            json cfg = json::object();
            if (!verify_config_path.empty()) cfg = load_json(verify_config_path, &man);
            auto rep = run_suite(verify_suite, cfg, resolve_jobs(f_verify.jobs));
            json out = suite_report_to_json(rep);
            for (const auto& a : rep.assertions)
                if (!a.pass)
                    std::cerr << "[FAIL] " << rep.suite << ": " << a.name << " (measured " << a.measured
                              << ", bound " << a.bound << ") " << a.detail << "\n";
            std::cerr << "suite " << rep.suite << ": " << (rep.pass ? "PASS" : "FAIL") << " ("
                      << rep.assertions.size() << " assertions)\n";
            f_verify.emit(std::move(out), man, t0);
            return rep.pass ? 0 : 1;
        }
        if (cmd_vote->parsed()) {
            auto man = f_vote.manifest("vote");
            auto mach = machine_from_json(load_json(vote_machine_path, &man));
            VerifierModel verifier;
            if (vote_verifier_path.empty()) {
                verifier = honest_verifier(mach, mach.proof_qubits, vote_p_amp);
            } else {
                verifier = verifier_from_json(load_json(vote_verifier_path, &man));
            }
            int n_c = vote_n_c > 0 ? vote_n_c : static_cast<int>(std::int64_t(1) << mach.m);
            auto exact = exact_voting_distribution(mach, verifier, n_c);
            json out;
            out["exact"] = voting_outcome_to_json(exact);
            if (vote_trials > 0) {
                auto emp =
                    simulate_voting(mach, verifier, n_c, vote_trials, f_vote.seed, resolve_jobs(f_vote.jobs));
                out["empirical"] = empirical_outcome_to_json(emp);
            }
            f_vote.emit(std::move(out), man, t0);
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: malformed input: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
