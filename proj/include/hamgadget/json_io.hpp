#pragma once

#include <chrono>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hamgadget/circuits.hpp"
#include "hamgadget/operators.hpp"
#include "hamgadget/queryham.hpp"
#include "hamgadget/reductions.hpp"
#include "hamgadget/spectra.hpp"
#include "hamgadget/voting.hpp"

namespace hamgadget {

using nlohmann::json;

// ---------------------------------------------------------------------------
// complex numbers are always [re, im] pairs
// ---------------------------------------------------------------------------

inline json complex_to_json(const cxd& z) { return json::array({z.real(), z.imag()}); }

inline cxd complex_from_json(const json& j) {
    require(j.is_array() && j.size() == 2, "complex number must be a [re, im] pair");
    return cxd(j[0].get<double>(), j[1].get<double>());
}

inline json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) rows.push_back(complex_to_json(m(r, c)));
    return rows;
}

/// Row-major flat list of [re, im] pairs for a square matrix.
inline Matrix matrix_from_json(const json& j) {
    require(j.is_array(), "matrix must be an array of [re, im] pairs");
    std::size_t n2 = j.size();
    Eigen::Index n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n2))));
    require(static_cast<std::size_t>(n) * static_cast<std::size_t>(n) == n2, "matrix entry count is not a square");
    Matrix m(n, n);
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) m(r, c) = complex_from_json(j[k++]);
    return m;
}

// ---------------------------------------------------------------------------
// layouts, Hamiltonians, observables
// ---------------------------------------------------------------------------

inline json layout_to_json(const RegisterLayout& lay) {
    json regs = json::array();
    for (const auto& r : lay.registers()) {
        if (r.site_dim == 2)
            regs.push_back(json::array({r.name, r.sites}));
        else
            regs.push_back(json::array({r.name, r.sites, r.site_dim}));
    }
    return regs;
}

inline RegisterLayout layout_from_json(const json& j) {
    require(j.is_array(), "layout must be a list of [name, count] entries");
    std::vector<Register> regs;
    for (const auto& e : j) {
        require(e.is_array() && (e.size() == 2 || e.size() == 3), "layout entry must be [name, count(, dim)]");
        Register r;
        r.name = e[0].get<std::string>();
        r.sites = e[1].get<int>();
        r.site_dim = e.size() == 3 ? e[2].get<int>() : 2;
        regs.push_back(std::move(r));
    }
    return RegisterLayout(std::move(regs));
}

inline json hamiltonian_to_json(const Hamiltonian& h) {
    json out;
    out["layout"] = layout_to_json(h.layout);
    out["terms"] = json::array();
    for (const auto& t : h.terms) {
        json jt;
        jt["support"] = t.support;
        jt["coefficient"] = t.coefficient;
        jt["block"] = matrix_to_json(t.block);
        if (!t.tag.empty()) jt["tag"] = t.tag;
        out["terms"].push_back(std::move(jt));
    }
    out["locality"] = h.locality();
    return out;
}

inline Hamiltonian hamiltonian_from_json(const json& j) {
    require(j.contains("layout") && j.contains("terms"), "Hamiltonian JSON needs layout and terms");
    Hamiltonian h(layout_from_json(j["layout"]));
    for (const auto& jt : j["terms"]) {
        LocalTerm t;
        t.support = jt.at("support").get<std::vector<int>>();
        t.coefficient = jt.at("coefficient").get<double>();
        t.block = matrix_from_json(jt.at("block"));
        if (jt.contains("tag")) t.tag = jt["tag"].get<std::string>();
        h.add(std::move(t));
    }
    return h;
}

// ---------------------------------------------------------------------------
// circuits
// ---------------------------------------------------------------------------

inline json circuit_to_json(const QuantumCircuit& c) {
    json out;
    out["layout"] = layout_to_json(c.layout);
    out["readonly"] = c.readonly_register;
    out["gates"] = json::array();
    for (const auto& g : c.gates) {
        json jg;
        jg["label"] = g.label;
        jg["targets"] = g.targets;
        if (gates::by_label(g.label).size() == 0) jg["unitary"] = matrix_to_json(g.unitary);
        out["gates"].push_back(std::move(jg));
    }
    return out;
}

inline QuantumCircuit circuit_from_json(const json& j) {
    QuantumCircuit c;
    c.layout = layout_from_json(j.at("layout"));
    c.readonly_register = j.value("readonly", std::string("Q"));
    for (const auto& jg : j.at("gates")) {
        std::string label = jg.value("label", std::string(""));
        auto targets = jg.at("targets").get<std::vector<int>>();
        if (label == "TOFFOLI") {
            require(targets.size() == 3, "TOFFOLI takes [control, control, target]");
            for (auto& g : gates::toffoli_decomposed(targets[0], targets[1], targets[2])) c.gates.push_back(g);
            continue;
        }
        Matrix u = gates::by_label(label);
        if (jg.contains("unitary")) u = matrix_from_json(jg["unitary"]);
        require(u.size() > 0, "gate '" + label + "' has no built-in matrix and no explicit unitary");
        c.gates.emplace_back(std::move(u), targets, label);
    }
    validate_circuit(c);
    return c;
}

// ---------------------------------------------------------------------------
// query machines
// ---------------------------------------------------------------------------

inline json machine_to_json(const QueryMachine& mach) {
    json out;
    out["m"] = mach.m;
    out["epsilon"] = mach.epsilon;
    out["M_proof"] = mach.proof_qubits;
    json nodes = json::object();
    for (const auto& [prefix, hq] : mach.queries) {
        int yq = 0;
        while ((Eigen::Index(1) << yq) < hq.rows()) ++yq;
        Hamiltonian node(RegisterLayout::single("Y", yq));
        std::vector<int> sup(static_cast<std::size_t>(yq));
        std::iota(sup.begin(), sup.end(), 0);
        node.add(sup, hq);
        nodes[prefix] = hamiltonian_to_json(node);
    }
    out["nodes"] = std::move(nodes);
    json fin = json::object();
    for (const auto& [y, acc] : mach.final_accept) fin[y] = acc ? 1 : 0;
    out["final"] = std::move(fin);
    return out;
}

inline QueryMachine machine_from_json(const json& j) {
    QueryMachine mach;
    mach.m = j.at("m").get<int>();
    mach.epsilon = j.at("epsilon").get<double>();
    mach.proof_qubits = j.value("M_proof", 1);
    for (const auto& [prefix, node] : j.at("nodes").items()) {
        Hamiltonian h = hamiltonian_from_json(node);
        mach.queries[prefix] = realize(h);
    }
    for (const auto& [y, acc] : j.at("final").items()) mach.final_accept[y] = acc.get<int>() != 0;
    validate_machine(mach);
    return mach;
}

// ---------------------------------------------------------------------------
// verifier models and voting outcomes (rationals as "num/den" strings)
// ---------------------------------------------------------------------------

inline json rational_to_json(const Rational& r) {
    std::ostringstream os;
    os << boost::multiprecision::numerator(r) << "/" << boost::multiprecision::denominator(r);
    return json{{"exact", os.str()}, {"approx", to_double(r)}};
}

inline Rational rational_from_json(const json& j) {
    if (j.is_number()) return Rational(j.get<double>());
    std::string s = j.is_object() ? j.at("exact").get<std::string>() : j.get<std::string>();
    auto slash = s.find('/');
    using boost::multiprecision::cpp_int;
    if (slash == std::string::npos) return Rational(cpp_int(s), 1);
    return Rational(cpp_int(s.substr(0, slash)), cpp_int(s.substr(slash + 1)));
}

inline VerifierModel verifier_from_json(const json& j) {
    VerifierModel v;
    v.proof_qubits = j.value("M_proof", 1);
    v.p_amp = j.value("p_amp", 10);
    if (j.contains("circuits")) {
        v.mode = VerifierModel::Mode::circuit;
        v.proof_register = j.value("proof_register", std::string("P"));
        v.output_qubit = j.value("output_qubit", 0);
        for (const auto& [prefix, cj] : j.at("circuits").items()) v.circuits[prefix] = circuit_from_json(cj);
    } else {
        v.mode = VerifierModel::Mode::abstract_probabilities;
        for (const auto& [prefix, pj] : j.at("p").items()) v.probabilities[prefix] = rational_from_json(pj);
    }
    return v;
}

inline json voting_outcome_to_json(const VotingOutcome& out) {
    json j;
    j["m"] = out.m;
    j["q"] = out.q;
    j["n_c"] = out.n_c;
    json probs = json::object();
    for (const auto& [y, p] : out.prob) probs[y] = rational_to_json(p);
    j["prob"] = std::move(probs);
    j["prob_hash"] = rational_to_json(out.prob_hash);
    j["mass_a"] = rational_to_json(out.mass_a);
    j["mass_b"] = rational_to_json(out.mass_b);
    j["mass_c"] = rational_to_json(out.mass_c);
    j["delta"] = rational_to_json(out.delta);
    j["accept"] = rational_to_json(out.accept);
    return j;
}

inline json empirical_outcome_to_json(const EmpiricalOutcome& out) {
    json j;
    j["trials"] = out.trials;
    j["freq"] = out.freq;
    j["freq_hash"] = out.freq_hash;
    j["freq_a"] = out.freq_a;
    j["freq_b"] = out.freq_b;
    j["freq_c"] = out.freq_c;
    j["accept"] = out.accept;
    return j;
}

// ---------------------------------------------------------------------------
// spectral reports, instances, verdicts
// ---------------------------------------------------------------------------

inline json spectral_report_to_json(const SpectralReport& rep) {
    json j;
    j["eigenvalues"] = rep.eigenvalues;
    j["ground_energy"] = rep.ground_energy;
    j["gap"] = rep.gap;
    j["residuals"] = rep.residuals;
    j["tolerance"] = rep.tolerance;
    j["degeneracy_tol"] = rep.degeneracy_tol;
    j["backend"] = rep.backend;
    j["seed"] = rep.seed;
    j["full_spectrum"] = rep.full_spectrum;
    return j;
}

inline json apx_sim_params_to_json(const ApxSimParams& p) {
    return json{{"L", p.L},         {"m", p.m},         {"epsilon", p.epsilon},
                {"eta", p.eta},     {"gamma", p.gamma}, {"Delta", p.big_delta}};
}

inline ApxSimParams apx_sim_params_from_json(const json& j) {
    ApxSimParams p;
    p.L = j.value("L", 0);
    p.m = j.value("m", 0);
    p.epsilon = j.value("epsilon", 0.0);
    p.eta = j.value("eta", 0.0);
    p.gamma = j.value("gamma", 0.0);
    p.big_delta = j.value("Delta", 0.0);
    return p;
}

inline json provenance_json(const QueryMachine& mach, double gamma, double eps, double delta) {
    json j;
    j["machine_hash"] = fnv1a(machine_to_json(mach).dump());
    j["gamma"] = gamma;
    j["epsilon"] = eps;
    j["delta"] = delta;
    return j;
}

inline json apx_sim_instance_to_json(const ApxSimInstance& inst) {
    json j;
    j["type"] = "apx-sim";
    j["hamiltonian"] = hamiltonian_to_json(inst.h);
    j["observable_a"] = hamiltonian_to_json(inst.a);
    j["a"] = inst.threshold_a;
    j["b"] = inst.threshold_b;
    j["delta"] = inst.delta;
    j["params"] = apx_sim_params_to_json(inst.params);
    j["circuit"] = circuit_to_json(inst.circuit);
    j["machine"] = machine_to_json(inst.machine);
    j["provenance"] = provenance_json(inst.machine, inst.params.gamma, inst.params.epsilon, inst.delta);
    return j;
}

inline ApxSimInstance apx_sim_instance_from_json(const json& j) {
    ApxSimInstance inst;
    inst.h = hamiltonian_from_json(j.at("hamiltonian"));
    inst.a = hamiltonian_from_json(j.at("observable_a"));
    inst.threshold_a = j.at("a").get<double>();
    inst.threshold_b = j.at("b").get<double>();
    inst.delta = j.at("delta").get<double>();
    if (j.contains("params")) inst.params = apx_sim_params_from_json(j["params"]);
    if (j.contains("circuit")) inst.circuit = circuit_from_json(j["circuit"]);
    if (j.contains("machine")) inst.machine = machine_from_json(j["machine"]);
    return inst;
}

inline json apx_2corr_instance_to_json(const Apx2CorrInstance& inst) {
    json j;
    j["type"] = "apx-2corr";
    j["hamiltonian"] = hamiltonian_to_json(inst.h);
    j["observable_a"] = hamiltonian_to_json(inst.a);
    j["observable_b"] = hamiltonian_to_json(inst.b);
    j["a"] = inst.threshold_a;
    j["b"] = inst.threshold_b;
    j["delta"] = inst.delta;
    j["params"] = apx_sim_params_to_json(inst.params);
    j["circuit"] = circuit_to_json(inst.circuit);
    j["machine"] = machine_to_json(inst.machine);
    j["provenance"] = provenance_json(inst.machine, inst.params.gamma, inst.params.epsilon, inst.delta);
    return j;
}

inline Apx2CorrInstance apx_2corr_instance_from_json(const json& j) {
    Apx2CorrInstance inst;
    inst.h = hamiltonian_from_json(j.at("hamiltonian"));
    inst.a = hamiltonian_from_json(j.at("observable_a"));
    inst.b = hamiltonian_from_json(j.at("observable_b"));
    inst.threshold_a = j.at("a").get<double>();
    inst.threshold_b = j.at("b").get<double>();
    inst.delta = j.at("delta").get<double>();
    if (j.contains("params")) inst.params = apx_sim_params_from_json(j["params"]);
    if (j.contains("circuit")) inst.circuit = circuit_from_json(j["circuit"]);
    if (j.contains("machine")) inst.machine = machine_from_json(j["machine"]);
    return inst;
}

inline json spectral_gap_instance_to_json(const SpectralGapInstance& inst) {
    json j;
    j["type"] = "spectral-gap";
    j["h_final"] = hamiltonian_to_json(inst.h_final);
    j["alpha"] = inst.alpha;
    j["components"] = json{{"h", hamiltonian_to_json(inst.h)},
                           {"rejecting_strings", inst.rejecting_strings},
                           {"b_register", "B"}};
    json log = json::array();
    for (const auto& e : inst.validation.log)
        log.push_back(json{{"prefix", e.prefix},
                           {"true_gap", e.true_gap},
                           {"estimated_gap", e.estimated_gap},
                           {"replaced", e.replaced}});
    j["replacement_log"] = std::move(log);
    j["epsilon"] = inst.epsilon;
    j["delta"] = inst.delta_v;
    j["gamma"] = inst.gamma;
    return j;
}

inline SpectralGapInstance spectral_gap_instance_from_json(const json& j) {
    SpectralGapInstance inst;
    inst.h_final = hamiltonian_from_json(j.at("h_final"));
    inst.alpha = j.at("alpha").get<double>();
    if (j.contains("components") && j["components"].contains("h"))
        inst.h = hamiltonian_from_json(j["components"]["h"]);
    inst.epsilon = j.value("epsilon", 0.0);
    inst.delta_v = j.value("delta", 0.0);
    return inst;
}

// ---------------------------------------------------------------------------
// run manifest
// ---------------------------------------------------------------------------

/// Reproducibility header embedded in every emitted report. The wall time
/// is informational and excluded from determinism comparisons.
struct RunManifest {
    std::string command;
    std::map<std::string, std::uint64_t> input_hashes;
    std::uint64_t seed = kDefaultSeed;
    double tol = 1e-10;
    std::int64_t dense_cutoff = 1500;
    int jobs = 1;
    std::string backend = "dense+lanczos";
    double wall_time_s = 0.0;
};

inline json manifest_to_json(const RunManifest& m) {
    json j;
    j["command"] = m.command;
    json hashes = json::object();
    for (const auto& [path, h] : m.input_hashes) {
        std::ostringstream os;
        os << std::hex << h;
        hashes[path] = os.str();
    }
    j["input_hashes"] = std::move(hashes);
    j["seed"] = m.seed;
    j["tolerance"] = m.tol;
    j["dense_cutoff"] = m.dense_cutoff;
    j["jobs"] = m.jobs;
    j["backend"] = m.backend;
    j["version"] = kToolVersion;
    j["wall_time_s"] = m.wall_time_s;
    return j;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline json load_json(const std::string& path, RunManifest* manifest = nullptr) {
    std::string text = read_file(path);
    if (manifest) manifest->input_hashes[path] = fnv1a(text);
    json j = json::parse(text, nullptr, false);
    require(!j.is_discarded(), "malformed JSON in " + path);
    return j;
}

/// Atomic write: temp file then rename.
inline void write_json(const std::string& path, const json& j) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        require(out.good(), "cannot write file: " + path);
        out << j.dump(2) << "\n";
    }
    require(std::rename(tmp.c_str(), path.c_str()) == 0, "cannot finalize file: " + path);
}

}  // namespace hamgadget
