#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "hamgadget/fixtures.hpp"
#include "hamgadget/json_io.hpp"
#include "hamgadget/reductions.hpp"
#include "hamgadget/voting.hpp"

namespace hamgadget {

/// One checked assertion: the claim id names the verified property in this
/// project's vocabulary, `measured` vs `bound` give the margin.
struct Assertion {
    std::string name;
    std::string claim;
    bool pass = false;
    double measured = 0.0;
    double bound = 0.0;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<Assertion> assertions;
    bool pass = true;

    void add(Assertion a) {
        pass = pass && a.pass;
        assertions.push_back(std::move(a));
    }
    void check(const std::string& name, const std::string& claim, bool ok, double measured = 0.0,
               double bound = 0.0, const std::string& detail = "") {
        add({name, claim, ok, measured, bound, detail});
    }
};

inline json suite_report_to_json(const SuiteReport& rep) {
    json j;
    j["suite"] = rep.suite;
    j["pass"] = rep.pass;
    j["assertions"] = json::array();
    for (const auto& a : rep.assertions)
        j["assertions"].push_back(json{{"name", a.name},
                                       {"claim", a.claim},
                                       {"pass", a.pass},
                                       {"measured", a.measured},
                                       {"bound", a.bound},
                                       {"detail", a.detail}});
    return j;
}

namespace suites {

inline std::vector<QuantumCircuit> config_circuits(const json& cfg) {
    int count = cfg.value("count", 10);
    std::uint64_t seed = cfg.value("seed", std::uint64_t(12345));
    int max_gates = cfg.value("max_gates", 6);
    int n_w = cfg.value("w_qubits", 1);
    int n_q = cfg.value("q_qubits", 2);
    std::vector<QuantumCircuit> out;
    for (int i = 0; i < count; ++i) {
        int L = 1 + static_cast<int>(mix_seed(seed, static_cast<std::uint64_t>(i)) % static_cast<std::uint64_t>(max_gates));
        out.push_back(random_circuit(n_w, n_q, L, mix_seed(seed, 1000 + static_cast<std::uint64_t>(i))));
    }
    return out;
}

inline CompileOptions config_compile_options(const json& cfg, ClockMode mode) {
    CompileOptions copts;
    copts.mode = mode;
    if (cfg.contains("weights")) {
        const auto& w = cfg["weights"];
        copts.w_in = w.value("in", 1.0);
        copts.w_prop = w.value("prop", 1.0);
        copts.w_stab = w.value("stab", 1.0);
    }
    copts.omit_prop_step = cfg.value("omit_prop_step", 0);
    return copts;
}

/// Kernel of the compile output == span of history states, both encodings.
inline SuiteReport nullspace(const json& cfg, int jobs = 1) {
    SuiteReport rep;
    rep.suite = "nullspace";
    auto circuits = config_circuits(cfg);
    struct Item {
        int idx;
        ClockMode mode;
    };
    std::vector<Item> items;
    for (int i = 0; i < static_cast<int>(circuits.size()); ++i)
        for (auto mode : {ClockMode::abstract_level, ClockMode::unary}) items.push_back({i, mode});
    std::vector<NullspaceReport> results(items.size());
    parallel_for(items.size(), jobs, [&](std::size_t k) {
        auto copts = config_compile_options(cfg, items[k].mode);
        if (copts.omit_prop_step > circuits[static_cast<std::size_t>(items[k].idx)].gate_count())
            copts.omit_prop_step = circuits[static_cast<std::size_t>(items[k].idx)].gate_count();
        results[k] = verify_nullspace_with(circuits[static_cast<std::size_t>(items[k].idx)], copts);
    });
    for (std::size_t k = 0; k < items.size(); ++k) {
        const auto& r = results[k];
        std::string label = "circuit " + std::to_string(items[k].idx) +
                            (items[k].mode == ClockMode::unary ? " unary" : " abstract");
        rep.check("kernel-dimension " + label, "history-state-nullspace-equality",
                  r.kernel_dim == r.expected_dim, r.kernel_dim, r.expected_dim);
        rep.check("principal-angle " + label, "history-state-nullspace-equality", r.pass,
                  r.max_principal_angle, 1e-7);
    }
    return rep;
}

/// Smallest nonzero eigenvalue of the scaled compile output respects the
/// pi^2 Delta / (64 L^3) floor.
inline SuiteReport lemma1(const json& cfg, int jobs = 1) {
    SuiteReport rep;
    rep.suite = "lemma1";
    auto circuits = config_circuits(cfg);
    std::vector<double> deltas = cfg.value("deltas", std::vector<double>{1.0, 10.0});
    struct Item {
        int idx;
        ClockMode mode;
        double delta;
    };
    std::vector<Item> items;
    for (int i = 0; i < static_cast<int>(circuits.size()); ++i)
        for (auto mode : {ClockMode::abstract_level, ClockMode::unary})
            for (double d : deltas) items.push_back({i, mode, d});
    std::vector<GapBoundCheck> results(items.size());
    parallel_for(items.size(), jobs, [&](std::size_t k) {
        auto copts = config_compile_options(cfg, items[k].mode);
        copts.delta = items[k].delta;
        results[k] = check_gap_lower_bound_with(circuits[static_cast<std::size_t>(items[k].idx)], copts);
    });
    for (std::size_t k = 0; k < items.size(); ++k) {
        std::string label = "circuit " + std::to_string(items[k].idx) + " delta " +
                            std::to_string(items[k].delta) +
                            (items[k].mode == ClockMode::unary ? " unary" : " abstract");
        rep.check("gap-floor " + label, "clock-gap-lower-bound", results[k].pass,
                  results[k].smallest_nonzero, results[k].bound,
                  results[k].flagged ? "within 1e-9 of the floor" : "");
    }
    return rep;
}

/// Binary-encoding block separation for the configured machines.
inline SuiteReport lemma4(const json& cfg, int /*jobs*/ = 1) {
    SuiteReport rep;
    rep.suite = "lemma4";
    double eps = cfg.value("epsilon", 0.5);
    double zb_scale = cfg.value("zero_branch_scale", 1.0);
    for (const auto& name : cfg.value("machines", std::vector<std::string>{"m1-yes", "m1-no", "m2-both-no",
                                                                           "m2-adaptive", "m3-mixed"})) {
        auto mach = fixtures::machine(name, eps);
        auto h = build_query_hamiltonian(mach, eps, ZeroBranch::uniform_shift, zb_scale);
        auto r = verify_block_separation(h, mach, eps, QueryEncoding::binary);
        rep.check("ground-block " + name, "correct-block-attains-ground",
                  std::abs(r.min_correct - r.lambda_h) <= 1e-9, r.min_correct, r.lambda_h);
        for (const auto& b : r.blocks) {
            if (b.correct) continue;
            rep.check("margin " + name + " block " + b.block_label, "incorrect-block-margin",
                      b.margin >= r.required_margin - 1e-10, b.margin, r.required_margin);
        }
    }
    return rep;
}

/// Unary-encoding block separation, penalty floor, invariance, and
/// valid-pattern spectra agreement with the binary encoding.
inline SuiteReport lemma5(const json& cfg, int /*jobs*/ = 1) {
    SuiteReport rep;
    rep.suite = "lemma5";
    double eps = cfg.value("epsilon", 0.5);
    double stab_scale = cfg.value("stab_scale", 1.0);
    for (const auto& name :
         cfg.value("machines", std::vector<std::string>{"m2-both-no", "m2-adaptive", "m3-mixed"})) {
        auto mach = fixtures::machine(name, eps);
        auto hu = build_unary_query_hamiltonian(mach, eps, ZeroBranch::uniform_shift, 1.0, stab_scale);
        auto hb = build_query_hamiltonian(mach, eps);
        rep.check("locality " + name, "unary-encoding-4-locality", hu.locality() <= 4, hu.locality(), 4);
        for (int s : hu.layout.register_sites("X"))
            rep.check("invariance " + name + " site " + std::to_string(s), "answer-register-invariance",
                      is_diagonal_on_site(hu, s));

        auto ru = verify_block_separation(hu, mach, eps, QueryEncoding::unary);
        auto rb = verify_block_separation(hb, mach, eps, QueryEncoding::binary);
        rep.check("block-separation " + name, "incorrect-block-margin", ru.pass, 0, 0, ru.failure);
        rep.check("ground-floor " + name, "all-zero-string-energy-cap",
                  ru.lambda_h < 3 * eps - eps / 3 + 1e-12, ru.lambda_h, 3 * eps - eps / 3);

        Hamiltonian penalty = hu.component("penalty");
        for (const auto& b : ru.blocks) {
            if (b.valid_pattern) {
                for (const auto& bb : rb.blocks) {
                    if (bb.query_string != b.query_string) continue;
                    double worst = 0.0;
                    for (std::size_t i = 0; i < b.spectrum.size(); ++i)
                        worst = std::max(worst, std::abs(b.spectrum[i] - bb.spectrum[i]));
                    rep.check("valid-pattern-spectrum " + name + " " + b.block_label,
                              "valid-pattern-spectra-match", worst <= 1e-10, worst, 1e-10);
                }
            } else {
                // Penalty component alone must hold every invalid pattern at
                // 3*eps or more.
                std::map<int, int> assign;
                auto xs = hu.layout.register_sites("X");
                for (std::size_t jx = 0; jx < xs.size(); ++jx)
                    assign[xs[jx]] = (string_to_bits(b.block_label) >> (xs.size() - 1 - jx)) & 1 ? 1 : 0;
                double stab_energy = 0.0;
                if (!penalty.terms.empty()) {
                    auto sec = restrict_assignment(penalty, assign);
                    stab_energy = dense_eigenvalues(realize(sec.h)).front();
                }
                rep.check("penalty-floor " + name + " " + b.block_label, "invalid-pattern-penalty-floor",
                          stab_energy >= 3 * eps - 1e-10, stab_energy, 3 * eps);
                rep.check("invalid-margin " + name + " " + b.block_label, "invalid-pattern-margin",
                          b.margin >= eps / std::pow(4.0, mach.m) - 1e-10, b.margin,
                          eps / std::pow(4.0, mach.m));
            }
        }
    }
    return rep;
}

/// Low-energy states overlap the zero space of the gapped part at least as
/// much as the closed-form bound, over random split Hamiltonians.
inline SuiteReport corollary1(const json& cfg, int /*jobs*/ = 1) {
    SuiteReport rep;
    rep.suite = "corollary1";
    int instances = cfg.value("instances", 50);
    int qubits = cfg.value("qubits", 3);
    std::uint64_t seed = cfg.value("seed", std::uint64_t(777));
    double j_claim_scale = cfg.value("j_claim_scale", 1.0);
    std::mt19937_64 rng(seed);
    for (int inst = 0; inst < instances; ++inst) {
        const Eigen::Index dim = Eigen::Index(1) << qubits;
        Matrix basis = random_hermitian(dim, rng());
        Eigen::SelfAdjointEigenSolver<Matrix> es(basis);
        int sdim = 1 + static_cast<int>(rng() % 4);
        Matrix ps = Matrix::Zero(dim, dim);
        for (int i = 0; i < sdim; ++i) ps += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
        double K = 0.1 + 0.9 * (static_cast<double>(rng() % 1000) / 1000.0);
        double J = 2.0 * K + 0.6 + 3.0 * (static_cast<double>(rng() % 1000) / 1000.0);
        double delta = 0.02 * K;
        Matrix h = J * (Matrix::Identity(dim, dim) - ps) + random_hermitian(dim, rng(), K);
        Eigen::SelfAdjointEigenSolver<Matrix> hs(h);
        double lambda = hs.eigenvalues()(0);
        double bound = projection_overlap_bound(K, J * j_claim_scale, delta);
        double worst = 1.0;
        for (Eigen::Index i = 0; i < dim; ++i) {
            if (hs.eigenvalues()(i) > lambda + delta) break;
            worst = std::min(worst, (ps * hs.eigenvectors().col(i)).squaredNorm());
        }
        rep.check("overlap instance " + std::to_string(inst), "low-energy-overlap-bound",
                  worst >= bound - 1e-9, worst, bound);
    }
    return rep;
}

/// End-to-end ground-observable dichotomy for single-query machines.
inline SuiteReport theorem1(const json& cfg, int jobs = 1) {
    SuiteReport rep;
    rep.suite = "theorem1";
    double eps = cfg.value("epsilon", 0.5);
    int L = cfg.value("L", 4);
    std::vector<double> gammas = cfg.value("gammas", std::vector<double>{1.0, 10.0, 100.0});
    auto names = cfg.value("machines", std::vector<std::string>{"m1-yes", "m1-yes-reject", "m1-no",
                                                                "m1-no-reject", "m1-invalid-accept",
                                                                "m1-invalid-reject"});
    struct Result {
        std::string name;
        bool accepts = false;
        bool decided = false;
        double margin_err = 0.0;
        std::string detail;
    };
    std::vector<Result> results(names.size());
    parallel_for(names.size(), jobs, [&](std::size_t i) {
        auto mach = fixtures::machine(names[i], eps);
        auto& res = results[i];
        res.name = names[i];
        res.accepts = machine_classical_accepts(mach);
        auto circuit = make_m1_simulator(mach, L);
        for (double gamma : gammas) {
            auto inst = build_apx_sim(mach, circuit, gamma);
            auto d = decide_apx_sim(inst);
            if (res.accepts && d.verdict == Verdict::yes) {
                res.decided = true;
                res.margin_err = std::abs(d.ground_min_a - inst.threshold_a);
                res.detail = "gamma " + std::to_string(gamma);
                break;
            }
            if (!res.accepts && d.verdict == Verdict::no) {
                res.decided = true;
                res.margin_err = std::max(0.0, inst.threshold_b - d.low_energy_min);
                res.detail = "gamma " + std::to_string(gamma);
                break;
            }
        }
    });
    for (const auto& r : results) {
        rep.check("verdict " + r.name, "ground-observable-dichotomy", r.decided, 0, 0,
                  r.decided ? (std::string(r.accepts ? "YES" : "NO") + " at " + r.detail)
                            : "no gamma in the sweep decided the instance");
        if (r.decided) rep.check("margin " + r.name, "threshold-margin", r.margin_err <= 1e-8, r.margin_err, 1e-8);
    }
    // Invalid-query machines: identical verdicts under both answer resolutions.
    for (const auto& name : names) {
        if (name.find("invalid") == std::string::npos) continue;
        auto mach = fixtures::machine(name, eps);
        bool r0 = mach.final_accept.at("0"), r1 = mach.final_accept.at("1");
        rep.check("resolution-consistency " + name, "invalid-query-consistency", r0 == r1, r0, r1);
    }
    return rep;
}

/// Correlation bounds for the Bell-gadget construction.
inline SuiteReport apx2corr(const json& cfg, int /*jobs*/ = 1) {
    SuiteReport rep;
    rep.suite = "apx2corr";
    double eps = cfg.value("epsilon", 0.5);
    double gamma = cfg.value("gamma", 100.0);
    int samples = cfg.value("samples", 100000);
    std::uint64_t seed = cfg.value("seed", std::uint64_t(31415));
    bool omit_gadget = cfg.value("omit_gadget", false);
    int l0 = cfg.value("L", 1);

    auto yes_mach = fixtures::machine(cfg.value("machine", std::string("m1-yes")), eps);
    QuantumCircuit base;
    base.layout = RegisterLayout::qubits({{"W", 3}, {"Q", 1}});
    base.readonly_register = "Q";
    for (int t = 0; t + 1 < l0; ++t) base.gates.emplace_back(gates::ID(), std::vector<int>{0}, "ID");
    base.gates.emplace_back(gates::CNOT(), std::vector<int>{3, 0}, "CNOT");

    const double T = l0 + 13.0;
    const double yes_floor = (1.0 / T) * (4.0 - 49.0 / T);
    const double no_ceiling = (1.0 / T) * (1.0 - 1.0 / (4.0 * T));

    // YES side: the canonical ground history state.
    auto yes_inst = build_apx_2corr(yes_mach, base, gamma, omit_gadget);
    auto hist = instance_ground_history_state(yes_inst);
    double energy = expectation(hist, yes_inst.h);
    double lambda2 = query_ground_energy(yes_mach, QueryEncoding::unary);
    rep.check("yes-ground-energy", "ground-energy-equals-query-ground", std::abs(energy - lambda2) <= 1e-9,
              energy, lambda2);
    double f_yes = correlation_f(hist, yes_inst.a, yes_inst.b);
    rep.check("yes-correlation", "yes-correlation-floor", f_yes >= yes_floor - 1e-12, f_yes, yes_floor);

    // Decomposition identity on random proofs.
    {
        std::vector<Register> proof_regs;
        for (const auto& r : yes_inst.circuit.layout.registers())
            if (r.name != "W") proof_regs.push_back(r);
        RegisterLayout proof_lay(proof_regs);
        double worst = 0.0;
        for (std::uint64_t s = 0; s < 10; ++s) {
            auto hc = history_correlation(yes_inst, StateVector::random(proof_lay, mix_seed(seed, s)));
            worst = std::max(worst, std::abs(hc.direct_f - hc.decomposition_f));
        }
        rep.check("decomposition", "correlation-decomposition", worst <= 1e-9, worst, 1e-9);
    }

    // NO side: flip the final map; every low-energy eigenstate and sampled
    // superposition stays below the ceiling (sampling-based evidence).
    auto no_mach = yes_mach;
    for (auto& [y, acc] : no_mach.final_accept) acc = !acc;
    auto no_inst = build_apx_2corr(no_mach, base, gamma, omit_gadget);
    auto low = evaluate_apx_2corr_low_energy(no_inst, samples, seed);
    rep.check("no-eigenstate-correlation", "no-correlation-ceiling", low.max_eigenstate_f <= no_ceiling,
              low.max_eigenstate_f, no_ceiling, std::to_string(low.low_eigenvalues.size()) + " low states");
    rep.check("no-sampled-correlation", "no-correlation-ceiling-sampled", low.max_sampled_f <= no_ceiling,
              low.max_sampled_f, no_ceiling, std::to_string(samples) + " samples (evidence, not proof)");
    rep.check("no-ground-energy", "ground-energy-equals-query-ground",
              std::abs(low.lambda - query_ground_energy(no_mach, QueryEncoding::unary)) <= 1e-9, low.lambda,
              query_ground_energy(no_mach, QueryEncoding::unary));
    return rep;
}

/// Exact voting distribution checks plus the Monte-Carlo cross-validation.
inline SuiteReport voting(const json& cfg, int jobs = 1) {
    SuiteReport rep;
    rep.suite = "voting";
    long long trials = cfg.value("trials", 1000000LL);
    std::uint64_t seed = cfg.value("seed", std::uint64_t(271828));
    json machs = cfg.contains("machines") ? cfg["machines"] : json::array({
        json{{"name", "m1-yes"}, {"M", 1}, {"p_amp", 10}, {"n_c", 2}},
        json{{"name", "m1-no"}, {"M", 1}, {"p_amp", 10}, {"n_c", 2}},
        json{{"name", "m1-invalid-accept"}, {"M", 1}, {"p_amp", 10}, {"n_c", 2}},
        json{{"name", "m2-both-no"}, {"M", 1}, {"p_amp", 30}, {"n_c", 4}},
        json{{"name", "m2-adaptive"}, {"M", 1}, {"p_amp", 30}, {"n_c", 4}},
        json{{"name", "m3-mixed"}, {"M", 2}, {"p_amp", 120}, {"n_c", 8}},
    });
    for (const auto& mc : machs) {
        std::string name = mc.at("name").get<std::string>();
        int M = mc.value("M", 1);
        int p_amp = mc.value("p_amp", 10);
        int n_c = mc.value("n_c", 2);
        auto mach = fixtures::machine(name, cfg.value("epsilon", 0.5));
        mach.proof_qubits = M;
        // Accept exactly the correct strings so the acceptance identity is exact.
        for (auto& [y, acc] : mach.final_accept) acc = classify(mach, y).correct;
        if (mc.value("flip_final", false))
            for (auto& [y, acc] : mach.final_accept) acc = !acc;
        Rational invalid_p = mc.contains("invalid_p") ? rational_from_json(mc["invalid_p"]) : Rational(1, 2);
        auto verifier = honest_verifier(mach, M, p_amp, invalid_p);
        auto dr = verify_delta_positive(mach, verifier, n_c);

        rep.check("delta-positive " + name, "vote-delta-positive", dr.delta_positive,
                  to_double(dr.outcome.delta), 0.0);
        rep.check("delta-bound " + name, "vote-delta-closed-form",
                  dr.delta_ge_bound, to_double(dr.outcome.delta),
                  delta_lower_bound(M, mach.m, p_amp, n_c),
                  dr.bound_inconclusive ? "bound <= 0: analytically inconclusive" : "");
        rep.check("delta-prime-bound " + name, "vote-delta-prime-bound", dr.delta_prime_ge_bound,
                  to_double(dr.outcome.mass_a - dr.outcome.mass_b),
                  to_double(delta_prime_bound_exact(M, mach.m, p_amp, n_c)));
        rep.check("strong-error-mass " + name, "vote-strong-error-mass-bound", dr.c_mass_bounded,
                  to_double(dr.outcome.mass_c), to_double(pow2_rational(mach.m) * pow2_rational(-p_amp)));
        if (dr.honors_cs) {
            rep.check("partition " + name, "vote-partition-covers-incorrect", dr.gamma.partition_ok);
            rep.check("recurrence " + name, "vote-per-iteration-increment", dr.gamma.recurrence_ok);
        }
        if (dr.accept_identity_applicable)
            rep.check("accept-identity " + name, "vote-accept-probability-identity", dr.accept_identity_ok,
                      to_double(dr.outcome.accept), to_double((1 + dr.outcome.delta) / 2));

        if (trials > 0) {
            auto emp = simulate_voting(mach, verifier, n_c, trials, seed, jobs);
            auto sigma_ok = [&](double f, const Rational& exact) {
                double p = to_double(exact);
                double sigma = std::sqrt(std::max(p * (1 - p), 0.0) / static_cast<double>(trials));
                return std::abs(f - p) <= 3.0 * sigma + 1e-12;
            };
            bool ok = sigma_ok(emp.freq_hash, dr.outcome.prob_hash) &&
                      sigma_ok(emp.freq_a, dr.outcome.mass_a) && sigma_ok(emp.freq_b, dr.outcome.mass_b) &&
                      sigma_ok(emp.freq_c, dr.outcome.mass_c) && sigma_ok(emp.accept, dr.outcome.accept);
            rep.check("mc-3sigma " + name, "vote-monte-carlo-consistency", ok, emp.accept,
                      to_double(dr.outcome.accept), std::to_string(trials) + " trials");
        }
    }
    return rep;
}

/// Final-Hamiltonian gap dichotomy with query validation.
inline SuiteReport spectralgap(const json& cfg, int jobs = 1) {
    SuiteReport rep;
    rep.suite = "spectralgap";
    double eps = cfg.value("epsilon", 0.5);
    double delta = cfg.value("delta", 0.01);
    bool skip_validation = cfg.value("skip_validation", false);
    auto names = cfg.value("machines",
                           std::vector<std::string>{"m2-ulh-accepting", "m2-ulh-rejecting", "m2-planted"});
    struct Result {
        SpectralGapInstance inst;
        double gap = 0.0;
        Verdict verdict = Verdict::promise_violated;
        bool accepts = false;
    };
    std::vector<Result> results(names.size());
    parallel_for(names.size(), jobs, [&](std::size_t i) {
        auto mach = fixtures::machine(names[i], eps, delta);
        auto& r = results[i];
        r.accepts = machine_classical_accepts(mach);
        r.inst = build_spectral_gap_instance(mach, eps, delta, 1.0, skip_validation);
        r.gap = spectral_gap_raw(r.inst.h_final);
        r.verdict = decide_spectral_gap(r.inst.h_final, r.inst.alpha).verdict;
    });
    for (std::size_t i = 0; i < names.size(); ++i) {
        const auto& r = results[i];
        double bound = (eps - delta) / std::pow(4.0, fixtures::machine(names[i], eps, delta).m);
        if (r.accepts)
            rep.check("gap " + names[i], "accepting-final-gap-degenerate", r.gap <= 1e-9, r.gap, 1e-9);
        else
            rep.check("gap " + names[i], "rejecting-final-gap-floor", r.gap >= bound - 1e-9, r.gap, bound);
        rep.check("verdict " + names[i], "final-gap-dichotomy",
                  r.verdict == (r.accepts ? Verdict::yes : Verdict::no), static_cast<double>(r.verdict), 0,
                  verdict_name(r.verdict));
        if (names[i] == "m2-planted" && !skip_validation) {
            int replaced = 0;
            for (const auto& e : r.inst.validation.log) replaced += e.replaced ? 1 : 0;
            rep.check("replacement-log " + names[i], "query-validation-replacement", replaced >= 1, replaced,
                      1);
        }
    }
    return rep;
}

}  // namespace suites

inline SuiteReport run_suite(const std::string& name, const json& cfg, int jobs = 1) {
    if (name == "nullspace") return suites::nullspace(cfg, jobs);
    if (name == "lemma1") return suites::lemma1(cfg, jobs);
    if (name == "lemma4") return suites::lemma4(cfg, jobs);
    if (name == "lemma5") return suites::lemma5(cfg, jobs);
    if (name == "corollary1") return suites::corollary1(cfg, jobs);
    if (name == "theorem1") return suites::theorem1(cfg, jobs);
    if (name == "apx2corr") return suites::apx2corr(cfg, jobs);
    if (name == "voting") return suites::voting(cfg, jobs);
    if (name == "spectralgap") return suites::spectralgap(cfg, jobs);
    throw Error("unknown suite: " + name);
}

inline std::vector<std::string> suite_names() {
    return {"lemma1", "nullspace", "lemma4", "lemma5", "corollary1",
            "theorem1", "apx2corr", "voting", "spectralgap"};
}

}  // namespace hamgadget
