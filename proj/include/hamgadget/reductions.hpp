#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "hamgadget/clock.hpp"
#include "hamgadget/queryham.hpp"

namespace hamgadget {

enum class Verdict { yes, no, promise_violated };

inline std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::yes: return "YES";
        case Verdict::no: return "NO";
        default: return "PROMISE-VIOLATED";
    }
}

struct ApxSimParams {
    int L = 0;        // gate count of the compiled circuit
    int m = 0;
    double epsilon = 0.0;
    double eta = 0.0;
    double gamma = 0.0;
    double big_delta = 0.0;  // Delta = L^3 * eta * gamma
};

/// Instance of the ground-state observable estimation problem: decide
/// whether some ground state has <A> <= a, or every (lambda+delta)-low
/// energy state has <A> >= b.
struct ApxSimInstance {
    Hamiltonian h;   // clock part tagged in/prop/stab, query part tagged query/penalty
    Observable a;    // (I+Z)/2 on the output qubit W1
    double threshold_a = 0.0;
    double threshold_b = 0.0;
    double delta = 0.0;  // energy window, 1/Delta
    ApxSimParams params;
    QuantumCircuit circuit;  // the compiled circuit on the instance layout
    QueryMachine machine;
};

/// Two-point correlation variant: f(psi) = <A(x)B> - <A><B> with A = Z_W2,
/// B = Z_W3 on the Bell-gadgeted circuit.
struct Apx2CorrInstance {
    Hamiltonian h;
    Observable a;
    Observable b;
    double threshold_a = 0.0;  // 3/(L+13)
    double threshold_b = 0.0;  // 1/(L+13)
    double delta = 0.0;
    ApxSimParams params;  // L is the original (pre-gadget) gate count
    QuantumCircuit circuit;
    QueryMachine machine;
};

namespace detail_red {

/// Circuit layout extended with the query registers Y1..Ym (untouched by
/// gates) so the compile and the query Hamiltonian share one space.
inline QuantumCircuit extend_with_query_registers(const QuantumCircuit& circuit, const QueryMachine& mach) {
    std::vector<Register> regs = circuit.layout.registers();
    for (int i = 1; i <= mach.m; ++i)
        regs.push_back({"Y" + std::to_string(i), query_qubits(mach, i), 2});
    QuantumCircuit out = circuit;
    out.layout = RegisterLayout(std::move(regs));
    return out;
}

/// The simulator contract: W1 starts at |0> and is written by at most one
/// gate (the answer copy); every other gate touching W1 may only read it
/// (block-diagonal on W1), which covers identity padding and the Bell
/// gadget's controls.
inline void validate_simulator_circuit(const QuantumCircuit& circuit) {
    require(circuit.layout.has_register("W") && circuit.layout.find_register("W").sites >= 1,
            "simulator circuit needs a W register with output qubit W1");
    require(circuit.layout.has_register("Q"), "simulator circuit needs the proof register Q");
    require(circuit.readonly_register == "Q", "simulator circuit must flag Q read-only");
    int w1 = circuit.layout.site("W", 0);
    int writers = 0;
    for (int t = 0; t < circuit.gate_count(); ++t) {
        const Gate& g = circuit.gates[static_cast<std::size_t>(t)];
        for (std::size_t i = 0; i < g.targets.size(); ++i) {
            if (g.targets[i] != w1) continue;
            if (!gate_diagonal_on_target(g, i)) ++writers;
        }
    }
    require(writers <= 1, "W1 must stay |0> until the single answer-copy step");
}

inline QuerySiteMap instance_site_map(const RegisterLayout& lay, const QueryMachine& mach) {
    QuerySiteMap map;
    map.x_sites = lay.register_sites("Q");
    for (int i = 1; i <= mach.m; ++i) map.y_sites.push_back(lay.register_sites("Y" + std::to_string(i)));
    return map;
}

}  // namespace detail_red

/// Ground energy of the query Hamiltonian via exact block enumeration.
inline double query_ground_energy(const QueryMachine& mach, QueryEncoding enc,
                                  ZeroBranch zb = ZeroBranch::uniform_shift) {
    Hamiltonian h = enc == QueryEncoding::binary ? build_query_hamiltonian(mach, -1.0, zb)
                                                 : build_unary_query_hamiltonian(mach, -1.0, zb);
    auto rep = verify_block_separation(h, mach, mach.epsilon, enc);
    return rep.lambda_h;
}

/// A ground state of the unary query Hamiltonian: the best correct string's
/// unary pattern tensored with per-level query ground states, on registers
/// (X', Y1..Ym) in that order.
inline StateVector query_ground_proof(const QueryMachine& mach) {
    validate_machine(mach);
    const int nx = static_cast<int>((std::int64_t(1) << mach.m) - 1);
    double best = std::numeric_limits<double>::infinity();
    std::string best_y;
    for (std::uint64_t yv = 0; yv < (std::uint64_t(1) << mach.m); ++yv) {
        std::string y = bits_to_string(yv, mach.m);
        if (!classify(mach, y).correct) continue;
        double v = 0.0;
        for (int i = 1; i <= mach.m; ++i) {
            double w = std::pow(0.25, i - 1);
            if (y[static_cast<std::size_t>(i - 1)] == '0')
                v += w * 2.0 * mach.epsilon;
            else
                v += w * dense_eigenvalues(mach.queries.at(y.substr(0, static_cast<std::size_t>(i - 1)))).front();
        }
        if (v < best) {
            best = v;
            best_y = y;
        }
    }
    require(!best_y.empty(), "machine has no correct query string");

    std::vector<Register> regs{{"X", nx, 2}};
    std::vector<Vector> level_states;
    for (int i = 1; i <= mach.m; ++i) {
        int q = query_qubits(mach, i);
        regs.push_back({"Y" + std::to_string(i), q, 2});
        if (best_y[static_cast<std::size_t>(i - 1)] == '0') {
            Vector v = Vector::Zero(Eigen::Index(1) << q);
            v(0) = 1.0;  // gadget/uniform ground |0..0>
            level_states.push_back(v);
        } else {
            Matrix hq = mach.queries.at(best_y.substr(0, static_cast<std::size_t>(i - 1)));
            std::vector<double> evals;
            dense_eig_inplace(hq, evals);
            level_states.push_back(hq.col(0));
        }
    }
    RegisterLayout lay(std::move(regs));
    Vector full = Vector::Zero(lay.dimension());
    std::uint64_t pattern = unary_pattern_of_value(string_to_bits(best_y), nx);
    // amplitudes: pattern index on X, tensor product over levels on Y
    std::int64_t y_dim = lay.dimension() >> nx;
    for (std::int64_t yi = 0; yi < y_dim; ++yi) {
        cxd amp(1.0, 0.0);
        std::int64_t rem = yi;
        for (int i = mach.m; i >= 1; --i) {
            std::int64_t d = level_states[static_cast<std::size_t>(i - 1)].size();
            amp *= level_states[static_cast<std::size_t>(i - 1)](rem % d);
            rem /= d;
        }
        if (amp != cxd(0.0, 0.0)) full(static_cast<std::int64_t>(pattern) * y_dim + yi) = amp;
    }
    return StateVector(lay, std::move(full));
}

/// Assembles H = Delta*(H_in + H_prop + H_stab) + H_2(unary query) over the
/// registers W, Q (unary answers), Y1..Ym (query proofs), C (unary clock),
/// with observable A = (I+Z)/2 on W1 and the thresholds
/// a = 1 - 1/(L+1), b = 1 - 1/(2L), delta = 1/Delta, Delta = L^3*eta*gamma.
inline ApxSimInstance build_apx_sim(const QueryMachine& mach, const QuantumCircuit& simulator, double gamma,
                                    double stab_scale = 1.0) {
    validate_machine(mach);
    detail_red::validate_simulator_circuit(simulator);
    require(gamma > 0.0, "gamma must be positive");
    const int L = simulator.gate_count();
    require(L >= 2, "simulator circuit needs L >= 2 for separated thresholds");
    require(simulator.layout.find_register("Q").sites == static_cast<int>((std::int64_t(1) << mach.m) - 1),
            "proof register Q must hold the unary answer encoding (2^m - 1 qubits)");

    QuantumCircuit ext = detail_red::extend_with_query_registers(simulator, mach);

    // Query part first: eta is a term-wise norm bound on H2.
    Hamiltonian h2(compiled_layout(ext, ClockMode::unary));
    append_query_terms(h2, mach, QueryEncoding::unary, ZeroBranch::uniform_shift,
                       detail_red::instance_site_map(h2.layout, mach), "query");
    double eta = std::max(1.0, h2.norm_upper_bound());

    ApxSimInstance inst;
    inst.params.L = L;
    inst.params.m = mach.m;
    inst.params.epsilon = mach.epsilon;
    inst.params.eta = eta;
    inst.params.gamma = gamma;
    inst.params.big_delta = static_cast<double>(L) * L * L * eta * gamma;
    inst.delta = 1.0 / inst.params.big_delta;
    inst.threshold_a = 1.0 - 1.0 / (L + 1.0);
    inst.threshold_b = 1.0 - 1.0 / (2.0 * L);
    inst.machine = mach;
    inst.circuit = ext;

    CompileOptions copts;
    copts.mode = ClockMode::unary;
    copts.delta = inst.params.big_delta;
    copts.workspace_register = "W";
    copts.w_stab = stab_scale;
    inst.h = compile_circuit(ext, copts);
    for (const auto& t : h2.terms) inst.h.terms.push_back(t);

    inst.a = Observable(inst.h.layout);
    Matrix a_blk = Matrix::Zero(2, 2);
    a_blk(0, 0) = 1.0;  // (I+Z)/2 = |0><0|
    inst.a.add({inst.h.layout.site("W", 0)}, a_blk, 1.0, "A");

    require(inst.h.locality() <= 5, "assembled Hamiltonian exceeds 5-locality");
    require(inst.a.locality() == 1, "observable A must be 1-local");
    return inst;
}

struct ApxSimDecision {
    Verdict verdict = Verdict::promise_violated;
    double lambda = 0.0;
    double lambda_h2 = 0.0;
    double ground_min_a = 0.0;
    double low_energy_min = 0.0;
    bool bracketed = true;
};

/// YES if the ground space reaches <A> <= a + 1e-10; NO if every state in
/// the delta window has <A> >= b - 1e-10; promise-violated otherwise.
inline ApxSimDecision decide_apx_sim(const ApxSimInstance& inst, const SpectralOptions& opts = {}) {
    ApxSimDecision d;
    auto ground = eigensolve_ground_space(inst.h, opts);
    d.lambda = ground.ground_energy;
    if (!inst.machine.queries.empty()) {  // hand-assembled instances carry no machine
        d.lambda_h2 = query_ground_energy(inst.machine, QueryEncoding::unary);
        require(std::abs(d.lambda - d.lambda_h2) <= 1e-9,
                "lambda(H) != lambda(H2): " + std::to_string(d.lambda) + " vs " + std::to_string(d.lambda_h2));
    } else {
        d.lambda_h2 = d.lambda;
    }

    Matrix ar = restrict_to_basis(inst.a, ground.ground_basis);
    d.ground_min_a = dense_eigenvalues(ar).front();

    auto low = min_observable_over_low_energy(inst.h, inst.a, d.lambda + inst.delta, opts);
    d.low_energy_min = low.value;
    d.bracketed = low.bracketed;

    if (d.ground_min_a <= inst.threshold_a + 1e-10)
        d.verdict = Verdict::yes;
    else if (d.low_energy_min >= inst.threshold_b - 1e-10)
        d.verdict = Verdict::no;
    else
        d.verdict = Verdict::promise_violated;
    return d;
}

/// Simulator circuit for a single-query machine: identity padding on W1,
/// then one gate copying the machine's final answer into W1. The final map
/// must be realizable by a 2-qubit read of Q (any map on {0,1} is).
inline QuantumCircuit make_m1_simulator(const QueryMachine& mach, int total_gates) {
    require(mach.m == 1, "generator supports single-query machines");
    require(total_gates >= 2, "need at least identity padding plus the copy gate");
    QuantumCircuit c;
    c.layout = RegisterLayout::qubits({{"W", 1}, {"Q", 1}});
    c.readonly_register = "Q";
    for (int t = 0; t + 1 < total_gates; ++t) c.gates.emplace_back(gates::ID(), std::vector<int>{0}, "ID");
    bool f0 = mach.final_accept.at("0"), f1 = mach.final_accept.at("1");
    if (f0 && f1)
        c.gates.emplace_back(gates::X(), std::vector<int>{0}, "X");
    else if (!f0 && !f1)
        c.gates.emplace_back(gates::ID(), std::vector<int>{0}, "ID");
    else if (!f0 && f1)
        c.gates.emplace_back(gates::CNOT(), std::vector<int>{1, 0}, "CNOT");
    else
        c.gates.emplace_back(gates::CNOT0(), std::vector<int>{1, 0}, "CNOT0");
    validate_circuit(c);
    return c;
}

/// All resolutions of the machine's invalid queries must lead to one final
/// answer; returns that answer. Enumerates every correct string.
inline bool machine_classical_accepts(const QueryMachine& mach) {
    bool found = false, value = false;
    for (std::uint64_t yv = 0; yv < (std::uint64_t(1) << mach.m); ++yv) {
        std::string y = bits_to_string(yv, mach.m);
        if (!classify(mach, y).correct) continue;
        bool acc = mach.final_accept.at(y);
        if (found) require(acc == value, "machine output differs across correct query strings");
        found = true;
        value = acc;
    }
    require(found, "machine has no correct query string");
    return value;
}

/// Appends the 6-gate Bell gadget (controlled-H then the 5-gate two-qubit
/// Toffoli realization), controlled on W1 and writing |phi+> into W2W3,
/// followed by 6 identity gates on W1. Gate count becomes L + 12.
inline QuantumCircuit append_bell_gadget(const QuantumCircuit& circuit) {
    validate_circuit(circuit);
    require(circuit.layout.has_register("W") && circuit.layout.find_register("W").sites >= 3,
            "Bell gadget needs workspace qubits W1, W2, W3");
    int w1 = circuit.layout.site("W", 0);
    int w2 = circuit.layout.site("W", 1);
    int w3 = circuit.layout.site("W", 2);
    for (const auto& g : circuit.gates)
        for (int q : g.targets)
            require(q != w2 && q != w3, "W2/W3 not pristine: gate '" + g.label + "' touches them");

    QuantumCircuit v = circuit;
    v.gates.emplace_back(gates::CH(), std::vector<int>{w1, w2}, "CH");
    for (auto& g : gates::toffoli_decomposed(w1, w2, w3)) v.gates.push_back(g);
    for (int i = 0; i < 6; ++i) v.gates.emplace_back(gates::ID(), std::vector<int>{w1}, "ID");
    require(v.gate_count() == circuit.gate_count() + 12, "gadget must add exactly 12 gates");
    validate_circuit(v);
    return v;
}

/// Two-point correlation f = <A (x) B> - <A><B>. A and B must act on
/// disjoint supports.
inline double correlation_f(const StateVector& state, const Observable& a, const Observable& b) {
    require(state.layout == a.layout && state.layout == b.layout, "layout mismatch");
    std::set<int> sa, sb;
    for (const auto& t : a.terms) sa.insert(t.support.begin(), t.support.end());
    for (const auto& t : b.terms) sb.insert(t.support.begin(), t.support.end());
    for (int s : sa) require(!sb.count(s), "correlation observables must have disjoint supports");
    Vector bv = apply_op(b, state.amplitudes);
    Vector abv = apply_op(a, bv);
    cxd ab = state.amplitudes.dot(abv);
    require(std::abs(ab.imag()) <= 1e-10 * std::max(1.0, a.norm_upper_bound() * b.norm_upper_bound()),
            "correlation has non-real part");
    return ab.real() - expectation(state, a) * expectation(state, b);
}

/// As build_apx_sim, on the Bell-gadgeted circuit V with L+13 time steps;
/// A = Z_W2, B = Z_W3, a = 3/(L+13), b = 1/(L+13).
inline Apx2CorrInstance build_apx_2corr(const QueryMachine& mach, const QuantumCircuit& simulator,
                                        double gamma, bool omit_gadget = false) {
    const int L = simulator.gate_count();
    QuantumCircuit v = omit_gadget ? simulator : append_bell_gadget(simulator);
    if (omit_gadget)
        for (int i = 0; i < 12; ++i) v.gates.emplace_back(gates::ID(), std::vector<int>{v.layout.site("W", 0)}, "ID");
    ApxSimInstance base = build_apx_sim(mach, v, gamma);

    Apx2CorrInstance inst;
    inst.h = base.h;
    inst.delta = base.delta;
    inst.params = base.params;
    inst.params.L = L;  // original gate count; compiled circuit has L+12
    inst.circuit = base.circuit;
    inst.machine = mach;
    inst.threshold_a = 3.0 / (L + 13.0);
    inst.threshold_b = 1.0 / (L + 13.0);
    inst.a = Observable(inst.h.layout);
    inst.a.add({inst.h.layout.site("W", 1)}, gates::Z(), 1.0, "A");
    inst.b = Observable(inst.h.layout);
    inst.b.add({inst.h.layout.site("W", 2)}, gates::Z(), 1.0, "B");
    return inst;
}

/// History ground state of an assembled instance: the compiled circuit run
/// on the query Hamiltonian's ground proof.
inline StateVector instance_ground_history_state(const ApxSimInstance& inst) {
    auto proof = query_ground_proof(inst.machine);
    // Rename the proof layout (X, Y1..) to the instance registers (Q, Y1..).
    std::vector<Register> regs;
    for (const auto& r : inst.circuit.layout.registers())
        if (r.name != "W") regs.push_back(r);
    StateVector renamed(RegisterLayout(std::move(regs)), proof.amplitudes);
    return history_state(inst.circuit, renamed, ClockMode::unary);
}

inline StateVector instance_ground_history_state(const Apx2CorrInstance& inst) {
    ApxSimInstance shim;
    shim.machine = inst.machine;
    shim.circuit = inst.circuit;
    return instance_ground_history_state(shim);
}

/// Per-timestep decomposition of f on a history state, matching the direct
/// evaluation: with |v> the (unnormalized) tail over steps t > L0,
/// f = [(L0+1) + <v|ZZ|v>]/T - [(L0+1) + <v|Z2|v>][(L0+1) + <v|Z3|v>]/T^2,
/// where T = L0+13 and W2W3 = |00> for every t <= L0.
struct HistoryCorrelation {
    double direct_f = 0.0;
    double decomposition_f = 0.0;
    double tail_zz = 0.0, tail_z2 = 0.0, tail_z3 = 0.0;
};

inline HistoryCorrelation history_correlation(const Apx2CorrInstance& inst, const StateVector& proof_on_rest) {
    const QuantumCircuit& c = inst.circuit;
    const int total = c.gate_count();        // L + 12
    const int l0 = inst.params.L;            // original L
    int w2 = c.layout.site("W", 1), w3 = c.layout.site("W", 2);

    // Build the initial state on the circuit layout.
    auto hist = history_state(c, proof_on_rest, ClockMode::unary);
    HistoryCorrelation out;
    out.direct_f = correlation_f(hist, inst.a, inst.b);

    std::vector<Register> proof_regs;
    for (const auto& r : c.layout.registers())
        if (r.name != "W") proof_regs.push_back(r);
    Vector init = Vector::Zero(c.layout.dimension());
    {
        std::vector<int> proof_sites;
        for (const auto& r : proof_regs)
            for (int s : c.layout.register_sites(r.name)) proof_sites.push_back(s);
        for (std::int64_t p = 0; p < proof_on_rest.layout.dimension(); ++p) {
            if (proof_on_rest.amplitudes(p) == cxd(0.0, 0.0)) continue;
            std::int64_t full = 0;
            for (int ps = 0; ps < proof_on_rest.layout.total_sites(); ++ps)
                full += std::int64_t(proof_on_rest.layout.digit(p, ps)) *
                        c.layout.stride(proof_sites[static_cast<std::size_t>(ps)]);
            init(full) = proof_on_rest.amplitudes(p);
        }
    }
    auto snaps = simulate_snapshots(c, init);
    auto zexp = [&](const Vector& s, int q) {
        double v = 0.0;
        for (std::int64_t i = 0; i < s.size(); ++i)
            v += (c.layout.digit(i, q) == 0 ? 1.0 : -1.0) * std::norm(s(i));
        return v;
    };
    auto zzexp = [&](const Vector& s) {
        double v = 0.0;
        for (std::int64_t i = 0; i < s.size(); ++i) {
            double sign = (c.layout.digit(i, w2) == c.layout.digit(i, w3)) ? 1.0 : -1.0;
            v += sign * std::norm(s(i));
        }
        return v;
    };
    for (int t = l0 + 1; t <= total; ++t) {
        out.tail_zz += zzexp(snaps[static_cast<std::size_t>(t)]);
        out.tail_z2 += zexp(snaps[static_cast<std::size_t>(t)], w2);
        out.tail_z3 += zexp(snaps[static_cast<std::size_t>(t)], w3);
    }
    double T = l0 + 13.0;
    out.decomposition_f = ((l0 + 1) + out.tail_zz) / T -
                          ((l0 + 1) + out.tail_z2) * ((l0 + 1) + out.tail_z3) / (T * T);
    return out;
}

struct Apx2CorrLowEnergyReport {
    double lambda = 0.0;
    std::vector<double> low_eigenvalues;  // all eigenvalues within the delta window
    double next_eigenvalue = 0.0;         // first one above the window
    double max_eigenstate_f = -2.0;
    double max_sampled_f = -2.0;
    int samples = 0;
};

/// NO-side evidence for the correlation bounds: f evaluated on every
/// eigenstate inside the delta window and on random unit superpositions of
/// them. Sampling-based evidence, not a proof of the minimum over the
/// window.
inline Apx2CorrLowEnergyReport evaluate_apx_2corr_low_energy(const Apx2CorrInstance& inst, int samples,
                                                             std::uint64_t seed,
                                                             const SpectralOptions& base_opts = {}) {
    Apx2CorrLowEnergyReport out;
    out.samples = samples;
    SpectralOptions opts = base_opts;
    int k = 6;
    SpectralReport rep;
    for (;;) {
        rep = eigensolve_smallest(inst.h, k, opts);
        out.lambda = rep.ground_energy;
        bool window_closed = false;
        for (std::size_t i = 0; i < rep.eigenvectors.size(); ++i) {
            if (rep.eigenvalues[i] > out.lambda + inst.delta) {
                window_closed = true;
                break;
            }
        }
        if (window_closed || static_cast<std::int64_t>(k) >= inst.h.layout.dimension()) break;
        k = static_cast<int>(std::min<std::int64_t>(std::int64_t(k) * 3, inst.h.layout.dimension()));
    }

    std::vector<StateVector> low;
    for (std::size_t i = 0; i < rep.eigenvectors.size(); ++i) {
        if (rep.eigenvalues[i] <= out.lambda + inst.delta) {
            out.low_eigenvalues.push_back(rep.eigenvalues[i]);
            low.push_back(rep.eigenvectors[i]);
        } else {
            out.next_eigenvalue = rep.eigenvalues[i];
            break;
        }
    }
    for (const auto& v : low) out.max_eigenstate_f = std::max(out.max_eigenstate_f, correlation_f(v, inst.a, inst.b));

    // f over random superpositions, reduced to the low-energy span.
    const auto d = static_cast<Eigen::Index>(low.size());
    Matrix mab(d, d), ma(d, d), mb(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        Vector bv = apply_op(inst.b, low[static_cast<std::size_t>(j)].amplitudes);
        Vector abv = apply_op(inst.a, bv);
        Vector av = apply_op(inst.a, low[static_cast<std::size_t>(j)].amplitudes);
        for (Eigen::Index i = 0; i < d; ++i) {
            mab(i, j) = low[static_cast<std::size_t>(i)].amplitudes.dot(abv);
            ma(i, j) = low[static_cast<std::size_t>(i)].amplitudes.dot(av);
            mb(i, j) = low[static_cast<std::size_t>(i)].amplitudes.dot(bv);
        }
    }
    for (int s = 0; s < samples; ++s) {
        Vector c = random_unit_vector(d, mix_seed(seed, static_cast<std::uint64_t>(s)));
        double f = (c.dot(mab * c)).real() - (c.dot(ma * c)).real() * (c.dot(mb * c)).real();
        out.max_sampled_f = std::max(out.max_sampled_f, f);
    }
    return out;
}

/// Spectral gap promise instance built from the validated unique-ground
/// machine: H_final = I_B (x) H + 4*eps |0><0|_B (x) T (x) I_Y.
struct SpectralGapInstance {
    Hamiltonian h_final;  // registers B, X, Y1..Ym
    double alpha = 0.0;
    Hamiltonian h;        // the validated Lemma-style Hamiltonian on X, Y
    std::vector<std::string> rejecting_strings;  // encoded into T
    ValidationResult validation;
    double epsilon = 0.0;
    double delta_v = 0.0;
    double gamma = 0.0;  // recorded for provenance; the construction does not use it
};

inline SpectralGapInstance build_spectral_gap_instance(const QueryMachine& mach, double eps, double delta,
                                                       double gamma = 1.0, bool skip_validation = false,
                                                       GapOracle oracle = {}) {
    validate_machine(mach);
    SpectralGapInstance inst;
    inst.epsilon = eps;
    inst.delta_v = delta;
    inst.gamma = gamma;
    inst.alpha = (eps - delta) / (2.0 * std::pow(4.0, mach.m));

    QueryMachine validated = mach;
    if (!skip_validation) {
        inst.validation = validate_and_replace(mach, eps, delta, oracle);
        validated = inst.validation.machine;
    } else {
        inst.validation.machine = mach;
    }

    inst.h = build_unary_query_hamiltonian(validated, eps, ZeroBranch::gadget);

    // Layout with the extra qubit B in front.
    std::vector<Register> regs{{"B", 1, 2}};
    for (const auto& r : inst.h.layout.registers()) regs.push_back(r);
    RegisterLayout lay(std::move(regs));
    inst.h_final = Hamiltonian(lay);
    for (const auto& t : inst.h.terms) {
        LocalTerm shifted = t;
        for (auto& s : shifted.support) s += 1;  // B occupies global site 0
        inst.h_final.add(shifted);
    }
    const int nx = static_cast<int>((std::int64_t(1) << mach.m) - 1);
    for (const auto& [y, acc] : validated.final_accept) {
        if (acc) continue;
        inst.rejecting_strings.push_back(y);
        std::uint64_t pattern = unary_pattern_of_value(string_to_bits(y), nx);
        std::vector<int> sup{lay.site("B", 0)};
        for (int j = 0; j < nx; ++j) sup.push_back(lay.site("X", j));
        Matrix blk = Matrix::Zero(Eigen::Index(1) << (nx + 1), Eigen::Index(1) << (nx + 1));
        blk(static_cast<Eigen::Index>(pattern), static_cast<Eigen::Index>(pattern)) = 1.0;  // B=0 block
        inst.h_final.add(sup, blk, 4.0 * eps, "T");
    }
    return inst;
}

struct SpectralGapDecision {
    Verdict verdict = Verdict::promise_violated;
    double gap = 0.0;
    double alpha = 0.0;
};

/// YES when the gap is at most alpha, NO when at least 2*alpha. The gap is
/// lambda2 - lambda1 with multiplicity: a degenerate ground space decides as
/// gap 0.
inline SpectralGapDecision decide_spectral_gap(const Hamiltonian& h, double alpha,
                                               const SpectralOptions& opts = {}) {
    require(alpha > 0.0, "alpha must be positive");
    SpectralGapDecision d;
    d.alpha = alpha;
    d.gap = spectral_gap_raw(h, opts);
    if (d.gap <= alpha)
        d.verdict = Verdict::yes;
    else if (d.gap >= 2.0 * alpha)
        d.verdict = Verdict::no;
    else
        d.verdict = Verdict::promise_violated;
    return d;
}

}  // namespace hamgadget
