#include <catch2/catch_amalgamated.hpp>

#include "hamgadget/reductions.hpp"
#include "machines.hpp"
#include "test_helpers.hpp"

using namespace hamgadget;
using namespace test_machines;
using namespace test_helpers;

TEST_CASE("apx-sim: YES machine reaches <A> = a on the ground space") {
    auto mach = m1_valid_yes();
    auto circuit = make_m1_simulator(mach, 4);
    auto inst = build_apx_sim(mach, circuit, 100.0);
    REQUIRE(inst.h.locality() <= 5);
    REQUIRE(inst.a.locality() == 1);
    REQUIRE(inst.threshold_a == Catch::Approx(1.0 - 1.0 / 5.0));
    REQUIRE(inst.threshold_b == Catch::Approx(1.0 - 1.0 / 8.0));

    auto d = decide_apx_sim(inst);
    REQUIRE(d.verdict == Verdict::yes);
    REQUIRE(d.ground_min_a == Catch::Approx(inst.threshold_a).margin(1e-8));
    REQUIRE(std::abs(d.lambda - d.lambda_h2) <= 1e-9);
}

TEST_CASE("apx-sim: rejecting machine decides NO with margin b") {
    auto mach = m1_valid_yes();
    mach.final_accept["1"] = false;
    mach.final_accept["0"] = true;  // rejects the correct string "1"
    auto circuit = make_m1_simulator(mach, 4);
    auto inst = build_apx_sim(mach, circuit, 100.0);
    auto d = decide_apx_sim(inst);
    REQUIRE(d.verdict == Verdict::no);
    REQUIRE(d.low_energy_min >= inst.threshold_b - 1e-8);
}

TEST_CASE("apx-sim: valid NO query machines on both final maps") {
    for (bool accept : {true, false}) {
        auto mach = m1_valid_no();
        mach.final_accept["0"] = accept;
        mach.final_accept["1"] = !accept;
        auto inst = build_apx_sim(mach, make_m1_simulator(mach, 4), 100.0);
        auto d = decide_apx_sim(inst);
        REQUIRE(d.verdict == (accept ? Verdict::yes : Verdict::no));
    }
}

TEST_CASE("apx-sim: invalid-query machine gives one verdict under both resolutions") {
    for (bool accept : {true, false}) {
        auto mach = m1_invalid(0.5, accept);
        // Classical verdict is the same no matter how the invalid query resolves.
        REQUIRE(machine_classical_accepts(mach) == accept);
        auto inst = build_apx_sim(mach, make_m1_simulator(mach, 4), 100.0);
        auto d = decide_apx_sim(inst);
        REQUIRE(d.verdict == (accept ? Verdict::yes : Verdict::no));
    }
    // A machine whose output depends on the invalid answer is ill-defined.
    auto bad = m1_invalid();
    bad.final_accept["0"] = true;
    bad.final_accept["1"] = false;
    REQUIRE_THROWS_AS(machine_classical_accepts(bad), Error);
}

TEST_CASE("apx-sim: trivial hand-built instance decides YES") {
    // H = Z, A = (I+Z)/2, a = 0.1, b = 0.9, delta = 0.5: ground |1> has <A>=0.
    ApxSimInstance inst;
    RegisterLayout lay = RegisterLayout::single("W", 1);
    inst.h = Hamiltonian(lay);
    inst.h.add({0}, pauli_z());
    inst.a = Observable(lay);
    Matrix a_blk = Matrix::Zero(2, 2);
    a_blk(0, 0) = 1.0;
    inst.a.add({0}, a_blk);
    inst.threshold_a = 0.1;
    inst.threshold_b = 0.9;
    inst.delta = 0.5;
    auto d = decide_apx_sim(inst);
    REQUIRE(d.verdict == Verdict::yes);
    REQUIRE(d.ground_min_a == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("apx-sim: simulator circuit contract is enforced") {
    auto mach = m1_valid_yes();
    // Writing W1 before the final step is rejected.
    QuantumCircuit bad;
    bad.layout = RegisterLayout::qubits({{"W", 1}, {"Q", 1}});
    bad.readonly_register = "Q";
    bad.gates.emplace_back(gates::X(), std::vector<int>{0}, "X");
    bad.gates.emplace_back(gates::CNOT(), std::vector<int>{1, 0}, "CNOT");
    REQUIRE_THROWS_AS(build_apx_sim(mach, bad, 10.0), Error);

    // Writing to Q is rejected by circuit validation.
    QuantumCircuit bad2;
    bad2.layout = RegisterLayout::qubits({{"W", 1}, {"Q", 1}});
    bad2.readonly_register = "Q";
    bad2.gates.emplace_back(gates::ID(), std::vector<int>{0}, "ID");
    bad2.gates.emplace_back(gates::CNOT(), std::vector<int>{0, 1}, "CNOT");
    REQUIRE_THROWS_AS(build_apx_sim(mach, bad2, 10.0), Error);
}

TEST_CASE("bell gadget: controlled Bell-pair preparation and gate count") {
    QuantumCircuit c;
    c.layout = RegisterLayout::qubits({{"W", 3}, {"Q", 1}});
    c.readonly_register = "Q";
    c.gates.emplace_back(gates::CNOT(), std::vector<int>{3, 0}, "CNOT");
    auto v = append_bell_gadget(c);
    REQUIRE(v.gate_count() == 13);  // L=1 input -> 13 gates

    // W1 = 1 at time L: final state has W2W3 = |phi+>.
    Vector init = Vector::Zero(16);
    init(1) = 1.0;  // |W=000, Q=1>
    Vector fin = simulate(v, init);
    // Expect (|1 00 1> + |1 11 1>)/sqrt(2)  (W1 W2 W3 Q order)
    Vector want = Vector::Zero(16);
    want(9) = 1.0 / std::sqrt(2.0);
    want(15) = 1.0 / std::sqrt(2.0);
    REQUIRE((fin - want).norm() < 1e-12);

    // W1 = 0: W2W3 stays |00>.
    Vector init0 = Vector::Zero(16);
    init0(0) = 1.0;
    Vector fin0 = simulate(v, init0);
    REQUIRE(std::abs(fin0(0) - cxd(1, 0)) < 1e-12);

    // Pristine-ancilla precondition.
    QuantumCircuit touched = c;
    touched.gates.emplace_back(gates::X(), std::vector<int>{1}, "X");
    REQUIRE_THROWS_AS(append_bell_gadget(touched), Error);
}

TEST_CASE("correlation function basics") {
    auto lay = RegisterLayout::single("W", 2);
    Observable za(lay), zb(lay);
    za.add({0}, pauli_z());
    zb.add({1}, pauli_z());
    Vector bell(4);
    bell << 1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0);
    REQUIRE(correlation_f(StateVector(lay, bell), za, zb) == Catch::Approx(1.0));
    REQUIRE(correlation_f(StateVector::basis(lay, 0), za, zb) == Catch::Approx(0.0).margin(1e-14));
    Observable overlap(lay);
    overlap.add({0}, pauli_z());
    REQUIRE_THROWS_AS(correlation_f(StateVector::basis(lay, 0), za, overlap), Error);
}

TEST_CASE("apx-2-corr: instance shape and YES-side correlation") {
    auto mach = m1_valid_yes();
    QuantumCircuit c;
    c.layout = RegisterLayout::qubits({{"W", 3}, {"Q", 1}});
    c.readonly_register = "Q";
    c.gates.emplace_back(gates::CNOT(), std::vector<int>{3, 0}, "CNOT");
    auto inst = build_apx_2corr(mach, c, 100.0);
    const int l0 = 1;
    REQUIRE(inst.params.L == l0);
    REQUIRE(inst.circuit.gate_count() == l0 + 12);
    REQUIRE(inst.threshold_a == Catch::Approx(3.0 / (l0 + 13)));
    REQUIRE(inst.threshold_b == Catch::Approx(1.0 / (l0 + 13)));

    // Canonical ground history state: energy lambda(H2), f above the bound.
    auto hist = instance_ground_history_state(inst);
    double lambda2 = query_ground_energy(mach, QueryEncoding::unary);
    REQUIRE(expectation(hist, inst.h) == Catch::Approx(lambda2).margin(1e-9));
    double f = correlation_f(hist, inst.a, inst.b);
    double t = l0 + 13.0;
    REQUIRE(f >= (1.0 / t) * (4.0 - 49.0 / t) - 1e-12);
}

TEST_CASE("apx-2-corr: history decomposition matches direct evaluation") {
    auto mach = m1_valid_yes();
    QuantumCircuit c;
    c.layout = RegisterLayout::qubits({{"W", 3}, {"Q", 1}});
    c.readonly_register = "Q";
    c.gates.emplace_back(gates::CNOT(), std::vector<int>{3, 0}, "CNOT");
    auto inst = build_apx_2corr(mach, c, 100.0);
    std::vector<Register> proof_regs;
    for (const auto& r : inst.circuit.layout.registers())
        if (r.name != "W") proof_regs.push_back(r);
    RegisterLayout proof_lay(proof_regs);
    for (std::uint64_t s = 0; s < 50; ++s) {
        auto proof = StateVector::random(proof_lay, 60000 + s);
        auto hc = history_correlation(inst, proof);
        REQUIRE(hc.direct_f == Catch::Approx(hc.decomposition_f).margin(1e-9));
    }
}

TEST_CASE("spectral-gap instance: accepting vs rejecting dichotomy") {
    const double eps = 0.5, delta = 0.01;
    // lambda2 - lambda1 with multiplicity: degenerate ground spaces read 0.
    auto acc = build_spectral_gap_instance(m2_ulh_accepting(eps), eps, delta);
    REQUIRE(spectral_gap_raw(acc.h_final) <= 1e-9);
    REQUIRE(decide_spectral_gap(acc.h_final, acc.alpha).verdict == Verdict::yes);

    auto rej = build_spectral_gap_instance(m2_ulh_rejecting(eps), eps, delta);
    double bound = (eps - delta) / std::pow(4.0, 2);
    REQUIRE(spectral_gap_raw(rej.h_final) >= bound - 1e-9);
    REQUIRE(decide_spectral_gap(rej.h_final, rej.alpha).verdict == Verdict::no);
}

TEST_CASE("spectral-gap instance: planted invalid query is replaced and decided") {
    const double eps = 0.5, delta = 0.01;
    auto inst = build_spectral_gap_instance(m2_planted_invalid(eps, delta), eps, delta);
    int replaced = 0;
    for (const auto& e : inst.validation.log) replaced += e.replaced ? 1 : 0;
    REQUIRE(replaced == 1);
    // The machine rejects everything: unique ground, inverse-poly gap.
    REQUIRE(decide_spectral_gap(inst.h_final, inst.alpha).verdict == Verdict::no);
    // Skipping validation leaves two near-degenerate correct strings: the
    // gap collapses and the NO verdict is lost.
    auto raw = build_spectral_gap_instance(m2_planted_invalid(eps, delta), eps, delta, 1.0, true);
    REQUIRE(decide_spectral_gap(raw.h_final, raw.alpha).verdict != Verdict::no);
}

TEST_CASE("spectral-gap decider: trivial promise cases") {
    Hamiltonian z(RegisterLayout::single("W", 1));
    z.add({0}, pauli_z());
    REQUIRE(decide_spectral_gap(z, 3.0).verdict == Verdict::yes);
    REQUIRE(decide_spectral_gap(z, 0.5).verdict == Verdict::no);

    Hamiltonian id(RegisterLayout::single("W", 1));
    id.add({0}, identity2());
    REQUIRE(decide_spectral_gap(id, 0.25).verdict == Verdict::yes);

    // Gap 1.5*alpha sits inside the promise gap.
    Hamiltonian mid(RegisterLayout::single("W", 1));
    mid.add({0}, diag2(0.0, 1.5));
    REQUIRE(decide_spectral_gap(mid, 1.0).verdict == Verdict::promise_violated);
}

TEST_CASE("h_final block structure") {
    const double eps = 0.5, delta = 0.01;
    auto inst = build_spectral_gap_instance(m1_valid_yes(eps), eps, delta);
    int b_site = inst.h_final.layout.site("B", 0);
    REQUIRE(is_diagonal_on_site(inst.h_final, b_site));
    for (int s : inst.h_final.layout.register_sites("X")) REQUIRE(is_diagonal_on_site(inst.h_final, s));
    Matrix m = realize(inst.h_final);
    Hamiltonian pb(inst.h_final.layout);
    pb.add({b_site}, proj(0));
    Matrix p = realize(pb);
    REQUIRE(max_abs(Matrix(m * p - p * m)) <= 1e-12);
}
