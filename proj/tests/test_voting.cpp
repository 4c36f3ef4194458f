#include <catch2/catch_amalgamated.hpp>

#include "hamgadget/voting.hpp"
#include "machines.hpp"
#include "test_helpers.hpp"

using namespace hamgadget;
using namespace test_machines;

namespace {

VerifierModel abstract_verifier(int M, int p_amp, std::map<std::string, Rational> probs) {
    VerifierModel v;
    v.mode = VerifierModel::Mode::abstract_probabilities;
    v.proof_qubits = M;
    v.p_amp = p_amp;
    v.probabilities = std::move(probs);
    return v;
}

}  // namespace

TEST_CASE("exact voting: perfect YES query, accepting machine") {
    auto mach = m1_valid_yes();
    auto v = abstract_verifier(1, 10, {{"", Rational(1)}});
    auto out = exact_voting_distribution(mach, v, 2);
    REQUIRE(out.prob.at("1") == Rational(1));
    REQUIRE(out.prob.at("0") == Rational(0));
    REQUIRE(out.prob_hash == Rational(0));
    REQUIRE(out.delta == Rational(1));
    REQUIRE(out.accept == Rational(1));
}

TEST_CASE("exact voting: invalid query with p = 1/2") {
    auto mach = m1_invalid(0.5, true);
    auto v = abstract_verifier(1, 10, {{"", Rational(1, 2)}});
    auto out = exact_voting_distribution(mach, v, 2);
    // q = (M+2)m = 3; survival for |y|=0 is 2^-3.
    REQUIRE(out.q == 3);
    REQUIRE(out.prob.at("1") == Rational(1, 2));
    REQUIRE(out.prob.at("0") == Rational(1, 2) * Rational(1, 8));
    REQUIRE(out.prob_hash == Rational(1, 2) * (1 - Rational(1, 8)));
    // Both answers correct: Delta = Pr[A] = 1/2 + 1/16.
    REQUIRE(out.delta == Rational(1, 2) + Rational(1, 16));
    REQUIRE(out.mass_b == 0);
    REQUIRE(out.mass_c == 0);
}

TEST_CASE("voting distribution normalizes and rejects bad n_c") {
    auto mach = m2_both_no();
    auto v = honest_verifier(mach, 1, 30);
    auto out = exact_voting_distribution(mach, v, 4);
    Rational total = out.prob_hash;
    for (const auto& [y, p] : out.prob) total += p;
    REQUIRE(total == Rational(1));
    REQUIRE_THROWS_AS(exact_voting_distribution(mach, v, 3), Error);
}

TEST_CASE("monotone survival in |y| at fixed step-2 probability") {
    // With all p = 1/2, step-2 masses are uniform; Pr[Y=y] grows with |y|.
    auto mach = m2_both_no();
    std::map<std::string, Rational> probs{{"", Rational(1, 2)}, {"0", Rational(1, 2)}, {"1", Rational(1, 2)}};
    auto v = abstract_verifier(1, 30, probs);
    auto out = exact_voting_distribution(mach, v, 4);
    REQUIRE(out.prob.at("00") < out.prob.at("01"));
    REQUIRE(out.prob.at("01") < out.prob.at("10"));
    REQUIRE(out.prob.at("10") < out.prob.at("11"));
}

TEST_CASE("delta lower bound closed form") {
    // (1/8)*(1/2)*(1 - 1/2 - 1/1024) - 2/1024
    REQUIRE(delta_lower_bound(1, 1, 10, 2) == Catch::Approx(0.029236).margin(1e-6));
    // Large p_amp limit: (2^-q)^(n_c-1) * 2^-Mm * (1 - 2^-m).
    double lim = to_double(rational_pow(pow2_rational(-3), 1) * pow2_rational(-1) * (1 - pow2_rational(-1)));
    REQUIRE(delta_lower_bound(1, 1, 300, 2) == Catch::Approx(lim).margin(1e-12));
    // Inconclusive (<= 0) parameters are flagged, never asserted false.
    REQUIRE(delta_lower_bound_exact(1, 3, 10, 8) <= 0);
}

TEST_CASE("verify_delta_positive: all-valid machines at m = 1, 2, 3") {
    struct Case {
        QueryMachine mach;
        int M, p_amp, n_c;
    };
    std::vector<Case> cases;
    {
        auto m1 = m1_valid_yes();
        m1.final_accept = {{"0", false}, {"1", true}};  // accept exactly A
        cases.push_back({m1, 1, 10, 2});
        auto m1n = m1_valid_no();
        m1n.final_accept = {{"0", true}, {"1", false}};
        cases.push_back({m1n, 1, 10, 2});
        auto m2 = m2_both_no();  // correct string "00"
        m2.final_accept = {{"00", true}, {"01", false}, {"10", false}, {"11", false}};
        cases.push_back({m2, 1, 30, 4});
        auto m3 = m3_mixed();
        m3.proof_qubits = 2;
        for (auto& [y, acc] : m3.final_accept) acc = classify(m3, y).correct;
        cases.push_back({m3, 2, 120, 8});
    }
    for (auto& cse : cases) {
        cse.mach.proof_qubits = cse.M;
        auto v = honest_verifier(cse.mach, cse.M, cse.p_amp);
        auto rep = verify_delta_positive(cse.mach, v, cse.n_c);
        INFO("m=" << cse.mach.m << " p_amp=" << cse.p_amp);
        REQUIRE(rep.honors_cs);
        REQUIRE(rep.delta_positive);
        REQUIRE(rep.delta_ge_bound);
        REQUIRE(rep.delta_prime_ge_bound);
        REQUIRE(rep.c_mass_bounded);
        REQUIRE(rep.gamma.partition_ok);
        REQUIRE(rep.gamma.recurrence_ok);
        REQUIRE(rep.accept_identity_applicable);
        REQUIRE(rep.accept_identity_ok);
        REQUIRE(rep.pass);
    }
}

TEST_CASE("verify_delta_positive: invalid-query machines") {
    // m=2 with an invalid node; final accepts exactly the correct strings.
    auto mach = m2_adaptive();
    for (auto& [y, acc] : mach.final_accept) acc = classify(mach, y).correct;
    auto v = honest_verifier(mach, 1, 30, Rational(3, 8));  // arbitrary invalid-node p
    auto rep = verify_delta_positive(mach, v, 4);
    REQUIRE(rep.honors_cs);  // invalid nodes are unconstrained
    REQUIRE(rep.delta_positive);
    REQUIRE(rep.delta_prime_ge_bound);
    REQUIRE(rep.c_mass_bounded);
    REQUIRE(rep.gamma.partition_ok);
    REQUIRE(rep.gamma.recurrence_ok);
    REQUIRE(rep.pass);

    // The all-invalid single-query machine: Pr[#] accounts for all
    // non-chosen mass and Delta = Pr[A] > 0.
    auto inv = m1_invalid(0.5, true);
    auto vi = abstract_verifier(1, 10, {{"", Rational(1, 4)}});
    auto ri = verify_delta_positive(inv, vi, 2);
    REQUIRE(ri.delta_positive);
    Rational total = ri.outcome.prob_hash + ri.outcome.prob.at("0") + ri.outcome.prob.at("1");
    REQUIRE(total == Rational(1));
}

TEST_CASE("accept probability identity (1 +- Delta)/2") {
    auto yes = m2_ulh_accepting();
    for (auto& [y, acc] : yes.final_accept) acc = classify(yes, y).correct;
    auto v = honest_verifier(yes, 1, 30);
    auto rep = verify_delta_positive(yes, v, 4);
    REQUIRE(rep.accept_identity_applicable);
    REQUIRE(rep.outcome.accept == (1 + rep.outcome.delta) / 2);
    REQUIRE(rep.outcome.accept > Rational(1, 2));

    auto no = yes;
    for (auto& [y, acc] : no.final_accept) acc = !acc;
    auto rep2 = verify_delta_positive(no, v, 4);
    REQUIRE(rep2.outcome.accept == (1 - rep2.outcome.delta) / 2);
    REQUIRE(rep2.outcome.accept < Rational(1, 2));
}

TEST_CASE("lemma-8 style C-mass bound is tight to the model") {
    auto mach = m2_both_no();
    auto v = honest_verifier(mach, 1, 30);
    auto out = exact_voting_distribution(mach, v, 4);
    REQUIRE(out.mass_c <= pow2_rational(2) * pow2_rational(-30));
    REQUIRE(out.mass_c > 0);  // soundness errors do occur with positive mass
}

TEST_CASE("monte carlo: deterministic verifier matches exactly") {
    auto mach = m1_valid_yes();
    auto v = abstract_verifier(1, 10, {{"", Rational(1)}});
    auto exact = exact_voting_distribution(mach, v, 2);
    auto emp = simulate_voting(mach, v, 2, 20000, 42);
    REQUIRE(emp.freq.at("1") == Catch::Approx(to_double(exact.prob.at("1"))));
    REQUIRE(emp.accept == Catch::Approx(to_double(exact.accept)));
}

TEST_CASE("monte carlo: masses within 3 sigma of exact values") {
    auto mach = m1_invalid(0.5, true);
    auto v = abstract_verifier(1, 10, {{"", Rational(1, 2)}});
    auto exact = exact_voting_distribution(mach, v, 2);
    const long long n = 1000000;
    auto emp = simulate_voting(mach, v, 2, n, 20250101, 2);
    auto within = [&](double emp_f, const Rational& ex) {
        double p = to_double(ex);
        double sigma = std::sqrt(std::max(p * (1 - p), 1e-12) / static_cast<double>(n));
        return std::abs(emp_f - p) <= 3 * sigma;
    };
    REQUIRE(within(emp.freq.count("1") ? emp.freq.at("1") : 0.0, exact.prob.at("1")));
    REQUIRE(within(emp.freq.count("0") ? emp.freq.at("0") : 0.0, exact.prob.at("0")));
    REQUIRE(within(emp.freq_hash, exact.prob_hash));
    REQUIRE(within(emp.accept, exact.accept));
}

TEST_CASE("circuit-mode verifier: averaging agrees with the density matrix route") {
    // Verifier: accept iff the proof qubit is 1 (p = 1/2 on the mixed proof),
    // with a workspace ancilla in the pipeline.
    QuantumCircuit c;
    c.layout = RegisterLayout::qubits({{"out", 1}, {"P", 1}});
    c.readonly_register = "";
    c.gates.emplace_back(gates::CNOT(), std::vector<int>{1, 0}, "CNOT");

    double p1 = circuit_acceptance_probability(c, "P", 0);
    double p2 = density_matrix_acceptance_probability(c, "P", 0);
    REQUIRE(p1 == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(p1 == Catch::Approx(p2).margin(1e-10));

    // Hadamard verifier: accepts any basis proof with probability 1/2.
    QuantumCircuit h;
    h.layout = RegisterLayout::qubits({{"out", 1}, {"P", 1}});
    h.readonly_register = "";
    h.gates.emplace_back(gates::H(), std::vector<int>{0}, "H");
    REQUIRE(circuit_acceptance_probability(h, "P", 0) ==
            Catch::Approx(density_matrix_acceptance_probability(h, "P", 0)).margin(1e-10));

    VerifierModel vm;
    vm.mode = VerifierModel::Mode::circuit;
    vm.proof_qubits = 1;
    vm.p_amp = 10;
    vm.circuits[""] = c;
    REQUIRE(to_double(verifier_probability(vm, "")) == Catch::Approx(0.5));
}

TEST_CASE("verifier model requires explicit off-path probabilities") {
    auto mach = m2_both_no();
    auto v = abstract_verifier(1, 30, {{"", Rational(0)}});  // missing "0" and "1"
    REQUIRE_THROWS_AS(exact_voting_distribution(mach, v, 4), Error);
}
