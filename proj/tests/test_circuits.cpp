#include <catch2/catch_amalgamated.hpp>

#include "hamgadget/circuits.hpp"
#include "test_helpers.hpp"

using namespace hamgadget;
using namespace test_helpers;

TEST_CASE("gate validation") {
    auto lay = RegisterLayout::qubits({{"W", 1}, {"Q", 1}});
    REQUIRE_NOTHROW(validate_gate(Gate(gates::X(), {0}, "X"), lay));
    REQUIRE_THROWS_AS(validate_gate(Gate(gates::X(), {0, 1}, "X"), lay), Error);
    REQUIRE_THROWS_AS(validate_gate(Gate(gates::CNOT(), {1, 1}, "CNOT"), lay), Error);
    Matrix notu = Matrix::Identity(2, 2) * 1.5;
    REQUIRE_THROWS_AS(validate_gate(Gate(notu, {0}, "bad"), lay), Error);
}

TEST_CASE("read-only register accepts control, rejects writes") {
    QuantumCircuit c;
    c.layout = RegisterLayout::qubits({{"W", 1}, {"Q", 1}});
    c.readonly_register = "Q";
    c.gates.emplace_back(gates::CNOT(), std::vector<int>{1, 0}, "CNOT");  // Q controls W: fine
    REQUIRE_NOTHROW(validate_circuit(c));
    c.gates.emplace_back(gates::CNOT(), std::vector<int>{0, 1}, "CNOT");  // writes Q
    REQUIRE_THROWS_AS(validate_circuit(c), Error);
}

TEST_CASE("simulation: CNOT copies the control") {
    QuantumCircuit c;
    c.layout = RegisterLayout::qubits({{"W", 1}, {"Q", 1}});
    c.gates.emplace_back(gates::CNOT(), std::vector<int>{1, 0}, "CNOT");
    // |W=0, Q=1> -> |W=1, Q=1>
    Vector init = Vector::Zero(4);
    init(1) = 1.0;  // index: W msb, Q lsb
    Vector out = simulate(c, init);
    REQUIRE(std::abs(out(3) - cxd(1, 0)) < 1e-14);
    REQUIRE(probability_one(c.layout, out, 0) == Catch::Approx(1.0));
}

TEST_CASE("gate matrix reindexing for descending targets") {
    // CNOT with control qubit 1, target qubit 0 on a 2-qubit register.
    QuantumCircuit c;
    c.layout = RegisterLayout::single("W", 2);
    c.readonly_register = "";
    c.gates.emplace_back(gates::CNOT(), std::vector<int>{1, 0}, "CNOT");
    Vector init = Vector::Zero(4);
    init(1) = 1.0;  // |01>: control (qubit 1) set
    Vector out = simulate(c, init);
    REQUIRE(std::abs(out(3) - cxd(1, 0)) < 1e-14);  // target (qubit 0) flipped
}

TEST_CASE("toffoli decomposition equals the exact Toffoli") {
    QuantumCircuit c;
    c.layout = RegisterLayout::single("W", 3);
    c.readonly_register = "";
    for (auto& g : gates::toffoli_decomposed(0, 1, 2)) c.gates.push_back(g);
    Matrix full = Matrix::Zero(8, 8);
    for (int b = 0; b < 8; ++b) {
        Vector e = Vector::Zero(8);
        e(b) = 1.0;
        full.col(b) = simulate(c, e);
    }
    Matrix want = Matrix::Identity(8, 8);
    want(6, 6) = 0;
    want(7, 7) = 0;
    want(6, 7) = 1;
    want(7, 6) = 1;
    REQUIRE(max_entry_diff(full, want) < 1e-12);
}

TEST_CASE("random circuits respect the read-only register") {
    for (std::uint64_t s = 0; s < 25; ++s) {
        auto c = random_circuit(2, 2, 5, 100 + s);
        REQUIRE_NOTHROW(validate_circuit(c));
        REQUIRE(c.gate_count() == 5);
    }
}
