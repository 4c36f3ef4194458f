#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "hamgadget/common.hpp"
#include "hamgadget/operators.hpp"

namespace hamgadget {

/// A 1- or 2-qubit gate. The unitary is indexed with targets[0] as the most
/// significant qubit.
struct Gate {
    Matrix unitary;
    std::vector<int> targets;
    std::string label;

    Gate() = default;
    Gate(Matrix u, std::vector<int> t, std::string l = "")
        : unitary(std::move(u)), targets(std::move(t)), label(std::move(l)) {}
};

namespace gates {

inline Matrix X() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
inline Matrix Z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}
inline Matrix H() {
    Matrix m(2, 2);
    double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return m;
}
inline Matrix ID() { return Matrix::Identity(2, 2); }

inline Matrix controlled(const Matrix& u) {
    Matrix m = Matrix::Identity(4, 4);
    m.block(2, 2, 2, 2) = u;
    return m;
}
inline Matrix anticontrolled(const Matrix& u) {
    Matrix m = Matrix::Identity(4, 4);
    m.block(0, 0, 2, 2) = u;
    return m;
}
inline Matrix CNOT() { return controlled(X()); }
inline Matrix CZ() { return controlled(Z()); }
inline Matrix CH() { return controlled(H()); }
/// Anti-controlled NOT: applies X to the target when the control is |0>.
inline Matrix CNOT0() { return anticontrolled(X()); }
/// V = sqrt(X), so that the 5-gate two-qubit decomposition of the Toffoli
/// gate (CV, CNOT, CV+, CNOT, CV on suitable pairs) is exact.
inline Matrix V() {
    Matrix m(2, 2);
    m << cxd(0.5, 0.5), cxd(0.5, -0.5), cxd(0.5, -0.5), cxd(0.5, 0.5);
    return m;
}
inline Matrix CV() { return controlled(V()); }
inline Matrix CVD() { return controlled(Matrix(V().adjoint())); }

/// Canonical matrix for a built-in label, or empty if unknown.
inline Matrix by_label(const std::string& label) {
    if (label == "X") return X();
    if (label == "Z") return Z();
    if (label == "H") return H();
    if (label == "ID") return ID();
    if (label == "CNOT") return CNOT();
    if (label == "CZ") return CZ();
    if (label == "CH") return CH();
    if (label == "CNOT0") return CNOT0();
    if (label == "CV") return CV();
    if (label == "CVD") return CVD();
    return Matrix();
}

/// The 5-gate two-qubit realization of TOFFOLI(c1, c2 -> t).
inline std::vector<Gate> toffoli_decomposed(int c1, int c2, int t) {
    return {Gate(CV(), {c2, t}, "CV"), Gate(CNOT(), {c1, c2}, "CNOT"), Gate(CVD(), {c2, t}, "CVD"),
            Gate(CNOT(), {c1, c2}, "CNOT"), Gate(CV(), {c1, t}, "CV")};
}

}  // namespace gates

inline void validate_gate(const Gate& g, const RegisterLayout& layout) {
    require(g.targets.size() == 1 || g.targets.size() == 2, "unsupported gate arity");
    std::int64_t want = 1;
    for (std::size_t i = 0; i < g.targets.size(); ++i) {
        int t = g.targets[i];
        require(t >= 0 && t < layout.total_sites(), "gate target out of range");
        require(layout.site_dim(t) == 2, "gate target must be a qubit");
        for (std::size_t j = i + 1; j < g.targets.size(); ++j)
            require(g.targets[j] != t, "gate targets must be distinct");
        want *= 2;
    }
    require(g.unitary.rows() == want && g.unitary.cols() == want, "gate matrix dimension mismatch");
    Matrix err = g.unitary.adjoint() * g.unitary - Matrix::Identity(want, want);
    require(max_abs(err) <= 1e-12, "gate matrix not unitary within 1e-12");
}

/// Gate matrix re-indexed so that the lower global qubit index is most
/// significant, matching sorted-support conventions.
inline Matrix gate_matrix_sorted(const Gate& g) {
    if (g.targets.size() == 1 || g.targets[0] < g.targets[1]) return g.unitary;
    Matrix swapped(4, 4);
    auto flip = [](int i) { return ((i & 1) << 1) | (i >> 1); };
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) swapped(flip(r), flip(c)) = g.unitary(r, c);
    return swapped;
}

inline std::vector<int> sorted_targets(const Gate& g) {
    std::vector<int> t = g.targets;
    std::sort(t.begin(), t.end());
    return t;
}

/// True iff the gate is block-diagonal in the computational basis of the
/// given target position (it may read that qubit but never change it).
inline bool gate_diagonal_on_target(const Gate& g, std::size_t target_pos) {
    std::int64_t rep = g.unitary.rows() >> (target_pos + 1);
    for (Eigen::Index r = 0; r < g.unitary.rows(); ++r)
        for (Eigen::Index c = 0; c < g.unitary.cols(); ++c) {
            if (((r / rep) & 1) != ((c / rep) & 1) && g.unitary(r, c) != cxd(0.0, 0.0)) return false;
        }
    return true;
}

/// Ordered list of 1-/2-qubit gates over named registers. The register named
/// by `readonly_register` (the proof register Q) may be read but never
/// written: every gate touching it must be block-diagonal on its qubits.
struct QuantumCircuit {
    RegisterLayout layout;
    std::vector<Gate> gates;
    std::string readonly_register = "Q";

    int gate_count() const { return static_cast<int>(gates.size()); }
};

inline void validate_circuit(const QuantumCircuit& c) {
    require(c.layout.all_qubits(), "circuit layout must be all qubits");
    require(!c.gates.empty(), "circuit must contain at least one gate");
    std::vector<bool> readonly(static_cast<std::size_t>(c.layout.total_sites()), false);
    if (!c.readonly_register.empty() && c.layout.has_register(c.readonly_register))
        for (int q : c.layout.register_sites(c.readonly_register)) readonly[static_cast<std::size_t>(q)] = true;
    for (const auto& g : c.gates) {
        validate_gate(g, c.layout);
        for (std::size_t i = 0; i < g.targets.size(); ++i) {
            if (readonly[static_cast<std::size_t>(g.targets[i])])
                require(gate_diagonal_on_target(g, i),
                        "gate '" + g.label + "' writes to read-only register " + c.readonly_register);
        }
    }
}

/// In-place application of a gate to a full statevector.
inline void apply_gate(const Gate& g, const RegisterLayout& layout, Vector& state) {
    const Matrix u = gate_matrix_sorted(g);
    std::vector<int> sup = sorted_targets(g);
    const std::int64_t ds = u.rows();
    LocalTerm probe(sup, Matrix::Identity(ds, ds));  // reuse stride machinery
    const auto off = detail::support_offsets(probe, layout);
    detail::RestIter rest(probe, layout);
    Vector gathered(ds), mixed(ds);
    std::int64_t base = 0;
    do {
        for (std::int64_t s = 0; s < ds; ++s) gathered(s) = state(base + off[static_cast<std::size_t>(s)]);
        mixed.noalias() = u * gathered;
        for (std::int64_t s = 0; s < ds; ++s) state(base + off[static_cast<std::size_t>(s)]) = mixed(s);
    } while (rest.next(base));
}

/// States after 0..L gates, starting from `initial` on the circuit layout.
inline std::vector<Vector> simulate_snapshots(const QuantumCircuit& c, const Vector& initial) {
    require(initial.size() == c.layout.dimension(), "initial state dimension mismatch");
    std::vector<Vector> snaps;
    snaps.reserve(c.gates.size() + 1);
    snaps.push_back(initial);
    Vector cur = initial;
    for (const auto& g : c.gates) {
        apply_gate(g, c.layout, cur);
        snaps.push_back(cur);
    }
    return snaps;
}

inline Vector simulate(const QuantumCircuit& c, const Vector& initial) {
    Vector cur = initial;
    for (const auto& g : c.gates) apply_gate(g, c.layout, cur);
    return cur;
}

/// Probability that measuring `qubit` on `state` yields |1>.
inline double probability_one(const RegisterLayout& layout, const Vector& state, int qubit) {
    double p = 0.0;
    for (std::int64_t i = 0; i < state.size(); ++i)
        if (layout.digit(i, qubit) == 1) p += std::norm(state(i));
    return p;
}

/// Random circuit respecting the read-only register, for batch checks.
/// Gates touching Q stay diagonal on Q (CZ anywhere, CNOT only controlled
/// on Q, Z/ID on Q); W qubits get the full 1-/2-qubit menu.
inline QuantumCircuit random_circuit(int n_w, int n_q, int length, std::uint64_t seed) {
    require(n_w + n_q >= 1 && length >= 1, "random circuit needs qubits and gates");
    QuantumCircuit c;
    c.layout = RegisterLayout::qubits({{"W", n_w}, {"Q", n_q}});
    c.readonly_register = "Q";
    std::mt19937_64 rng(seed);
    auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
    while (c.gate_count() < length) {
        bool two = (n_w + n_q >= 2) && (rng() % 2 == 0);
        if (!two) {
            if (n_w > 0 && (n_q == 0 || rng() % 4 != 0)) {
                const char* names[] = {"X", "Z", "H"};
                const char* nm = names[pick(3)];
                c.gates.emplace_back(gates::by_label(nm), std::vector<int>{pick(n_w)}, nm);
            } else if (n_q > 0) {
                c.gates.emplace_back(gates::Z(), std::vector<int>{n_w + pick(n_q)}, "Z");
            }
            continue;
        }
        int kind = pick(3);
        if (kind == 0 && n_w >= 2) {
            int a = pick(n_w), b = pick(n_w);
            if (a == b) continue;
            c.gates.emplace_back(gates::CNOT(), std::vector<int>{a, b}, "CNOT");
        } else if (kind == 1 && n_q >= 1 && n_w >= 1) {
            c.gates.emplace_back(gates::CNOT(), std::vector<int>{n_w + pick(n_q), pick(n_w)}, "CNOT");
        } else {
            int total = n_w + n_q;
            int a = pick(total), b = pick(total);
            if (a == b) continue;
            c.gates.emplace_back(gates::CZ(), std::vector<int>{a, b}, "CZ");
        }
    }
    validate_circuit(c);
    return c;
}

}  // namespace hamgadget
