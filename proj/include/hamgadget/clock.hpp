#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "hamgadget/circuits.hpp"
#include "hamgadget/operators.hpp"
#include "hamgadget/spectra.hpp"

namespace hamgadget {

/// Clock register encoding for the circuit-to-Hamiltonian compiler.
/// - abstract_level: one explicit (L+1)-dimensional site, no penalty terms.
/// - unary: L qubits with valid states |1^t 0^(L-t)>, stabilized by 2-local
///   penalties; propagation terms use 3-local clock patterns (2-local at the
///   boundaries), keeping the total locality at 5.
enum class ClockMode { abstract_level, unary };

struct CompileOptions {
    ClockMode mode = ClockMode::unary;
    double delta = 1.0;  // overall scale applied to every component
    bool include_hout = false;
    std::string workspace_register = "W";  // qubits penalized at t=0; qubit 0 is the output W1

    // Component weight knobs. Unit weights give the standard construction;
    // the verify suites use non-unit values as negative controls.
    double w_in = 1.0, w_prop = 1.0, w_stab = 1.0, w_out = 1.0;
    int omit_prop_step = 0;  // 1-based propagation step to drop (0 = keep all)
};

namespace detail_clock {

/// Projector pattern |bits><bits| over `qubits`.
inline Matrix bit_projector(const std::vector<int>& bits) {
    std::int64_t dim = std::int64_t(1) << bits.size();
    std::int64_t idx = 0;
    for (int b : bits) idx = (idx << 1) | b;
    Matrix m = Matrix::Zero(dim, dim);
    m(idx, idx) = 1.0;
    return m;
}

/// Transition |to><from| over shared clock qubits.
inline Matrix bit_transition(const std::vector<int>& from, const std::vector<int>& to) {
    std::int64_t dim = std::int64_t(1) << from.size();
    std::int64_t fi = 0, ti = 0;
    for (int b : from) fi = (fi << 1) | b;
    for (int b : to) ti = (ti << 1) | b;
    Matrix m = Matrix::Zero(dim, dim);
    m(ti, fi) = 1.0;
    return m;
}

struct ClockPattern {
    std::vector<int> qubits;       // global clock qubit indices (ascending)
    std::vector<int> prev_bits;    // pattern for time t-1
    std::vector<int> cur_bits;     // pattern for time t
};

/// Unary clock pattern for propagation step t (1-based), on clock qubits
/// offset..offset+L-1.
inline ClockPattern unary_step_pattern(int t, int L, int offset) {
    ClockPattern p;
    if (L == 1) {
        p.qubits = {offset};
        p.prev_bits = {0};
        p.cur_bits = {1};
    } else if (t == 1) {
        p.qubits = {offset, offset + 1};
        p.prev_bits = {0, 0};
        p.cur_bits = {1, 0};
    } else if (t == L) {
        p.qubits = {offset + L - 2, offset + L - 1};
        p.prev_bits = {1, 0};
        p.cur_bits = {1, 1};
    } else {
        p.qubits = {offset + t - 2, offset + t - 1, offset + t};
        p.prev_bits = {1, 0, 0};
        p.cur_bits = {1, 1, 0};
    }
    return p;
}

}  // namespace detail_clock

/// Layout of the compiled Hamiltonian: the circuit's registers plus a clock
/// register "C" appended at the end.
inline RegisterLayout compiled_layout(const QuantumCircuit& circuit, ClockMode mode) {
    std::vector<Register> regs = circuit.layout.registers();
    int L = circuit.gate_count();
    if (mode == ClockMode::unary)
        regs.push_back({"C", L, 2});
    else
        regs.push_back({"C", 1, L + 1});
    return RegisterLayout(std::move(regs));
}

/// Circuit-to-Hamiltonian compiler. Emits delta * (H_in + H_prop + H_stab
/// [+ H_out]) with terms tagged "in", "prop", "stab", "out". Every component
/// is positive semidefinite; the null space of in+prop+stab is spanned by
/// history states over proofs of the non-workspace registers.
inline Hamiltonian compile_circuit(const QuantumCircuit& circuit, const CompileOptions& opts = {}) {
    validate_circuit(circuit);
    const int L = circuit.gate_count();
    require(opts.delta > 0.0, "delta must be positive");
    RegisterLayout lay = compiled_layout(circuit, opts.mode);
    Hamiltonian h(lay);

    const bool unary = (opts.mode == ClockMode::unary);
    const int clock_offset = unary ? lay.register_offset("C") : lay.site("C", 0);
    const int clock_dim = L + 1;

    // H_in: penalize workspace qubits away from |0> at time 0.
    if (circuit.layout.has_register(opts.workspace_register) && opts.w_in != 0.0) {
        for (int w : circuit.layout.register_sites(opts.workspace_register)) {
            Matrix blk;
            std::vector<int> sup;
            if (unary) {
                blk = kron(detail_clock::bit_projector({1}), detail_clock::bit_projector({0}));
                sup = {w, clock_offset};
            } else {
                Matrix t0 = Matrix::Zero(clock_dim, clock_dim);
                t0(0, 0) = 1.0;
                blk = kron(detail_clock::bit_projector({1}), t0);
                sup = {w, clock_offset};
            }
            h.add(sup, blk, opts.delta * opts.w_in, "in");
        }
    }

    // H_prop: one step per gate.
    for (int t = 1; t <= L; ++t) {
        if (t == opts.omit_prop_step) continue;
        const Gate& g = circuit.gates[static_cast<std::size_t>(t - 1)];
        Matrix u = gate_matrix_sorted(g);
        std::vector<int> gsup = sorted_targets(g);
        Matrix prev, cur, trans;
        std::vector<int> csup;
        if (unary) {
            auto p = detail_clock::unary_step_pattern(t, L, clock_offset);
            csup = p.qubits;
            prev = detail_clock::bit_projector(p.prev_bits);
            cur = detail_clock::bit_projector(p.cur_bits);
            trans = detail_clock::bit_transition(p.prev_bits, p.cur_bits);
        } else {
            csup = {clock_offset};
            prev = Matrix::Zero(clock_dim, clock_dim);
            prev(t - 1, t - 1) = 1.0;
            cur = Matrix::Zero(clock_dim, clock_dim);
            cur(t, t) = 1.0;
            trans = Matrix::Zero(clock_dim, clock_dim);
            trans(t, t - 1) = 1.0;
        }
        Matrix eye = Matrix::Identity(u.rows(), u.cols());
        Matrix blk = 0.5 * kron(eye, Matrix(prev + cur));
        blk -= 0.5 * kron(u, trans);
        blk -= 0.5 * kron(Matrix(u.adjoint()), Matrix(trans.adjoint()));
        std::vector<int> sup = gsup;
        sup.insert(sup.end(), csup.begin(), csup.end());
        h.add(sup, blk, opts.delta * opts.w_prop, "prop");
    }

    // H_stab: forbid "01" in the unary clock.
    if (unary && opts.w_stab != 0.0) {
        for (int j = 0; j + 1 < L; ++j) {
            h.add({clock_offset + j, clock_offset + j + 1}, detail_clock::bit_projector({0, 1}),
                  opts.delta * opts.w_stab, "stab");
        }
    }

    // H_out: penalize output qubit |0> at time L (omitted by default).
    if (opts.include_hout) {
        require(circuit.layout.has_register(opts.workspace_register) &&
                    circuit.layout.find_register(opts.workspace_register).sites >= 1,
                "H_out requires a designated output qubit W1");
        int w1 = circuit.layout.site(opts.workspace_register, 0);
        Matrix blk;
        std::vector<int> sup;
        if (unary) {
            blk = kron(detail_clock::bit_projector({0}), detail_clock::bit_projector({1}));
            sup = {w1, clock_offset + L - 1};
        } else {
            Matrix tl = Matrix::Zero(clock_dim, clock_dim);
            tl(L, L) = 1.0;
            blk = kron(detail_clock::bit_projector({0}), tl);
            sup = {w1, clock_offset};
        }
        h.add(sup, blk, opts.delta * opts.w_out, "out");
    }
    return h;
}

/// Basis index of the clock value t inside the clock register block.
inline std::int64_t clock_index(ClockMode mode, int t, int L) {
    if (mode == ClockMode::abstract_level) return t;
    std::int64_t bits = 0;
    for (int j = 0; j < L; ++j) bits = (bits << 1) | (j < t ? 1 : 0);
    return bits;
}

/// History state (1/sqrt(L+1)) sum_t U_t..U_1 |0..0>_W |proof> |t>_C.
/// `proof` lives on the non-workspace part of the circuit layout, in
/// register order.
inline StateVector history_state(const QuantumCircuit& circuit, const StateVector& proof, ClockMode mode,
                                 const std::string& workspace_register = "W") {
    validate_circuit(circuit);
    const int L = circuit.gate_count();
    // Assemble |0...0>_W (x) |proof> on the circuit layout.
    std::vector<Register> proof_regs;
    for (const auto& r : circuit.layout.registers())
        if (r.name != workspace_register) proof_regs.push_back(r);
    if (!proof_regs.empty())
        require(proof.layout == RegisterLayout(proof_regs),
                "proof layout does not match the circuit's non-workspace registers");

    Vector init = Vector::Zero(circuit.layout.dimension());
    if (proof_regs.empty()) {
        init(0) = 1.0;
    } else {
        // Map each proof basis index into the full layout (workspace = 0).
        std::vector<int> proof_sites;
        for (const auto& r : proof_regs)
            for (int s : circuit.layout.register_sites(r.name)) proof_sites.push_back(s);
        for (std::int64_t p = 0; p < proof.layout.dimension(); ++p) {
            if (proof.amplitudes(p) == cxd(0.0, 0.0)) continue;
            std::int64_t full = 0;
            for (int ps = 0; ps < proof.layout.total_sites(); ++ps)
                full += std::int64_t(proof.layout.digit(p, ps)) *
                        circuit.layout.stride(proof_sites[static_cast<std::size_t>(ps)]);
            init(full) = proof.amplitudes(p);
        }
    }

    auto snaps = simulate_snapshots(circuit, init);
    RegisterLayout full_lay = compiled_layout(circuit, mode);
    const std::int64_t clock_block = (mode == ClockMode::unary) ? (std::int64_t(1) << L) : (L + 1);
    Vector hist = Vector::Zero(full_lay.dimension());
    const double amp = 1.0 / std::sqrt(static_cast<double>(L + 1));
    for (int t = 0; t <= L; ++t) {
        const std::int64_t coff = clock_index(mode, t, L);
        const Vector& s = snaps[static_cast<std::size_t>(t)];
        for (std::int64_t i = 0; i < s.size(); ++i)
            if (s(i) != cxd(0.0, 0.0)) hist(i * clock_block + coff) += amp * s(i);
    }
    return StateVector(full_lay, std::move(hist));
}

/// Lower bound pi^2 * Delta / (64 L^3) on the smallest nonzero eigenvalue of
/// Delta*(H_in + H_prop + H_stab).
inline double gap_lower_bound(double delta, int L) {
    require(delta > 0.0 && L >= 1, "gap bound needs delta > 0 and L >= 1");
    const double pi = std::numbers::pi;
    return pi * pi * delta / (64.0 * static_cast<double>(L) * static_cast<double>(L) * static_cast<double>(L));
}

struct NullspaceReport {
    int kernel_dim = 0;
    int expected_dim = 0;
    double max_principal_angle = 0.0;
    bool pass = false;
};

/// Checks that the kernel of H_in + H_prop + H_stab equals the span of
/// history states over all basis proofs, reporting the worst principal angle.
inline NullspaceReport verify_nullspace_with(const QuantumCircuit& circuit, const CompileOptions& copts,
                                             double angle_tol = 1e-7) {
    const std::string& workspace_register = copts.workspace_register;
    ClockMode mode = copts.mode;
    Hamiltonian h = compile_circuit(circuit, copts);
    const std::int64_t dim = h.layout.dimension();
    require(dim <= 1 << 12, "nullspace verification needs a dense-solvable dimension");

    Matrix m = realize(h);
    std::vector<double> evals;
    dense_eig_inplace(m, evals);
    const double zero_tol = 1e-8 * std::max(1.0, h.norm_upper_bound());

    NullspaceReport rep;
    for (std::size_t i = 0; i < evals.size(); ++i)
        if (evals[i] <= zero_tol) ++rep.kernel_dim;

    std::vector<Register> proof_regs;
    for (const auto& r : circuit.layout.registers())
        if (r.name != workspace_register) proof_regs.push_back(r);
    std::int64_t proof_dim = 1;
    for (const auto& r : proof_regs)
        for (int i = 0; i < r.sites; ++i) proof_dim *= r.site_dim;
    rep.expected_dim = static_cast<int>(proof_dim);

    if (rep.kernel_dim != rep.expected_dim) {
        rep.max_principal_angle = std::numbers::pi / 2;
        rep.pass = false;
        return rep;
    }

    Matrix kernel = m.leftCols(rep.kernel_dim);
    Matrix hist(dim, proof_dim);
    if (proof_regs.empty()) {
        auto hs = history_state(circuit, StateVector(), mode, workspace_register);
        hist.col(0) = hs.amplitudes;
    } else {
        RegisterLayout proof_lay(proof_regs);
        for (std::int64_t b = 0; b < proof_dim; ++b) {
            auto hs = history_state(circuit, StateVector::basis(proof_lay, b), mode, workspace_register);
            hist.col(b) = hs.amplitudes;
        }
    }
    // Principal angles between the two orthonormal column spans.
    Eigen::JacobiSVD<Matrix> svd(kernel.adjoint() * hist);
    double min_sigma = svd.singularValues().minCoeff();
    rep.max_principal_angle = std::acos(std::min(1.0, min_sigma));
    rep.pass = rep.max_principal_angle < angle_tol;
    return rep;
}

inline NullspaceReport verify_nullspace(const QuantumCircuit& circuit, ClockMode mode, double angle_tol = 1e-7,
                                        const std::string& workspace_register = "W") {
    CompileOptions copts;
    copts.mode = mode;
    copts.workspace_register = workspace_register;
    return verify_nullspace_with(circuit, copts, angle_tol);
}

struct GapBoundCheck {
    double smallest_nonzero = 0.0;
    double bound = 0.0;
    bool pass = false;
    bool flagged = false;  // within 1e-9 of the bound: passes, but noted
};

/// Verifies the Lemma-style lower bound on the smallest nonzero eigenvalue
/// of the scaled compile output.
inline GapBoundCheck check_gap_lower_bound_with(const QuantumCircuit& circuit, const CompileOptions& copts) {
    double delta = copts.delta;
    Hamiltonian h = compile_circuit(circuit, copts);
    require(h.layout.dimension() <= 1 << 12, "gap bound check needs a dense-solvable dimension");
    auto evals = dense_eigenvalues(realize(h));
    const double zero_tol = 1e-8 * std::max(1.0, h.norm_upper_bound());
    GapBoundCheck chk;
    chk.bound = gap_lower_bound(delta, circuit.gate_count());
    chk.smallest_nonzero = std::numeric_limits<double>::infinity();
    for (double e : evals)
        if (e > zero_tol) {
            chk.smallest_nonzero = e;
            break;
        }
    chk.pass = chk.smallest_nonzero >= chk.bound - 1e-9;
    chk.flagged = std::abs(chk.smallest_nonzero - chk.bound) <= 1e-9;
    return chk;
}

inline GapBoundCheck check_gap_lower_bound(const QuantumCircuit& circuit, ClockMode mode, double delta) {
    CompileOptions copts;
    copts.mode = mode;
    copts.delta = delta;
    return check_gap_lower_bound_with(circuit, copts);
}

/// Sorted spectrum of the unary compile restricted to the valid-clock
/// subspace; must match the abstract-clock spectrum.
inline std::vector<double> unary_valid_subspace_spectrum(const QuantumCircuit& circuit,
                                                         const CompileOptions& base = {}) {
    CompileOptions copts = base;
    copts.mode = ClockMode::unary;
    Hamiltonian h = compile_circuit(circuit, copts);
    const int L = circuit.gate_count();
    Matrix m = realize(h);
    const std::int64_t clock_block = std::int64_t(1) << L;
    const std::int64_t comp_dim = circuit.layout.dimension();
    std::vector<std::int64_t> idx;
    for (std::int64_t ci = 0; ci < comp_dim; ++ci)
        for (int t = 0; t <= L; ++t) idx.push_back(ci * clock_block + clock_index(ClockMode::unary, t, L));
    Matrix sub(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t c = 0; c < idx.size(); ++c) sub(r, c) = m(idx[r], idx[c]);
    return dense_eigenvalues(sub);
}

}  // namespace hamgadget
