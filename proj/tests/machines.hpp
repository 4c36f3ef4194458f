#pragma once

#include "hamgadget/queryham.hpp"

namespace test_machines {

using namespace hamgadget;

inline Matrix diagm(std::initializer_list<double> vals) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(vals.size()), static_cast<Eigen::Index>(vals.size()));
    Eigen::Index i = 0;
    for (double v : vals) m(i, i) = v, ++i;
    return m;
}

/// Single-query machine; final map accepts per answer bit.
inline QueryMachine m1_machine(double eps, const Matrix& query, bool accept_on_0, bool accept_on_1) {
    QueryMachine mach;
    mach.m = 1;
    mach.epsilon = eps;
    mach.proof_qubits = 1;
    mach.queries[""] = query;
    mach.final_accept["0"] = accept_on_0;
    mach.final_accept["1"] = accept_on_1;
    return mach;
}

inline QueryMachine m1_valid_yes(double eps = 0.5) {
    return m1_machine(eps, diagm({0.0, 3 * eps}), false, true);
}
inline QueryMachine m1_valid_no(double eps = 0.5) {
    return m1_machine(eps, diagm({3 * eps, 4 * eps}), true, false);
}
inline QueryMachine m1_invalid(double eps = 0.5, bool accept = true) {
    return m1_machine(eps, diagm({1.5 * eps, 1.5 * eps}), accept, accept);
}

/// Two queries, both valid NO; correct string "00".
inline QueryMachine m2_both_no(double eps = 0.5) {
    QueryMachine mach;
    mach.m = 2;
    mach.epsilon = eps;
    mach.proof_qubits = 1;
    mach.queries[""] = diagm({3 * eps, 4 * eps});
    mach.queries["0"] = diagm({3 * eps, 5 * eps});
    mach.queries["1"] = diagm({3 * eps, 5 * eps});
    for (auto s : {"00", "01", "10", "11"}) mach.final_accept[s] = (std::string(s) == "00");
    return mach;
}

/// Two queries with adaptive validity: query 2 is valid YES after y1=0 but
/// invalid after y1=1.
inline QueryMachine m2_adaptive(double eps = 0.5) {
    QueryMachine mach;
    mach.m = 2;
    mach.epsilon = eps;
    mach.proof_qubits = 1;
    mach.queries[""] = diagm({0.2 * eps, 3 * eps});      // valid YES
    mach.queries["0"] = diagm({0.5 * eps, 3.5 * eps});   // valid YES
    mach.queries["1"] = diagm({2.0 * eps, 2.5 * eps});   // invalid
    for (auto s : {"00", "01", "10", "11"}) mach.final_accept[s] = (s[0] == '1');
    return mach;
}

/// Three queries, 1- and 2-qubit query spaces, valid and invalid mixes.
inline QueryMachine m3_mixed(double eps = 0.5) {
    QueryMachine mach;
    mach.m = 3;
    mach.epsilon = eps;
    mach.proof_qubits = 2;
    mach.queries[""] = diagm({0.0, 3 * eps});  // valid YES
    for (auto p : {"0", "1"}) mach.queries[p] = diagm({3 * eps, 4 * eps});  // valid NO
    // Level 3: 2-qubit query spaces; validity depends on the prefix.
    for (auto p : {"00", "01", "10", "11"}) {
        std::string s(p);
        if (s == "10")
            mach.queries[p] = diagm({0.5 * eps, 3 * eps, 4 * eps, 5 * eps});  // valid YES
        else if (s == "11")
            mach.queries[p] = diagm({1.8 * eps, 2.2 * eps, 3 * eps, 4 * eps});  // invalid
        else
            mach.queries[p] = diagm({3 * eps, 3.5 * eps, 4 * eps, 5 * eps});  // valid NO
    }
    for (std::uint64_t y = 0; y < 8; ++y) mach.final_accept[bits_to_string(y, 3)] = (y == 4);  // accept "100"
    return mach;
}

/// Unique-ground-state style machines (queries with unique ground states).
inline QueryMachine m2_ulh_accepting(double eps = 0.5) {
    QueryMachine mach;
    mach.m = 2;
    mach.epsilon = eps;
    mach.proof_qubits = 1;
    mach.queries[""] = diagm({0.5 * eps, 3 * eps});    // valid YES, unique ground
    mach.queries["0"] = diagm({3 * eps, 4 * eps});     // valid NO
    mach.queries["1"] = diagm({0.2 * eps, 3.5 * eps});  // valid YES
    // Correct string: y1=1, y2=1 -> "11".
    for (auto s : {"00", "01", "10", "11"}) mach.final_accept[s] = (std::string(s) == "11");
    return mach;
}

inline QueryMachine m2_ulh_rejecting(double eps = 0.5) {
    QueryMachine mach = m2_ulh_accepting(eps);
    for (auto& [k, v] : mach.final_accept) v = !v;
    return mach;
}

/// Machine with one planted far-from-valid query: two near-degenerate low
/// eigenvalues close the gadget gap, so validation must replace it.
inline QueryMachine m2_planted_invalid(double eps, double delta) {
    QueryMachine mach;
    mach.m = 2;
    mach.epsilon = eps;
    mach.proof_qubits = 1;
    mach.queries[""] = diagm({2 * eps - 10 * delta, 2 * eps - 9 * delta});  // invalid, tiny gap
    mach.queries["0"] = diagm({0.5 * eps, 3 * eps});                        // valid YES
    mach.queries["1"] = diagm({0.5 * eps, 3 * eps});                        // valid YES
    // Answers to the replaced query become NO; machine rejects everything
    // consistent with the original promise resolution either way.
    for (auto s : {"00", "01", "10", "11"}) mach.final_accept[s] = false;
    return mach;
}

}  // namespace test_machines
