#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "hamgadget/queryham.hpp"

namespace hamgadget::fixtures {

inline Matrix diag(std::initializer_list<double> vals) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(vals.size()), static_cast<Eigen::Index>(vals.size()));
    Eigen::Index i = 0;
    for (double v : vals) m(i, i) = v, ++i;
    return m;
}

/// Named query machines used by the verification suites and tests. All
/// query Hamiltonians are diagonal with the stated validity against the
/// (eps, 3*eps) thresholds.
inline QueryMachine machine(const std::string& name, double eps = 0.5, double delta = 0.01) {
    QueryMachine mach;
    mach.epsilon = eps;
    mach.proof_qubits = 1;
    if (name == "m1-yes") {
        mach.m = 1;
        mach.queries[""] = diag({0.0, 3 * eps});
        mach.final_accept = {{"0", false}, {"1", true}};
    } else if (name == "m1-yes-reject") {
        mach.m = 1;
        mach.queries[""] = diag({0.0, 3 * eps});
        mach.final_accept = {{"0", true}, {"1", false}};
    } else if (name == "m1-no") {
        mach.m = 1;
        mach.queries[""] = diag({3 * eps, 4 * eps});
        mach.final_accept = {{"0", true}, {"1", false}};
    } else if (name == "m1-no-reject") {
        mach.m = 1;
        mach.queries[""] = diag({3 * eps, 4 * eps});
        mach.final_accept = {{"0", false}, {"1", true}};
    } else if (name == "m1-invalid-accept" || name == "m1-invalid-reject") {
        mach.m = 1;
        mach.queries[""] = diag({1.5 * eps, 1.5 * eps});
        bool acc = (name == "m1-invalid-accept");
        mach.final_accept = {{"0", acc}, {"1", acc}};
    } else if (name == "m2-both-no") {
        mach.m = 2;
        mach.queries[""] = diag({3 * eps, 4 * eps});
        mach.queries["0"] = diag({3 * eps, 5 * eps});
        mach.queries["1"] = diag({3 * eps, 5 * eps});
        for (auto s : {"00", "01", "10", "11"}) mach.final_accept[s] = (std::string(s) == "00");
    } else if (name == "m2-adaptive") {
        mach.m = 2;
        mach.queries[""] = diag({0.2 * eps, 3 * eps});
        mach.queries["0"] = diag({0.5 * eps, 3.5 * eps});
        mach.queries["1"] = diag({2.0 * eps, 2.5 * eps});
        for (auto s : {"00", "01", "10", "11"}) mach.final_accept[s] = (s[0] == '1');
    } else if (name == "m3-mixed") {
        mach.m = 3;
        mach.proof_qubits = 2;
        mach.queries[""] = diag({0.0, 3 * eps});
        for (auto p : {"0", "1"}) mach.queries[p] = diag({3 * eps, 4 * eps});
        for (auto p : {"00", "01", "10", "11"}) {
            std::string s(p);
            if (s == "10")
                mach.queries[p] = diag({0.5 * eps, 3 * eps, 4 * eps, 5 * eps});
            else if (s == "11")
                mach.queries[p] = diag({1.8 * eps, 2.2 * eps, 3 * eps, 4 * eps});
            else
                mach.queries[p] = diag({3 * eps, 3.5 * eps, 4 * eps, 5 * eps});
        }
        for (std::uint64_t y = 0; y < 8; ++y) mach.final_accept[bits_to_string(y, 3)] = (y == 4);
    } else if (name == "m2-ulh-accepting" || name == "m2-ulh-rejecting") {
        mach.m = 2;
        mach.queries[""] = diag({0.5 * eps, 3 * eps});
        mach.queries["0"] = diag({3 * eps, 4 * eps});
        mach.queries["1"] = diag({0.2 * eps, 3.5 * eps});
        bool acc = (name == "m2-ulh-accepting");
        for (auto s : {"00", "01", "10", "11"})
            mach.final_accept[s] = acc ? (std::string(s) == "11") : (std::string(s) != "11");
    } else if (name == "m2-planted") {
        mach.m = 2;
        mach.queries[""] = diag({2 * eps - 10 * delta, 2 * eps - 9 * delta});
        mach.queries["0"] = diag({0.5 * eps, 3 * eps});
        mach.queries["1"] = diag({0.5 * eps, 3 * eps});
        for (auto s : {"00", "01", "10", "11"}) mach.final_accept[s] = false;
    } else {
        throw Error("unknown fixture machine: " + name);
    }
    validate_machine(mach);
    return mach;
}

inline std::vector<std::string> machine_names() {
    return {"m1-yes",          "m1-yes-reject",     "m1-no",      "m1-no-reject",
            "m1-invalid-accept", "m1-invalid-reject", "m2-both-no", "m2-adaptive",
            "m3-mixed",        "m2-ulh-accepting",  "m2-ulh-rejecting", "m2-planted"};
}

}  // namespace hamgadget::fixtures
