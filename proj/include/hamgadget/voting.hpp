#pragma once

#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hamgadget/circuits.hpp"
#include "hamgadget/queryham.hpp"

namespace hamgadget {

/// Exact arithmetic for the voting distribution. Doubles are dyadic
/// rationals, so converting inputs here loses nothing.
using Rational = boost::multiprecision::cpp_rational;

inline Rational pow2_rational(int exponent) {
    using boost::multiprecision::cpp_int;
    cpp_int one = 1;
    if (exponent >= 0) return Rational(one << exponent, 1);
    return Rational(1, one << (-exponent));
}

inline Rational rational_pow(const Rational& base, int exponent) {
    require(exponent >= 0, "rational_pow needs a nonnegative exponent");
    Rational out = 1;
    for (int i = 0; i < exponent; ++i) out *= base;
    return out;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Per-query acceptance model: the probability that the amplified verifier
/// accepts the maximally mixed proof, for every answer prefix (on- and
/// off-path alike; off-path probabilities must be supplied explicitly).
/// Completeness/soundness are 1 - 2^-p_amp and 2^-p_amp.
struct VerifierModel {
    enum class Mode { abstract_probabilities, circuit };
    Mode mode = Mode::abstract_probabilities;
    int proof_qubits = 1;  // M
    int p_amp = 10;
    std::map<std::string, Rational> probabilities;     // abstract mode
    std::map<std::string, QuantumCircuit> circuits;    // circuit mode, keyed by prefix
    std::string proof_register = "P";
    int output_qubit = 0;  // circuit mode: measured qubit
};

/// Acceptance probability of a verifier circuit on the maximally mixed
/// proof: the average over all basis proofs of Pr[output qubit = 1].
inline double circuit_acceptance_probability(const QuantumCircuit& circuit, const std::string& proof_register,
                                             int output_qubit) {
    validate_circuit(circuit);
    auto proof_sites = circuit.layout.register_sites(proof_register);
    const std::int64_t n_proofs = std::int64_t(1) << proof_sites.size();
    double total = 0.0;
    for (std::int64_t b = 0; b < n_proofs; ++b) {
        Vector init = Vector::Zero(circuit.layout.dimension());
        std::int64_t idx = 0;
        for (std::size_t j = 0; j < proof_sites.size(); ++j)
            if ((b >> (proof_sites.size() - 1 - j)) & 1) idx += circuit.layout.stride(proof_sites[j]);
        init(idx) = 1.0;
        total += probability_one(circuit.layout, simulate(circuit, init), output_qubit);
    }
    return total / static_cast<double>(n_proofs);
}

/// Independent route for the same quantity: evolve the full density matrix
/// rho = I/2^M (x) |0..0><0..0| through the circuit and measure.
inline double density_matrix_acceptance_probability(const QuantumCircuit& circuit,
                                                    const std::string& proof_register, int output_qubit) {
    validate_circuit(circuit);
    const std::int64_t dim = circuit.layout.dimension();
    require(dim <= 512, "density-matrix route is for small verifiers");
    auto proof_sites = circuit.layout.register_sites(proof_register);
    const std::int64_t n_proofs = std::int64_t(1) << proof_sites.size();
    Matrix rho = Matrix::Zero(dim, dim);
    for (std::int64_t b = 0; b < n_proofs; ++b) {
        std::int64_t idx = 0;
        for (std::size_t j = 0; j < proof_sites.size(); ++j)
            if ((b >> (proof_sites.size() - 1 - j)) & 1) idx += circuit.layout.stride(proof_sites[j]);
        rho(idx, idx) = 1.0 / static_cast<double>(n_proofs);
    }
    Matrix u = Matrix::Identity(dim, dim);
    for (std::int64_t c = 0; c < dim; ++c) {
        Vector e = Vector::Zero(dim);
        e(c) = 1.0;
        u.col(c) = simulate(circuit, e);
    }
    rho = u * rho * u.adjoint();
    double p = 0.0;
    for (std::int64_t i = 0; i < dim; ++i)
        if (circuit.layout.digit(i, output_qubit) == 1) p += rho(i, i).real();
    return p;
}

inline Rational verifier_probability(const VerifierModel& model, const std::string& prefix) {
    if (model.mode == VerifierModel::Mode::abstract_probabilities) {
        auto it = model.probabilities.find(prefix);
        require(it != model.probabilities.end(),
                "verifier model missing probability for prefix '" + prefix + "'");
        require(it->second >= 0 && it->second <= 1, "verifier probability out of [0,1]");
        return it->second;
    }
    auto it = model.circuits.find(prefix);
    require(it != model.circuits.end(), "verifier model missing circuit for prefix '" + prefix + "'");
    return Rational(circuit_acceptance_probability(it->second, model.proof_register, model.output_qubit));
}

/// Distribution of the voting procedure's output: per-string masses, the
/// abort symbol '#', class masses, Delta, and the accept probability
/// (abort tosses a fair coin; otherwise the machine's answer on y).
struct VotingOutcome {
    int m = 0;
    int q = 0;       // (M+2) m
    int n_c = 0;
    std::map<std::string, Rational> prob;
    Rational prob_hash = 0;
    Rational mass_a = 0, mass_b = 0, mass_c = 0;
    Rational delta = 0;   // Pr[A] - Pr[B u C]
    Rational accept = 0;
};

/// Exact distribution of the hierarchical vote. Step-1 answers are
/// independent Bernoulli draws with prefix-conditioned parameters; a string
/// of value |y| survives the down-weighting rounds with probability
/// (2^-q)^((n_c-1)-|y|).
inline VotingOutcome exact_voting_distribution(const QueryMachine& mach, const VerifierModel& verifier,
                                               int n_c) {
    validate_machine(mach);
    const int m = mach.m;
    require(m <= 20, "exact enumeration bounded to m <= 20");
    const int max_value = static_cast<int>((std::int64_t(1) << m) - 1);
    require(n_c - 1 >= max_value, "invalid survival exponent: n_c - 1 < max |y|");

    VotingOutcome out;
    out.m = m;
    out.q = (verifier.proof_qubits + 2) * m;
    out.n_c = n_c;
    Rational total = 0;
    for (std::uint64_t yv = 0; yv < (std::uint64_t(1) << m); ++yv) {
        std::string y = bits_to_string(yv, m);
        Rational step2 = 1;
        for (int i = 1; i <= m; ++i) {
            Rational p = verifier_probability(verifier, y.substr(0, static_cast<std::size_t>(i - 1)));
            step2 *= (y[static_cast<std::size_t>(i - 1)] == '1') ? p : (1 - p);
        }
        int exponent = (n_c - 1) - static_cast<int>(yv);
        Rational mass = step2 * rational_pow(pow2_rational(-out.q), exponent);
        out.prob[y] = mass;
        total += mass;

        auto cls = classify(mach, y);
        if (cls.correct)
            out.mass_a += mass;
        else if (cls.strongly_incorrect)
            out.mass_c += mass;
        else
            out.mass_b += mass;
        if (mach.final_accept.at(y)) out.accept += mass;
    }
    require(total <= 1, "voting masses exceed 1");
    out.prob_hash = 1 - total;
    out.accept += out.prob_hash / 2;
    out.delta = out.mass_a - out.mass_b - out.mass_c;
    return out;
}

struct EmpiricalOutcome {
    std::map<std::string, double> freq;
    double freq_hash = 0.0;
    double freq_a = 0.0, freq_b = 0.0, freq_c = 0.0;
    double accept = 0.0;
    long long trials = 0;
};

/// Literal simulation of the voting procedure with a seeded generator.
/// Trials run in fixed-size shards with per-shard seeds and a deterministic
/// merge; probabilities are used in double precision.
inline EmpiricalOutcome simulate_voting(const QueryMachine& mach, const VerifierModel& verifier, int n_c,
                                        long long trials, std::uint64_t seed, int jobs = 1) {
    validate_machine(mach);
    require(trials >= 1, "need at least one trial");
    const int m = mach.m;
    require(n_c - 1 >= static_cast<int>((std::int64_t(1) << m) - 1), "invalid survival exponent");
    const int q = (verifier.proof_qubits + 2) * m;
    const double survive = std::pow(0.5, q);

    // Pre-resolve probabilities and classes.
    std::map<std::string, double> pd;
    for (int i = 1; i <= m; ++i)
        for (std::uint64_t p = 0; p < (std::uint64_t(1) << (i - 1)); ++p) {
            std::string key = bits_to_string(p, i - 1);
            pd[key] = to_double(verifier_probability(verifier, key));
        }
    std::map<std::string, int> cls;  // 0 = A, 1 = B, 2 = C
    for (std::uint64_t yv = 0; yv < (std::uint64_t(1) << m); ++yv) {
        std::string y = bits_to_string(yv, m);
        auto c = classify(mach, y);
        cls[y] = c.correct ? 0 : (c.strongly_incorrect ? 2 : 1);
    }

    const long long shard_size = 1 << 16;
    const long long n_shards = (trials + shard_size - 1) / shard_size;
    struct Tally {
        std::map<std::string, long long> count;
        long long hash = 0, accepts = 0;
    };
    std::vector<Tally> tallies(static_cast<std::size_t>(n_shards));
    parallel_for(static_cast<std::size_t>(n_shards), jobs, [&](std::size_t sh) {
        std::mt19937_64 rng(mix_seed(seed, sh));
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        long long lo = static_cast<long long>(sh) * shard_size;
        long long n = std::min(shard_size, trials - lo);
        auto& t = tallies[sh];
        for (long long it = 0; it < n; ++it) {
            std::string y;
            for (int i = 1; i <= m; ++i) y += (unif(rng) < pd.at(y)) ? '1' : '0';
            std::int64_t value = static_cast<std::int64_t>(string_to_bits(y));
            bool abort = false;
            for (int i = 1; i <= n_c - 1 && !abort; ++i) {
                if (value < i && unif(rng) >= survive) abort = true;
            }
            bool acc;
            if (abort) {
                ++t.hash;
                acc = unif(rng) < 0.5;
            } else {
                ++t.count[y];
                acc = mach.final_accept.at(y);
            }
            if (acc) ++t.accepts;
        }
    });
    EmpiricalOutcome out;
    out.trials = trials;
    long long accepts = 0, hash = 0;
    std::map<std::string, long long> counts;
    for (const auto& t : tallies) {
        accepts += t.accepts;
        hash += t.hash;
        for (const auto& [y, c] : t.count) counts[y] += c;
    }
    double n = static_cast<double>(trials);
    out.freq_hash = static_cast<double>(hash) / n;
    out.accept = static_cast<double>(accepts) / n;
    for (const auto& [y, c] : counts) {
        double f = static_cast<double>(c) / n;
        out.freq[y] = f;
        int k = cls[y];
        if (k == 0)
            out.freq_a += f;
        else if (k == 1)
            out.freq_b += f;
        else
            out.freq_c += f;
    }
    return out;
}

/// Closed-form lower bound on Delta for a verifier honoring the
/// completeness/soundness model:
///   (2^-q)^(n_c-1) * 2^-(M m) * [1 - 2^-m - m 2^-p] - 2^m 2^-p.
inline Rational delta_lower_bound_exact(int M, int m, int p_amp, int n_c) {
    require(M >= 1 && m >= 1 && p_amp >= 1 && n_c >= 1, "parameters must be >= 1");
    const int q = (M + 2) * m;
    Rational pref = rational_pow(pow2_rational(-q), n_c - 1) * pow2_rational(-M * m);
    Rational bracket = 1 - pow2_rational(-m) - Rational(m) * pow2_rational(-p_amp);
    return pref * bracket - pow2_rational(m) * pow2_rational(-p_amp);
}

inline double delta_lower_bound(int M, int m, int p_amp, int n_c) {
    return to_double(delta_lower_bound_exact(M, m, p_amp, n_c));
}

/// The sharper per-run bound on Delta' = Pr[A] - Pr[B]:
///   (2^-q)^(n_c-1) * 2^-(M m) * [1 - 2^-m - m/(2^p - 1)].
inline Rational delta_prime_bound_exact(int M, int m, int p_amp, int n_c) {
    using boost::multiprecision::cpp_int;
    const int q = (M + 2) * m;
    Rational pref = rational_pow(pow2_rational(-q), n_c - 1) * pow2_rational(-M * m);
    Rational denom = Rational((cpp_int(1) << p_amp) - 1, 1);
    Rational bracket = 1 - pow2_rational(-m) - Rational(m) / denom;
    return pref * bracket;
}

/// Does the verifier honor the (c, s) = (1 - 2^-p, 2^-p) model against the
/// machine's query validities? Invalid queries are unconstrained.
inline bool verifier_honors_cs(const QueryMachine& mach, const VerifierModel& verifier) {
    Rational c = 1 - pow2_rational(-verifier.p_amp);
    Rational s = pow2_rational(-verifier.p_amp);
    Rational c_over_2m = c * pow2_rational(-verifier.proof_qubits);
    for (int i = 1; i <= mach.m; ++i) {
        for (std::uint64_t p = 0; p < (std::uint64_t(1) << (i - 1)); ++p) {
            std::string prefix = bits_to_string(p, i - 1);
            Rational prob = verifier_probability(verifier, prefix);
            auto v = query_validity(mach, prefix);
            if (v == QueryValidity::valid_yes && prob < c_over_2m) return false;
            if (v == QueryValidity::valid_no && prob > s) return false;
        }
    }
    return true;
}

namespace detail_vote {

/// Divergence probability of y: the product over invalid-query positions of
/// the probability of answering as y did; bounded variant stops at
/// position k.
inline Rational divergence_probability(const QueryMachine& mach, const VerifierModel& verifier,
                                       const std::string& y, int upto = -1) {
    Rational p = 1;
    int m = mach.m;
    int limit = upto < 0 ? m : upto;
    for (int i = 1; i <= limit; ++i) {
        std::string prefix = y.substr(0, static_cast<std::size_t>(i - 1));
        if (query_validity(mach, prefix) != QueryValidity::invalid) continue;
        Rational pi = verifier_probability(verifier, prefix);
        p *= (y[static_cast<std::size_t>(i - 1)] == '1') ? pi : (1 - pi);
    }
    return p;
}

}  // namespace detail_vote

struct GammaIteration {
    std::string y_star;
    Rational q_tilde = 1;
    Rational zeta = 0;
    Rational per_iter_bound = 0;
    bool zeta_ok = false;
};

struct GammaReport {
    std::vector<GammaIteration> iterations;
    Rational delta_prime = 0;  // Pr[A] - Pr[B]
    Rational zeta_sum = 0;
    bool partition_ok = false;
    bool recurrence_ok = false;
};

/// Exact replay of the iterative partition argument behind the Delta'
/// bound: pick correct strings by maximal (bounded) divergence probability,
/// pair each with the incorrect strings between consecutive picks, and
/// check every increment zeta_i against its closed-form bound.
inline GammaReport gamma_recurrence_report(const QueryMachine& mach, const VerifierModel& verifier,
                                           const VotingOutcome& outcome) {
    GammaReport rep;
    const int m = mach.m;
    const int M = verifier.proof_qubits;
    std::vector<std::string> a_set, b_set;
    for (std::uint64_t yv = 0; yv < (std::uint64_t(1) << m); ++yv) {
        std::string y = bits_to_string(yv, m);
        auto c = classify(mach, y);
        if (c.correct)
            a_set.push_back(y);
        else if (!c.strongly_incorrect)
            b_set.push_back(y);
    }
    rep.delta_prime = outcome.mass_a - outcome.mass_b;

    Rational pref = rational_pow(pow2_rational(-outcome.q), outcome.n_c - 1) * pow2_rational(-M * m);
    using boost::multiprecision::cpp_int;
    Rational bracket =
        1 - pow2_rational(-m) - Rational(m) / Rational((cpp_int(1) << verifier.p_amp) - 1, 1);

    std::set<std::string> b_covered;
    std::string prev;
    for (std::size_t iter = 0; iter < a_set.size(); ++iter) {
        // Candidates: all correct strings above the previous pick.
        std::vector<std::string> candidates;
        for (const auto& y : a_set)
            if (prev.empty() || string_to_bits(y) > string_to_bits(prev)) candidates.push_back(y);
        if (candidates.empty()) break;

        GammaIteration it;
        if (prev.empty()) {
            // Largest divergence probability, ties to the lexicographically largest.
            Rational best = -1;
            for (const auto& y : candidates) {
                Rational p = detail_vote::divergence_probability(mach, verifier, y);
                if (p > best || (p == best && string_to_bits(y) > string_to_bits(it.y_star))) {
                    best = p;
                    it.y_star = y;
                }
            }
            it.q_tilde = 1;
        } else {
            // Partition candidates by the first disagreement with prev; rank
            // the classes by bounded divergence probability.
            std::map<int, std::vector<std::string>> s_k;
            for (const auto& y : candidates) {
                for (int k = 1; k <= m; ++k) {
                    if (y[static_cast<std::size_t>(k - 1)] != prev[static_cast<std::size_t>(k - 1)]) {
                        s_k[k].push_back(y);
                        break;
                    }
                }
            }
            int best_k = 0;
            Rational best_q = -1;
            for (const auto& [k, members] : s_k) {
                Rational qk = detail_vote::divergence_probability(mach, verifier, members.front(), k);
                if (qk > best_q) {
                    best_q = qk;
                    best_k = k;
                }
            }
            it.q_tilde = best_q;
            Rational best_p = -1;
            for (const auto& y : s_k[best_k]) {
                Rational p = detail_vote::divergence_probability(mach, verifier, y);
                if (p > best_p || (p == best_p && string_to_bits(y) > string_to_bits(it.y_star))) {
                    best_p = p;
                    it.y_star = y;
                }
            }
        }

        // zeta_i = Pr[Y = y*_i] - Pr[Y in B_i], with B_i the incorrect strings
        // strictly between the previous pick and this one.
        it.zeta = outcome.prob.at(it.y_star);
        for (const auto& y : b_set) {
            std::uint64_t v = string_to_bits(y);
            bool above_prev = prev.empty() || v > string_to_bits(prev);
            if (above_prev && v < string_to_bits(it.y_star)) {
                it.zeta -= outcome.prob.at(y);
                b_covered.insert(y);
            }
        }
        it.per_iter_bound = pref * it.q_tilde * bracket;
        it.zeta_ok = it.zeta >= it.per_iter_bound;
        rep.zeta_sum += it.zeta;
        rep.iterations.push_back(it);
        prev = rep.iterations.back().y_star;
    }
    rep.partition_ok = (b_covered.size() == b_set.size());
    rep.recurrence_ok = true;
    for (const auto& it : rep.iterations) rep.recurrence_ok = rep.recurrence_ok && it.zeta_ok;
    return rep;
}

struct DeltaReport {
    VotingOutcome outcome;
    bool delta_positive = false;        // (i)
    bool honors_cs = false;
    bool bound_inconclusive = false;    // closed-form bound <= 0
    bool delta_ge_bound = false;        // (ii), when applicable
    bool delta_prime_ge_bound = false;  // (iii)
    bool c_mass_bounded = false;        // (iv): Pr[C] <= 2^m 2^-p
    GammaReport gamma;
    bool accept_identity_applicable = false;
    bool accept_identity_ok = false;    // accept == (1 +- Delta)/2
    bool pass = false;
};

/// Runs the full exact-analysis check list for one machine/verifier pair.
inline DeltaReport verify_delta_positive(const QueryMachine& mach, const VerifierModel& verifier, int n_c) {
    DeltaReport rep;
    rep.outcome = exact_voting_distribution(mach, verifier, n_c);
    rep.delta_positive = rep.outcome.delta > 0;
    rep.honors_cs = verifier_honors_cs(mach, verifier);

    Rational bound = delta_lower_bound_exact(verifier.proof_qubits, mach.m, verifier.p_amp, n_c);
    rep.bound_inconclusive = bound <= 0;
    rep.delta_ge_bound = !rep.honors_cs || rep.bound_inconclusive || rep.outcome.delta >= bound;

    Rational bound_prime = delta_prime_bound_exact(verifier.proof_qubits, mach.m, verifier.p_amp, n_c);
    Rational delta_prime = rep.outcome.mass_a - rep.outcome.mass_b;
    rep.delta_prime_ge_bound = !rep.honors_cs || delta_prime >= bound_prime;

    rep.c_mass_bounded =
        !rep.honors_cs || rep.outcome.mass_c <= pow2_rational(mach.m) * pow2_rational(-verifier.p_amp);

    if (rep.honors_cs) rep.gamma = gamma_recurrence_report(mach, verifier, rep.outcome);

    // Accept-probability identity, when the final map is exactly the
    // indicator (or the complement) of the correct set.
    bool final_is_a = true, final_is_not_a = true;
    for (std::uint64_t yv = 0; yv < (std::uint64_t(1) << mach.m); ++yv) {
        std::string y = bits_to_string(yv, mach.m);
        bool correct = classify(mach, y).correct;
        bool acc = mach.final_accept.at(y);
        final_is_a = final_is_a && (acc == correct);
        final_is_not_a = final_is_not_a && (acc == !correct);
    }
    rep.accept_identity_applicable = final_is_a || final_is_not_a;
    if (final_is_a)
        rep.accept_identity_ok = rep.outcome.accept == (1 + rep.outcome.delta) / 2;
    else if (final_is_not_a)
        rep.accept_identity_ok = rep.outcome.accept == (1 - rep.outcome.delta) / 2;

    rep.pass = rep.delta_positive && rep.delta_ge_bound && rep.delta_prime_ge_bound && rep.c_mass_bounded &&
               (!rep.honors_cs || (rep.gamma.partition_ok && rep.gamma.recurrence_ok)) &&
               (!rep.accept_identity_applicable || rep.accept_identity_ok);
    return rep;
}

/// Verifier model derived from the machine itself: valid YES nodes get the
/// completeness floor c/2^M, valid NO nodes the soundness ceiling, invalid
/// nodes an explicit caller-chosen probability.
inline VerifierModel honest_verifier(const QueryMachine& mach, int M, int p_amp,
                                     const Rational& invalid_p = Rational(1, 2)) {
    VerifierModel v;
    v.mode = VerifierModel::Mode::abstract_probabilities;
    v.proof_qubits = M;
    v.p_amp = p_amp;
    Rational c_over = (1 - pow2_rational(-p_amp)) * pow2_rational(-M);
    Rational s = pow2_rational(-p_amp);
    for (int i = 1; i <= mach.m; ++i)
        for (std::uint64_t p = 0; p < (std::uint64_t(1) << (i - 1)); ++p) {
            std::string prefix = bits_to_string(p, i - 1);
            switch (query_validity(mach, prefix)) {
                case QueryValidity::valid_yes: v.probabilities[prefix] = c_over; break;
                case QueryValidity::valid_no: v.probabilities[prefix] = s; break;
                case QueryValidity::invalid: v.probabilities[prefix] = invalid_p; break;
            }
        }
    return v;
}

}  // namespace hamgadget
