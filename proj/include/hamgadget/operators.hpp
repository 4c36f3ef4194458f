#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hamgadget/common.hpp"
#include "hamgadget/layout.hpp"

namespace hamgadget {

/// Entrywise Hermiticity tolerance enforced when terms are constructed.
constexpr double kTermHermTol = 1e-12;
/// Spectral-scale Hermiticity tolerance for realized sums.
constexpr double kSumHermTol = 1e-10;
/// State normalization tolerance.
constexpr double kNormTol = 1e-10;
/// Dense realization is refused above this dimension (14 qubits).
constexpr std::int64_t kDenseRealizeCutoff = std::int64_t(1) << 14;

/// One summand of a Hamiltonian: `coefficient * block` acting on the sites in
/// `support` (sorted global indices, first support site most significant in
/// the block's index), tensored with identity elsewhere. Empty support means
/// a scalar multiple of the identity.
struct LocalTerm {
    std::vector<int> support;
    Matrix block;
    double coefficient = 1.0;
    std::string tag;  // component tag (e.g. "in", "prop", "stab", "out", "query")

    LocalTerm() = default;
    LocalTerm(std::vector<int> sup, Matrix blk, double coeff = 1.0, std::string t = "")
        : support(std::move(sup)), block(std::move(blk)), coefficient(coeff), tag(std::move(t)) {}
};

inline double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline void validate_term(const LocalTerm& t, const RegisterLayout& layout) {
    require(std::isfinite(t.coefficient), "term coefficient not finite");
    require(t.block.rows() == t.block.cols(), "term block not square");
    std::int64_t want = 1;
    int prev = -1;
    for (int s : t.support) {
        require(s > prev, "term support not sorted/distinct");
        require(s >= 0 && s < layout.total_sites(), "term support index out of range");
        want *= layout.site_dim(s);
        prev = s;
    }
    require(t.block.rows() == want,
            "term block dimension does not match support (expected " + std::to_string(want) + ")");
    require(max_abs(Matrix(t.block - t.block.adjoint())) <= kTermHermTol,
            "term block not Hermitian within 1e-12");
}

/// Spectral norm of a single term, |coefficient| * ||block||.
inline double term_norm(const LocalTerm& t) {
    if (t.block.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(t.block, Eigen::EigenvaluesOnly);
    double m = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        m = std::max(m, std::abs(es.eigenvalues()(i)));
    return std::abs(t.coefficient) * m;
}

/// Weighted sum of local Hermitian terms on a register layout.
struct Hamiltonian {
    RegisterLayout layout;
    std::vector<LocalTerm> terms;

    Hamiltonian() = default;
    explicit Hamiltonian(RegisterLayout lay) : layout(std::move(lay)) {}

    void add(LocalTerm t) {
        validate_term(t, layout);
        if (t.coefficient == 0.0 || (t.block.size() > 0 && max_abs(t.block) == 0.0)) return;
        terms.push_back(std::move(t));
    }

    void add(std::vector<int> support, Matrix block, double coeff = 1.0, std::string tag = "") {
        add(LocalTerm(std::move(support), std::move(block), coeff, std::move(tag)));
    }

    int locality() const {
        std::size_t k = 0;
        for (const auto& t : terms) k = std::max(k, t.support.size());
        return static_cast<int>(k);
    }

    /// Triangle-inequality upper bound on the spectral norm.
    double norm_upper_bound() const {
        double s = 0.0;
        for (const auto& t : terms) s += term_norm(t);
        return s;
    }

    /// Sub-Hamiltonian of all terms carrying `tag`.
    Hamiltonian component(const std::string& tag) const {
        Hamiltonian h(layout);
        for (const auto& t : terms)
            if (t.tag == tag) h.terms.push_back(t);
        return h;
    }

    Hamiltonian scaled(double factor) const {
        Hamiltonian h(*this);
        for (auto& t : h.terms) t.coefficient *= factor;
        return h;
    }

    Hamiltonian operator+(const Hamiltonian& o) const {
        require(layout == o.layout, "layout mismatch in Hamiltonian sum");
        Hamiltonian h(*this);
        h.terms.insert(h.terms.end(), o.terms.begin(), o.terms.end());
        return h;
    }
};

/// Observables share the Hamiltonian representation.
using Observable = Hamiltonian;

namespace detail {

/// Offsets of all support-digit combinations inside the full index space,
/// in block index order (first support site most significant).
inline std::vector<std::int64_t> support_offsets(const LocalTerm& t, const RegisterLayout& layout) {
    std::int64_t ds = t.block.rows();
    std::vector<std::int64_t> off(static_cast<std::size_t>(ds), 0);
    std::int64_t rep = ds;
    for (int s : t.support) {
        int d = layout.site_dim(s);
        std::int64_t stride = layout.stride(s);
        rep /= d;
        for (std::int64_t b = 0; b < ds; ++b)
            off[static_cast<std::size_t>(b)] += ((b / rep) % d) * stride;
    }
    return off;
}

/// Sites not in the support, with their dims/strides; used to enumerate the
/// identity factor without touching support digits.
struct RestIter {
    std::vector<int> dims;
    std::vector<std::int64_t> strides;
    std::vector<int> digits;
    std::int64_t count = 1;

    RestIter(const LocalTerm& t, const RegisterLayout& layout) {
        std::size_t si = 0;
        for (int s = 0; s < layout.total_sites(); ++s) {
            if (si < t.support.size() && t.support[si] == s) {
                ++si;
                continue;
            }
            dims.push_back(layout.site_dim(s));
            strides.push_back(layout.stride(s));
            count *= layout.site_dim(s);
        }
        digits.assign(dims.size(), 0);
    }

    // Odometer over rest digits; returns false after the last configuration.
    bool next(std::int64_t& base) {
        for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
            base += strides[static_cast<std::size_t>(i)];
            if (++digits[static_cast<std::size_t>(i)] < dims[static_cast<std::size_t>(i)]) return true;
            base -= strides[static_cast<std::size_t>(i)] * dims[static_cast<std::size_t>(i)];
            digits[static_cast<std::size_t>(i)] = 0;
        }
        return false;
    }
};

inline bool block_is_diagonal(const Matrix& b) {
    for (Eigen::Index i = 0; i < b.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j)
            if (i != j && b(i, j) != cxd(0.0, 0.0)) return false;
    return true;
}

}  // namespace detail

/// out += coefficient * (block (x) I) * in, matrix-free.
inline void apply_term(const LocalTerm& t, const RegisterLayout& layout, const Vector& in, Vector& out) {
    const std::int64_t ds = t.block.rows();
    if (t.support.empty()) {
        out += t.coefficient * t.block(0, 0).real() * in;
        return;
    }
    const auto off = detail::support_offsets(t, layout);
    detail::RestIter rest(t, layout);
    const cxd c(t.coefficient, 0.0);
    std::int64_t base = 0;
    if (detail::block_is_diagonal(t.block)) {
        do {
            for (std::int64_t s = 0; s < ds; ++s) {
                const cxd d = t.block(s, s);
                if (d != cxd(0.0, 0.0)) out(base + off[static_cast<std::size_t>(s)]) += c * d * in(base + off[static_cast<std::size_t>(s)]);
            }
        } while (rest.next(base));
        return;
    }
    Vector gathered(ds), mixed(ds);
    do {
        for (std::int64_t s = 0; s < ds; ++s) gathered(s) = in(base + off[static_cast<std::size_t>(s)]);
        mixed.noalias() = t.block * gathered;
        for (std::int64_t s = 0; s < ds; ++s) out(base + off[static_cast<std::size_t>(s)]) += c * mixed(s);
    } while (rest.next(base));
}

inline Vector apply_op(const Hamiltonian& h, const Vector& in) {
    require(in.size() == h.layout.dimension(), "vector dimension mismatch");
    Vector out = Vector::Zero(in.size());
    for (const auto& t : h.terms) apply_term(t, h.layout, in, out);
    return out;
}

/// Full matrix of a single embedded term (coefficient included).
inline Matrix embed(const LocalTerm& t, const RegisterLayout& layout) {
    validate_term(t, layout);
    const std::int64_t dim = layout.dimension();
    require(dim <= kDenseRealizeCutoff, "dimension overflow for dense backend");
    Matrix m = Matrix::Zero(dim, dim);
    const std::int64_t ds = std::max<std::int64_t>(t.block.rows(), 1);
    if (t.support.empty()) {
        m.diagonal().array() += t.coefficient * t.block(0, 0).real();
        return m;
    }
    const auto off = detail::support_offsets(t, layout);
    detail::RestIter rest(t, layout);
    std::int64_t base = 0;
    do {
        for (std::int64_t r = 0; r < ds; ++r)
            for (std::int64_t c = 0; c < ds; ++c)
                m(base + off[static_cast<std::size_t>(r)], base + off[static_cast<std::size_t>(c)]) +=
                    t.coefficient * t.block(r, c);
    } while (rest.next(base));
    return m;
}

/// Full matrix realization; Hermitian within 1e-10 (checked).
inline Matrix realize(const Hamiltonian& h, std::int64_t dense_cutoff = kDenseRealizeCutoff) {
    const std::int64_t dim = h.layout.dimension();
    require(dim <= dense_cutoff, "dimension overflow for dense backend (dim " + std::to_string(dim) + ")");
    Matrix m = Matrix::Zero(dim, dim);
    for (const auto& t : h.terms) {
        validate_term(t, h.layout);
        if (t.support.empty()) {
            m.diagonal().array() += t.coefficient * t.block(0, 0).real();
            continue;
        }
        const std::int64_t ds = t.block.rows();
        const auto off = detail::support_offsets(t, h.layout);
        detail::RestIter rest(t, h.layout);
        std::int64_t base = 0;
        do {
            for (std::int64_t r = 0; r < ds; ++r)
                for (std::int64_t c = 0; c < ds; ++c)
                    m(base + off[static_cast<std::size_t>(r)], base + off[static_cast<std::size_t>(c)]) +=
                        t.coefficient * t.block(r, c);
        } while (rest.next(base));
    }
    double scale = std::max(1.0, max_abs(m));
    require(max_abs(Matrix(m - m.adjoint())) <= kSumHermTol * scale, "realized Hamiltonian not Hermitian");
    return m;
}

/// Unit-norm state on a layout.
struct StateVector {
    RegisterLayout layout;
    Vector amplitudes;

    StateVector() = default;
    StateVector(RegisterLayout lay, Vector amps, bool check = true)
        : layout(std::move(lay)), amplitudes(std::move(amps)) {
        require(amplitudes.size() == layout.dimension(), "state dimension mismatch");
        if (check)
            require(std::abs(amplitudes.norm() - 1.0) <= kNormTol, "state not normalized within 1e-10");
    }

    static StateVector basis(const RegisterLayout& lay, std::int64_t index) {
        Vector v = Vector::Zero(lay.dimension());
        require(index >= 0 && index < lay.dimension(), "basis index out of range");
        v(index) = 1.0;
        return StateVector(lay, std::move(v));
    }

    static StateVector random(const RegisterLayout& lay, std::uint64_t seed) {
        return StateVector(lay, random_unit_vector(lay.dimension(), seed));
    }
};

inline cxd inner(const StateVector& v, const StateVector& w) {
    require(v.layout == w.layout, "layout mismatch");
    return v.amplitudes.dot(w.amplitudes);
}

/// Re <psi|O|psi>; the imaginary part must vanish to 1e-10 relative to the
/// operator scale.
inline double expectation(const StateVector& state, const Observable& obs) {
    require(state.layout == obs.layout, "layout mismatch between state and observable");
    Vector ov = apply_op(obs, state.amplitudes);
    cxd val = state.amplitudes.dot(ov);
    double scale = std::max(1.0, obs.norm_upper_bound());
    require(std::abs(val.imag()) <= 1e-10 * scale, "expectation has non-real part");
    return val.real();
}

/// Trace distance between the pure states |v><v| and |w><w|:
/// 2*sqrt(1 - |<v|w>|^2).
inline double trace_distance_pure(const StateVector& v, const StateVector& w) {
    require(v.layout == w.layout, "layout mismatch");
    double ov = std::norm(inner(v, w));
    return 2.0 * std::sqrt(std::max(0.0, 1.0 - ov));
}

/// True iff the term's block has no matrix element between different digits
/// of `site` (exact zero test).
inline bool term_is_diagonal_on_site(const LocalTerm& t, const RegisterLayout& layout, int site) {
    auto it = std::find(t.support.begin(), t.support.end(), site);
    if (it == t.support.end()) return true;
    std::size_t pos = static_cast<std::size_t>(it - t.support.begin());
    std::int64_t rep = t.block.rows();
    for (std::size_t j = 0; j <= pos; ++j) rep /= layout.site_dim(t.support[j]);
    int d = layout.site_dim(t.support[pos]);
    for (Eigen::Index r = 0; r < t.block.rows(); ++r)
        for (Eigen::Index c = 0; c < t.block.cols(); ++c) {
            int dr = static_cast<int>((r / rep) % d);
            int dc = static_cast<int>((c / rep) % d);
            if (dr != dc && t.block(r, c) != cxd(0.0, 0.0)) return false;
        }
    return true;
}

/// True iff no term couples different digits of `site`. Such a site carries
/// a conserved quantity and splits the spectrum into sectors.
inline bool is_diagonal_on_site(const Hamiltonian& h, int site) {
    for (const auto& t : h.terms)
        if (!term_is_diagonal_on_site(t, h.layout, site)) return false;
    return true;
}

/// Result of fixing some sites to basis digits: a Hamiltonian on the kept
/// sites plus the bookkeeping to lift vectors back to the full space.
struct SectorRestriction {
    Hamiltonian h;
    std::vector<int> kept_sites;       // old site indices, ascending
    std::map<int, int> fixed;          // old site -> digit
    RegisterLayout parent;

    Vector lift(const Vector& v) const {
        Vector out = Vector::Zero(parent.dimension());
        std::int64_t base = 0;
        for (const auto& [s, d] : fixed) base += parent.stride(s) * d;
        const std::int64_t n = v.size();
        for (std::int64_t i = 0; i < n; ++i) {
            std::int64_t rem = i, idx = base;
            for (std::size_t j = 0; j < kept_sites.size(); ++j) {
                idx += (rem / h.layout.stride(static_cast<int>(j))) % h.layout.site_dim(static_cast<int>(j)) *
                       parent.stride(kept_sites[j]);
                rem %= h.layout.stride(static_cast<int>(j));
            }
            out(idx) = v(i);
        }
        return out;
    }
};

/// Fixes `assignment` (site -> digit) and partially evaluates every term.
/// All assigned sites must be diagonal in every term touching them; terms
/// fully inside the assignment become scalar terms.
inline SectorRestriction restrict_assignment(const Hamiltonian& h, const std::map<int, int>& assignment) {
    SectorRestriction out;
    out.parent = h.layout;
    out.fixed = assignment;
    std::map<int, int> new_index;  // old site -> new site
    std::vector<Register> regs;
    for (int s = 0; s < h.layout.total_sites(); ++s) {
        if (assignment.count(s)) {
            require(assignment.at(s) >= 0 && assignment.at(s) < h.layout.site_dim(s),
                    "sector digit out of range");
            continue;
        }
        new_index[s] = static_cast<int>(out.kept_sites.size());
        out.kept_sites.push_back(s);
        regs.push_back({"s" + std::to_string(s), 1, h.layout.site_dim(s)});
    }
    require(!regs.empty(), "sector restriction removes all sites");
    out.h = Hamiltonian(RegisterLayout(std::move(regs)));

    for (const auto& t : h.terms) {
        std::vector<int> fixed_pos, free_pos;
        for (std::size_t j = 0; j < t.support.size(); ++j)
            (assignment.count(t.support[j]) ? fixed_pos : free_pos).push_back(static_cast<int>(j));
        if (fixed_pos.empty()) {
            std::vector<int> sup;
            for (int s : t.support) sup.push_back(new_index.at(s));
            out.h.add(sup, t.block, t.coefficient, t.tag);
            continue;
        }
        // Row-major digit extraction for the sub-block with fixed digits pinned.
        std::vector<std::int64_t> reps(t.support.size());
        std::int64_t rep = t.block.rows();
        for (std::size_t j = 0; j < t.support.size(); ++j) {
            rep /= h.layout.site_dim(t.support[j]);
            reps[j] = rep;
        }
        std::int64_t sub_dim = 1;
        for (int j : free_pos) sub_dim *= h.layout.site_dim(t.support[static_cast<std::size_t>(j)]);
        auto expand = [&](std::int64_t sub) {
            std::int64_t full = 0, rem = sub;
            for (std::size_t jj = 0; jj < free_pos.size(); ++jj) {
                int j = free_pos[jj];
                std::int64_t block_rep = 1;
                for (std::size_t kk = jj + 1; kk < free_pos.size(); ++kk)
                    block_rep *= h.layout.site_dim(t.support[static_cast<std::size_t>(free_pos[kk])]);
                full += (rem / block_rep) * reps[static_cast<std::size_t>(j)];
                rem %= block_rep;
            }
            for (int j : fixed_pos)
                full += std::int64_t(assignment.at(t.support[static_cast<std::size_t>(j)])) *
                        reps[static_cast<std::size_t>(j)];
            return full;
        };
        // Dropping the cross-sector elements is only valid when they vanish.
        for (int j : fixed_pos) {
            int s = t.support[static_cast<std::size_t>(j)];
            require(term_is_diagonal_on_site(t, h.layout, s),
                    "sector restriction on a non-diagonal site " + std::to_string(s));
        }
        Matrix sub(sub_dim, sub_dim);
        for (std::int64_t r = 0; r < sub_dim; ++r)
            for (std::int64_t c = 0; c < sub_dim; ++c) sub(r, c) = t.block(expand(r), expand(c));
        if (free_pos.empty()) {
            out.h.add({}, sub, t.coefficient, t.tag);
        } else {
            std::vector<int> sup;
            for (int j : free_pos) sup.push_back(new_index.at(t.support[static_cast<std::size_t>(j)]));
            out.h.add(sup, sub, t.coefficient, t.tag);
        }
    }
    return out;
}

/// Random Hermitian matrix, optionally rescaled to a target spectral norm.
inline Matrix random_hermitian(Eigen::Index dim, std::uint64_t seed, double target_norm = -1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = cxd(g(rng), g(rng));
    m = (m + Matrix(m.adjoint())) / 2.0;
    if (target_norm > 0.0) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
        double n = std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(dim - 1)));
        if (n > 0) m *= target_norm / n;
    }
    return m;
}

}  // namespace hamgadget
