#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "hamgadget/common.hpp"
#include "hamgadget/operators.hpp"

namespace hamgadget {

struct SpectralOptions {
    double tol = 1e-10;                  // residual tolerance, relative to max(1, ||H||)
    std::uint64_t seed = kDefaultSeed;
    std::int64_t dense_threshold = 1500; // full dense decomposition at or below this dimension
    double degeneracy_tol_rel = 1e-9;    // relative to max(1, ||H||)
    int max_split_sites = 8;
    int lanczos_max_basis = 96;
    int lanczos_max_restarts = 600;
    int jobs = 1;
};

struct SpectralReport {
    std::vector<double> eigenvalues;      // ascending; all of them on the dense path
    double ground_energy = 0.0;
    double gap = std::numeric_limits<double>::quiet_NaN();
    std::vector<StateVector> ground_basis;
    std::vector<StateVector> eigenvectors;  // the k reported pairs
    std::vector<double> residuals;          // for the k reported pairs
    double tolerance = 0.0;                 // absolute residual tolerance used
    double degeneracy_tol = 0.0;            // absolute
    std::string backend;
    std::uint64_t seed = 0;
    bool full_spectrum = false;
};

/// Dense Hermitian eigendecomposition (LAPACK zheevd). On return `m` holds
/// the eigenvectors column-wise, eigenvalues ascending.
inline void dense_eig_inplace(Matrix& m, std::vector<double>& evals, bool vectors = true) {
    const auto n = static_cast<lapack_int>(m.rows());
    evals.assign(static_cast<std::size_t>(n), 0.0);
    lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n, m.data(), n, evals.data());
    require(info == 0, "dense eigensolver failed (zheevd info=" + std::to_string(info) + ")");
}

inline std::vector<double> dense_eigenvalues(Matrix m) {
    std::vector<double> evals;
    dense_eig_inplace(m, evals, false);
    return evals;
}

namespace detail {

using ApplyFn = std::function<void(const Vector&, Vector&)>;

struct LanczosOut {
    std::vector<double> evals;
    std::vector<Vector> vecs;
    int matvecs = 0;
};

inline void orthogonalize(Vector& w, const std::vector<Vector>& basis, int upto = -1) {
    int n = upto < 0 ? static_cast<int>(basis.size()) : upto;
    for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i < n; ++i) w -= basis[static_cast<std::size_t>(i)].dot(w) * basis[static_cast<std::size_t>(i)];
}

/// Thick-restart Lanczos with full reorthogonalization and locking of
/// converged extreme pairs. Finds the k smallest eigenpairs of a Hermitian
/// operator given only its action. Deterministic for a fixed seed.
///
/// Pairs are locked strictly from the bottom of the Ritz spectrum (never
/// past an unconverged value), and after k pairs are locked a confirmation
/// sweep from a fresh deflated start vector must show no Ritz value below
/// the current k-th eigenvalue before the solver returns.
inline LanczosOut lanczos_smallest(const ApplyFn& apply_fn, std::int64_t dim, int k, std::uint64_t seed,
                                   double tol_abs, int max_basis, int max_restarts) {
    LanczosOut out;
    k = static_cast<int>(std::min<std::int64_t>(k, dim));
    max_basis = static_cast<int>(std::min<std::int64_t>(std::max(max_basis, 2 * k + 10), dim));

    std::vector<Vector> locked;
    std::vector<double> locked_vals;
    std::vector<Vector> V;
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(max_basis + 1, max_basis + 1);
    int basis_size = 0;
    std::uint64_t draw = 0;

    auto fresh_vector = [&]() {
        for (int attempt = 0; attempt < 50; ++attempt) {
            Vector v = random_unit_vector(dim, mix_seed(seed, draw++));
            orthogonalize(v, locked);
            orthogonalize(v, V, basis_size);
            double n = v.norm();
            if (n > 1e-8) return Vector(v / n);
        }
        throw Error("eigensolver could not draw a vector outside the converged subspace");
    };

    auto fresh_restart = [&]() {
        V.clear();
        basis_size = 0;
        S.setZero();
        V.push_back(fresh_vector());
        basis_size = 1;
    };

    auto kth_locked = [&]() {
        std::vector<double> v = locked_vals;
        std::nth_element(v.begin(), v.begin() + (k - 1), v.end());
        return v[static_cast<std::size_t>(k - 1)];
    };

    V.push_back(fresh_vector());
    basis_size = 1;
    bool sweep_started = false;

    for (int cycle = 0; cycle < max_restarts; ++cycle) {
        if (static_cast<std::int64_t>(locked.size()) >= dim) break;

        // Extend the basis to max_basis columns (or an invariant subspace).
        bool invariant = false;
        while (basis_size < max_basis) {
            int j = basis_size - 1;
            Vector w = Vector::Zero(dim);
            apply_fn(V[static_cast<std::size_t>(j)], w);
            ++out.matvecs;
            for (const auto& lv : locked) w -= lv.dot(w) * lv;
            std::vector<cxd> coeff(static_cast<std::size_t>(basis_size));
            for (int i = 0; i < basis_size; ++i) {
                coeff[static_cast<std::size_t>(i)] = V[static_cast<std::size_t>(i)].dot(w);
                w -= coeff[static_cast<std::size_t>(i)] * V[static_cast<std::size_t>(i)];
            }
            for (int i = 0; i < basis_size; ++i) {  // second pass
                cxd c2 = V[static_cast<std::size_t>(i)].dot(w);
                w -= c2 * V[static_cast<std::size_t>(i)];
                coeff[static_cast<std::size_t>(i)] += c2;
            }
            for (const auto& lv : locked) w -= lv.dot(w) * lv;
            for (int i = 0; i < basis_size; ++i) {
                S(i, j) = coeff[static_cast<std::size_t>(i)].real();
                S(j, i) = S(i, j);
            }
            double beta = w.norm();
            if (beta <= 1e-13 * std::max(1.0, std::abs(S(j, j)))) {
                invariant = true;
                break;
            }
            S(j + 1, j) = beta;
            S(j, j + 1) = beta;
            V.push_back(w / beta);
            ++basis_size;
        }

        int b = invariant ? basis_size : basis_size - 1;  // columns with complete Rayleigh data
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S.topLeftCorner(b, b));
        const auto& theta = es.eigenvalues();
        const auto& Y = es.eigenvectors();
        double beta_last = invariant ? 0.0 : S(b, b - 1);

        auto ritz_vector = [&](int i) {
            Vector u = Vector::Zero(dim);
            for (int r = 0; r < b; ++r) u += Y(r, i) * V[static_cast<std::size_t>(r)];
            return u;
        };

        // Lock converged Ritz pairs from the bottom; stop at the first
        // unconverged one so nothing below it can be skipped.
        std::vector<int> kept_idx;
        bool still_locking = true;
        for (int i = 0; i < b; ++i) {
            double res_est = std::abs(beta_last * Y(b - 1, i));
            if (still_locking && res_est <= tol_abs) {
                Vector u = ritz_vector(i);
                orthogonalize(u, locked);
                double n = u.norm();
                if (n > 1e-8) {
                    locked.push_back(u / n);
                    locked_vals.push_back(theta(i));
                }
            } else {
                still_locking = false;
                kept_idx.push_back(i);
            }
        }

        if (static_cast<int>(locked.size()) >= k) {
            if (!sweep_started) {
                sweep_started = true;
                fresh_restart();
                continue;
            }
            double probe = kept_idx.empty() ? std::numeric_limits<double>::infinity()
                                            : theta(kept_idx.front());
            if (probe >= kth_locked() - 10.0 * tol_abs) break;  // verified: nothing lower remains
        }

        if (invariant) {
            // beta = 0: every Ritz pair in this block is exact.
            for (int i : kept_idx) {
                Vector u = ritz_vector(i);
                orthogonalize(u, locked);
                double n = u.norm();
                if (n > 1e-8) {
                    locked.push_back(u / n);
                    locked_vals.push_back(theta(i));
                }
            }
            if (static_cast<std::int64_t>(locked.size()) >= dim) break;
            fresh_restart();
            continue;
        }

        // Thick restart: keep the smallest unconverged Ritz vectors plus the
        // residual direction.
        int keep = std::min<int>(static_cast<int>(kept_idx.size()), std::max(k + 8, 16));
        std::vector<double> kth;
        std::vector<Vector> ritz;
        for (int ii = 0; ii < keep; ++ii) {
            int i = kept_idx[static_cast<std::size_t>(ii)];
            Vector u = ritz_vector(i);
            for (const auto& lv : locked) u -= lv.dot(u) * lv;
            for (const auto& rv : ritz) u -= rv.dot(u) * rv;
            double n = u.norm();
            if (n <= 1e-10) continue;
            kth.push_back(theta(i));
            ritz.push_back(u / n);
        }
        Vector next = V.back();
        for (const auto& lv : locked) next -= lv.dot(next) * lv;
        for (const auto& rv : ritz) next -= rv.dot(next) * rv;
        double nn = next.norm();
        if (nn <= 1e-10 || ritz.empty()) {
            fresh_restart();
        } else {
            int kp = static_cast<int>(ritz.size());
            V.assign(ritz.begin(), ritz.end());
            V.push_back(next / nn);
            S.setZero();
            for (int i = 0; i < kp; ++i) S(i, i) = kth[static_cast<std::size_t>(i)];
            basis_size = kp + 1;
        }
    }

    require(static_cast<int>(locked.size()) >= k,
            "eigensolver did not converge: " + std::to_string(locked.size()) + "/" + std::to_string(k) +
                " pairs after restart cap");

    std::vector<int> order(locked.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int bb) {
        return locked_vals[static_cast<std::size_t>(a)] < locked_vals[static_cast<std::size_t>(bb)];
    });
    for (int i = 0; i < k; ++i) {
        out.evals.push_back(locked_vals[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]);
        out.vecs.push_back(locked[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]);
    }
    return out;
}

struct SectorPiece {
    double eval;
    Vector vec;  // full-space vector
};

}  // namespace detail

/// k smallest eigenpairs of a realized or matrix-free Hamiltonian.
///
/// Dimension at or below `dense_threshold` gets a full dense decomposition.
/// Larger problems are split along conserved computational-basis sites when
/// possible and handled per sector (dense or iterative with a fixed seed).
inline SpectralReport eigensolve_smallest(const Hamiltonian& h, int k, const SpectralOptions& opts = {}) {
    require(k >= 1, "k must be >= 1");
    const std::int64_t dim = h.layout.dimension();
    k = static_cast<int>(std::min<std::int64_t>(k, dim));
    const double scale = std::max(1.0, h.norm_upper_bound());
    const double tol_abs = opts.tol * scale;
    const double deg_abs = opts.degeneracy_tol_rel * scale;

    SpectralReport rep;
    rep.tolerance = tol_abs;
    rep.degeneracy_tol = deg_abs;
    rep.seed = opts.seed;

    if (dim <= opts.dense_threshold) {
        Matrix m = realize(h, std::max<std::int64_t>(opts.dense_threshold, 1));
        std::vector<double> evals;
        dense_eig_inplace(m, evals);
        rep.eigenvalues = evals;
        rep.full_spectrum = true;
        rep.backend = "dense";
        for (int i = 0; i < k; ++i) {
            rep.eigenvectors.emplace_back(h.layout, Vector(m.col(i)), false);
        }
    } else {
        // Sector split along conserved sites (diagonal in every term).
        std::vector<int> split_sites;
        std::int64_t sectors = 1;
        for (int s = 0; s < h.layout.total_sites() && static_cast<int>(split_sites.size()) < opts.max_split_sites; ++s) {
            if (static_cast<int>(split_sites.size()) >= h.layout.total_sites() - 1) break;
            if (!is_diagonal_on_site(h, s)) continue;
            if (sectors * h.layout.site_dim(s) > 256) break;
            split_sites.push_back(s);
            sectors *= h.layout.site_dim(s);
        }
        std::vector<detail::SectorPiece> pieces;
        if (split_sites.empty()) {
            auto apply_fn = [&](const Vector& in, Vector& out) {
                for (const auto& t : h.terms) apply_term(t, h.layout, in, out);
            };
            auto lz = detail::lanczos_smallest(apply_fn, dim, k, opts.seed, tol_abs, opts.lanczos_max_basis,
                                               opts.lanczos_max_restarts);
            for (std::size_t i = 0; i < lz.evals.size(); ++i)
                pieces.push_back({lz.evals[i], std::move(lz.vecs[i])});
            rep.backend = "lanczos";
        } else {
            std::vector<std::map<int, int>> assignments;
            std::map<int, int> cur;
            std::function<void(std::size_t)> rec = [&](std::size_t i) {
                if (i == split_sites.size()) {
                    assignments.push_back(cur);
                    return;
                }
                for (int d = 0; d < h.layout.site_dim(split_sites[i]); ++d) {
                    cur[split_sites[i]] = d;
                    rec(i + 1);
                }
                cur.erase(split_sites[i]);
            };
            rec(0);
            std::vector<std::vector<detail::SectorPiece>> per(assignments.size());
            parallel_for(assignments.size(), opts.jobs, [&](std::size_t ai) {
                auto sec = restrict_assignment(h, assignments[ai]);
                SpectralOptions sub = opts;
                sub.seed = mix_seed(opts.seed, static_cast<std::uint64_t>(ai) + 1);
                sub.max_split_sites = 0;  // no further splitting
                sub.jobs = 1;
                int kk = static_cast<int>(std::min<std::int64_t>(k, sec.h.layout.dimension()));
                auto sub_rep = eigensolve_smallest(sec.h, kk, sub);
                for (std::size_t i = 0; i < sub_rep.eigenvectors.size(); ++i)
                    per[ai].push_back({sub_rep.eigenvalues[i], sec.lift(sub_rep.eigenvectors[i].amplitudes)});
            });
            for (auto& v : per)
                for (auto& p : v) pieces.push_back(std::move(p));
            rep.backend = "sector(" + std::to_string(assignments.size()) + ")";
        }
        std::sort(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) { return a.eval < b.eval; });
        for (const auto& p : pieces) rep.eigenvalues.push_back(p.eval);
        for (int i = 0; i < k && i < static_cast<int>(pieces.size()); ++i)
            rep.eigenvectors.emplace_back(h.layout, pieces[static_cast<std::size_t>(i)].vec, false);
    }

    rep.ground_energy = rep.eigenvalues.front();
    for (const auto& ev : rep.eigenvectors) {
        Vector r = apply_op(h, ev.amplitudes) - (rep.eigenvalues[rep.residuals.size()] * ev.amplitudes);
        rep.residuals.push_back(r.norm());
        require(rep.residuals.back() <= std::max(tol_abs, 1e-12 * scale) * 50.0,
                "eigenpair residual exceeds tolerance");
    }
    for (std::size_t i = 0; i < rep.eigenvectors.size(); ++i) {
        if (rep.eigenvalues[i] <= rep.ground_energy + deg_abs)
            rep.ground_basis.push_back(rep.eigenvectors[i]);
    }
    // Gap with degeneracy handling. On partial spectra the merged list is
    // only guaranteed complete up to the k-th entry.
    std::size_t scan = rep.full_spectrum ? rep.eigenvalues.size()
                                         : std::min(rep.eigenvalues.size(), rep.eigenvectors.size());
    for (std::size_t i = 1; i < scan; ++i) {
        if (rep.eigenvalues[i] > rep.ground_energy + deg_abs) {
            rep.gap = rep.eigenvalues[i] - rep.ground_energy;
            break;
        }
    }
    if (std::isnan(rep.gap) && rep.full_spectrum) rep.gap = 0.0;  // fully degenerate
    return rep;
}

/// True iff the reported prefix is known to contain the whole ground space.
inline bool ground_space_complete(const SpectralReport& rep, std::int64_t dim) {
    if (static_cast<std::int64_t>(rep.eigenvectors.size()) >= dim) return true;
    return rep.ground_basis.size() < rep.eigenvectors.size();
}

/// eigensolve_smallest with k escalated until the full ground space is
/// captured (some reported eigenvalue exceeds lambda + degeneracy tol).
inline SpectralReport eigensolve_ground_space(const Hamiltonian& h, const SpectralOptions& opts = {}, int k0 = 4) {
    const std::int64_t dim = h.layout.dimension();
    int k = static_cast<int>(std::min<std::int64_t>(k0, dim));
    for (;;) {
        auto rep = eigensolve_smallest(h, k, opts);
        if (ground_space_complete(rep, dim)) return rep;
        require(k < dim, "ground space escalation exhausted");
        k = static_cast<int>(std::min<std::int64_t>(std::int64_t(k) * 4, dim));
    }
}

/// lambda2 - lambda1 where lambda2 is the smallest eigenvalue exceeding
/// lambda1 + degeneracy_tol; 0 for a degenerate ground space.
inline double spectral_gap(const Hamiltonian& h, double degeneracy_tol_abs, const SpectralOptions& base = {}) {
    require(h.layout.dimension() >= 2, "spectral gap needs dimension >= 2");
    SpectralOptions opts = base;
    opts.degeneracy_tol_rel = degeneracy_tol_abs / std::max(1.0, h.norm_upper_bound());
    int k = 2;
    for (;;) {
        auto rep = eigensolve_smallest(h, k, opts);
        if (!std::isnan(rep.gap)) return rep.gap;
        if (rep.full_spectrum || static_cast<std::int64_t>(rep.eigenvalues.size()) >= h.layout.dimension())
            return 0.0;
        if (static_cast<std::int64_t>(k) >= h.layout.dimension()) return 0.0;
        k = static_cast<int>(std::min<std::int64_t>(std::int64_t(k) * 4, h.layout.dimension()));
    }
}

/// Default degeneracy tolerance: 1e-9 relative to the operator scale.
inline double spectral_gap(const Hamiltonian& h, const SpectralOptions& base = {}) {
    return spectral_gap(h, base.degeneracy_tol_rel * std::max(1.0, h.norm_upper_bound()), base);
}

/// lambda2 - lambda1 counted with multiplicity: a degenerate ground space
/// has gap 0 (up to solver roundoff). This is the promise-problem notion;
/// spectral_gap() instead skips sub-tolerance splittings.
inline double spectral_gap_raw(const Hamiltonian& h, const SpectralOptions& base = {}) {
    require(h.layout.dimension() >= 2, "spectral gap needs dimension >= 2");
    auto rep = eigensolve_smallest(h, 2, base);
    return std::max(0.0, rep.eigenvalues[1] - rep.eigenvalues[0]);
}

/// Matrix of <b_i|H|b_j> over an orthonormal basis.
inline Matrix restrict_to_basis(const Hamiltonian& h, const std::vector<StateVector>& basis) {
    require(!basis.empty(), "restriction basis empty");
    const auto n = static_cast<Eigen::Index>(basis.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        require(basis[static_cast<std::size_t>(i)].layout == h.layout, "basis layout mismatch");
        for (Eigen::Index j = i; j < n; ++j) {
            cxd ov = basis[static_cast<std::size_t>(i)].amplitudes.dot(basis[static_cast<std::size_t>(j)].amplitudes);
            double want = (i == j) ? 1.0 : 0.0;
            require(std::abs(ov - want) <= 1e-10, "restriction basis not orthonormal within 1e-10");
        }
    }
    Matrix m(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        Vector hv = apply_op(h, basis[static_cast<std::size_t>(j)].amplitudes);
        for (Eigen::Index i = 0; i < n; ++i) m(i, j) = basis[static_cast<std::size_t>(i)].amplitudes.dot(hv);
    }
    return (m + Matrix(m.adjoint())) / 2.0;
}

/// Closed-form lower bound on the squared overlap of any (lambda+delta)-low
/// energy state with the zero space S of H1, for H = H1 + H2 with
/// ||H2|| = K and H1-gap J > 2K:
///   1 - ((K + sqrt(K^2 + delta(J-2K))) / (J-2K))^2.
inline double projection_overlap_bound(double K, double J, double delta) {
    require(K >= 0.0 && delta >= 0.0, "K and delta must be nonnegative");
    require(J > 2.0 * K, "projection bound requires J > 2K");
    double r = (K + std::sqrt(K * K + delta * (J - 2.0 * K))) / (J - 2.0 * K);
    return 1.0 - r * r;
}

struct LowEnergyMin {
    double value = 0.0;
    double mu = 0.0;
    bool bracketed = true;
    double ground_energy = 0.0;
    StateVector achiever;
};

/// min <psi|A|psi> over unit vectors with <psi|H|psi> <= cutoff, via the
/// dual sup_{mu>=0} [lambda_min(A + mu H) - mu*cutoff] (exact for a single
/// quadratic constraint). Golden-section search on mu in [0, 2||A||/(cutoff-lambda)],
/// 200 iterations. cutoff at the ground energy falls back to the exact
/// ground-space restriction.
inline LowEnergyMin min_observable_over_low_energy(const Hamiltonian& h, const Observable& a, double cutoff,
                                                   const SpectralOptions& opts = {}) {
    require(h.layout == a.layout, "H and A layout mismatch");
    const double scale = std::max(1.0, h.norm_upper_bound());
    auto ground = eigensolve_ground_space(h, opts);
    const double lambda = ground.ground_energy;
    require(cutoff >= lambda - 1e-9 * scale, "cutoff below the ground energy");

    LowEnergyMin out;
    out.ground_energy = lambda;

    if (cutoff <= lambda + ground.degeneracy_tol) {
        // Feasible set is exactly the ground space.
        Matrix ar = restrict_to_basis(a, ground.ground_basis);
        std::vector<double> evals;
        dense_eig_inplace(ar, evals);
        out.value = evals.front();
        out.mu = std::numeric_limits<double>::infinity();
        Vector combo = Vector::Zero(h.layout.dimension());
        for (Eigen::Index i = 0; i < ar.rows(); ++i)
            combo += ar(i, 0) * ground.ground_basis[static_cast<std::size_t>(i)].amplitudes;
        combo.normalize();
        out.achiever = StateVector(h.layout, combo, false);
        return out;
    }

    const double a_norm = std::max(a.norm_upper_bound(), 1e-12);
    const double mu_max = 2.0 * a_norm / std::max(cutoff - lambda, 1e-12);

    const bool dense = h.layout.dimension() <= opts.dense_threshold;
    Matrix hd, ad;
    if (dense) {
        hd = realize(h, opts.dense_threshold);
        hd.diagonal().array() -= lambda;  // shift for conditioning
        ad = realize(a, opts.dense_threshold);
    }
    auto g_of_mu = [&](double mu) -> double {
        if (dense) {
            Matrix m = ad + mu * hd;
            std::vector<double> evals;
            dense_eig_inplace(m, evals, false);
            return evals.front() - mu * (cutoff - lambda);
        }
        Hamiltonian comb = a + h.scaled(mu);
        comb.add({}, Matrix::Constant(1, 1, cxd(-mu * lambda, 0.0)), 1.0);
        SpectralOptions sub = opts;
        auto r = eigensolve_smallest(comb, 1, sub);
        return r.ground_energy - mu * (cutoff - lambda);
    };

    double best_mu = 0.0, best_val = g_of_mu(0.0);
    {
        double v = g_of_mu(mu_max);
        if (v > best_val) {
            best_val = v;
            best_mu = mu_max;
            out.bracketed = false;  // optimum may lie beyond the bracket
        }
    }
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = mu_max;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = g_of_mu(x1), f2 = g_of_mu(x2);
    for (int it = 0; it < 200; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = g_of_mu(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = g_of_mu(x1);
        }
        if (hi - lo <= 1e-14 * mu_max) break;
    }
    double xm = (f1 > f2) ? x1 : x2, fm = std::max(f1, f2);
    if (fm > best_val) {
        best_val = fm;
        best_mu = xm;
        out.bracketed = true;
    }
    out.value = best_val;
    out.mu = best_mu;

    // Achieving state: ground vector of A + mu* H.
    if (dense) {
        Matrix m = ad + best_mu * hd;
        std::vector<double> evals;
        dense_eig_inplace(m, evals);
        out.achiever = StateVector(h.layout, Vector(m.col(0)), false);
    } else {
        Hamiltonian comb = a + h.scaled(best_mu);
        auto r = eigensolve_smallest(comb, 1, opts);
        out.achiever = r.eigenvectors.front();
    }
    return out;
}

}  // namespace hamgadget
