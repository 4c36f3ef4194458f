#include <catch2/catch_amalgamated.hpp>

#include "hamgadget/spectra.hpp"
#include "test_helpers.hpp"

using namespace hamgadget;
using namespace test_helpers;

namespace {

Hamiltonian z_hamiltonian() {
    Hamiltonian h(RegisterLayout::single("W", 1));
    h.add({0}, pauli_z());
    return h;
}

Hamiltonian from_dense(const Matrix& m, const std::string& name = "R") {
    // One term over the whole register; used to wrap small explicit matrices.
    int sites = static_cast<int>(std::llround(std::log2(static_cast<double>(m.rows()))));
    if ((std::int64_t(1) << sites) == m.rows()) {
        Hamiltonian h(RegisterLayout::single(name, sites));
        std::vector<int> sup(static_cast<std::size_t>(sites));
        std::iota(sup.begin(), sup.end(), 0);
        h.add(sup, m);
        return h;
    }
    Hamiltonian h(RegisterLayout({Register{name, 1, static_cast<int>(m.rows())}}));
    h.add({0}, m);
    return h;
}

}  // namespace

TEST_CASE("eigensolve: Z has eigenvalues [-1, 1]") {
    auto rep = eigensolve_smallest(z_hamiltonian(), 2);
    REQUIRE(rep.eigenvalues[0] == Catch::Approx(-1.0));
    REQUIRE(rep.eigenvalues[1] == Catch::Approx(1.0));
    REQUIRE(rep.ground_basis.size() == 1);
}

TEST_CASE("eigensolve: zero Hamiltonian on 2 qubits is 4-fold degenerate") {
    Hamiltonian h(RegisterLayout::single("W", 2));
    auto rep = eigensolve_smallest(h, 1);
    REQUIRE(rep.ground_energy == Catch::Approx(0.0).margin(1e-14));
    REQUIRE(rep.full_spectrum);
    auto full = eigensolve_smallest(h, 4);
    REQUIRE(full.ground_basis.size() == 4);
}

TEST_CASE("eigensolve: unary penalty spectrum [0,0,0,0.3]") {
    Hamiltonian h(RegisterLayout::single("X", 2));
    Matrix p01 = Matrix::Zero(4, 4);
    p01(1, 1) = 1.0;
    h.add({0, 1}, p01, 0.3);
    auto rep = eigensolve_smallest(h, 4);
    REQUIRE(rep.eigenvalues[0] == Catch::Approx(0.0).margin(1e-14));
    REQUIRE(rep.eigenvalues[2] == Catch::Approx(0.0).margin(1e-14));
    REQUIRE(rep.eigenvalues[3] == Catch::Approx(0.3));
}

TEST_CASE("spectral gap: Z, identity, near-degenerate qutrit") {
    REQUIRE(spectral_gap(z_hamiltonian()) == Catch::Approx(2.0));

    Hamiltonian id(RegisterLayout::single("W", 2));
    id.add({0}, identity2());
    REQUIRE(spectral_gap(id) == Catch::Approx(0.0).margin(1e-14));

    Matrix d = Matrix::Zero(3, 3);
    d.diagonal() << 0.0, 1e-14, 0.5;
    REQUIRE(spectral_gap(from_dense(d), 1e-10) == Catch::Approx(0.5));
}

TEST_CASE("restrict: full computational basis reproduces realize") {
    auto lay = RegisterLayout::single("R", 2);
    Hamiltonian h(lay);
    h.add({0, 1}, random_hermitian(4, 21));
    std::vector<StateVector> basis;
    for (int i = 0; i < 4; ++i) basis.push_back(StateVector::basis(lay, i));
    REQUIRE(max_entry_diff(restrict_to_basis(h, basis), realize(h)) < 1e-12);
}

TEST_CASE("restrict: |0> against Z and the X eigenbasis") {
    auto lay = RegisterLayout::single("W", 1);
    Hamiltonian z = z_hamiltonian();
    Matrix r = restrict_to_basis(z, {StateVector::basis(lay, 0)});
    REQUIRE(r(0, 0).real() == Catch::Approx(1.0));

    Hamiltonian x(lay);
    x.add({0}, pauli_x());
    Vector plus(2), minus(2);
    plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    minus << 1 / std::sqrt(2.0), -1 / std::sqrt(2.0);
    Matrix rx = restrict_to_basis(x, {StateVector(lay, plus), StateVector(lay, minus)});
    REQUIRE(rx(0, 0).real() == Catch::Approx(1.0));
    REQUIRE(rx(1, 1).real() == Catch::Approx(-1.0));
    REQUIRE(std::abs(rx(0, 1)) < 1e-12);

    Vector notnorm(2);
    notnorm << 1.0, 1.0;
    REQUIRE_THROWS_AS(restrict_to_basis(x, {StateVector(lay, notnorm, false)}), Error);
}

TEST_CASE("projection overlap bound closed form") {
    REQUIRE(projection_overlap_bound(0.0, 1.0, 0.0) == Catch::Approx(1.0));
    REQUIRE(projection_overlap_bound(1.0, 10.0, 0.0) == Catch::Approx(0.9375));
    REQUIRE(projection_overlap_bound(1.0, 10.0, 1.0) == Catch::Approx(0.75));
    REQUIRE_THROWS_AS(projection_overlap_bound(1.0, 2.0, 0.0), Error);
}

TEST_CASE("projection bound holds empirically for random split Hamiltonians") {
    std::mt19937_64 rng(77);
    for (int inst = 0; inst < 50; ++inst) {
        int n = 3;
        std::int64_t dim = 1 << n;
        // S = span of the first s columns of a random unitary.
        Matrix u = random_hermitian(dim, rng());
        Eigen::SelfAdjointEigenSolver<Matrix> es(u);
        int s = 1 + static_cast<int>(rng() % 4);
        Matrix ps = Matrix::Zero(dim, dim);
        for (int i = 0; i < s; ++i) ps += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
        double K = 0.1 + 0.9 * (static_cast<double>(rng() % 1000) / 1000.0);
        double J = 2.0 * K + 0.6 + 3.0 * (static_cast<double>(rng() % 1000) / 1000.0);
        double delta = 0.02 * K;
        Matrix h1 = J * (Matrix::Identity(dim, dim) - ps);
        Matrix h2 = random_hermitian(dim, rng(), K);
        Matrix h = h1 + h2;
        Eigen::SelfAdjointEigenSolver<Matrix> hs(h);
        double lambda = hs.eigenvalues()(0);
        double bound = projection_overlap_bound(K, J, delta);
        for (int i = 0; i < dim; ++i) {
            if (hs.eigenvalues()(i) > lambda + delta) break;
            Vector v = hs.eigenvectors().col(i);
            double overlap = (ps * v).squaredNorm();
            REQUIRE(overlap >= bound - 1e-9);
        }
    }
}

TEST_CASE("variational consistency of the ground energy") {
    auto lay = RegisterLayout::single("R", 3);
    Hamiltonian h(lay);
    h.add({0, 1}, random_hermitian(4, 31));
    h.add({1, 2}, random_hermitian(4, 32));
    auto rep = eigensolve_smallest(h, 1);
    for (int i = 0; i < 1000; ++i) {
        auto psi = StateVector::random(lay, 5000 + static_cast<std::uint64_t>(i));
        REQUIRE(rep.ground_energy <= expectation(psi, h) + 1e-10);
    }
}

TEST_CASE("min over low energy: inactive constraint gives lambda_min(A)") {
    auto lay = RegisterLayout::single("R", 2);
    Hamiltonian h(lay);
    h.add({0}, pauli_z());
    Observable a(lay);
    a.add({1}, pauli_x());
    auto r = min_observable_over_low_energy(h, a, 10.0);
    REQUIRE(r.value == Catch::Approx(-1.0).margin(1e-7));
}

TEST_CASE("min over low energy: feasible set = |1> for H=Z, cutoff=-1") {
    auto lay = RegisterLayout::single("W", 1);
    Hamiltonian h = z_hamiltonian();
    Observable a(lay);
    a.add({0}, pauli_x());
    auto r = min_observable_over_low_energy(h, a, -1.0);
    REQUIRE(r.value == Catch::Approx(0.0).margin(1e-10));
    REQUIRE(std::isinf(r.mu));
    REQUIRE_THROWS_AS(min_observable_over_low_energy(h, a, -1.5), Error);
}

TEST_CASE("min over low energy: dual never exceeds sampled feasible values") {
    std::mt19937_64 rng(99);
    auto lay = RegisterLayout::single("R", 3);
    Hamiltonian h(lay);
    h.add({0, 1}, random_hermitian(4, rng()));
    h.add({1, 2}, random_hermitian(4, rng()));
    Observable a(lay);
    a.add({0}, random_hermitian(2, rng()));
    a.add({2}, random_hermitian(2, rng()));

    auto ground = eigensolve_smallest(h, 1);
    double lambda = ground.ground_energy;
    auto top = eigensolve_smallest(h.scaled(-1.0), 1);
    double lmax = -top.ground_energy;
    double cutoff = lambda + 0.3 * (lmax - lambda);
    auto r = min_observable_over_low_energy(h, a, cutoff);
    REQUIRE(r.bracketed);

    // Rejection-sampled feasible states upper-bound the reported minimum.
    int accepted = 0;
    double best = 1e100;
    for (int i = 0; i < 100000 && accepted < 2000; ++i) {
        auto psi = StateVector::random(lay, 31337 + static_cast<std::uint64_t>(i));
        if (expectation(psi, h) <= cutoff) {
            ++accepted;
            best = std::min(best, expectation(psi, a));
            REQUIRE(r.value <= expectation(psi, a) + 1e-6);
        }
    }
    REQUIRE(accepted > 100);
    // The achieving state is feasible and meets the reported value.
    REQUIRE(expectation(r.achiever, h) <= cutoff + 1e-6);
    REQUIRE(expectation(r.achiever, a) == Catch::Approx(r.value).margin(1e-5));
}

TEST_CASE("min over low energy agrees with ground restriction at cutoff = lambda") {
    std::mt19937_64 rng(123);
    auto lay = RegisterLayout::single("R", 2);
    Hamiltonian h(lay);
    h.add({0, 1}, random_hermitian(4, rng()));
    Observable a(lay);
    a.add({0}, random_hermitian(2, rng()));
    auto ground = eigensolve_ground_space(h);
    auto r = min_observable_over_low_energy(h, a, ground.ground_energy);
    Matrix ar = restrict_to_basis(a, ground.ground_basis);
    auto evals = dense_eigenvalues(ar);
    REQUIRE(r.value == Catch::Approx(evals.front()).margin(1e-8));
}

TEST_CASE("lanczos path matches dense on a sector-split operator") {
    // 7 qubits, forced through the iterative path by a tiny dense threshold.
    auto lay = RegisterLayout::single("R", 7);
    Hamiltonian h(lay);
    std::mt19937_64 rng(17);
    for (int q = 1; q < 7; ++q) h.add({q - 1, q}, random_hermitian(4, rng()), 0.8);
    // Diagonal coupling on qubit 0 keeps it conserved: |1><1|_0 (x) Z_1.
    Matrix p1z = Matrix::Zero(4, 4);
    p1z(2, 2) = 1.0;
    p1z(3, 3) = -1.0;
    Hamiltonian h2 = h;
    h2.add({0, 1}, p1z, 0.5);

    SpectralOptions dense_opts;
    auto dense_rep = eigensolve_smallest(h2, 5, dense_opts);

    SpectralOptions it_opts;
    it_opts.dense_threshold = 16;
    auto it_rep = eigensolve_smallest(h2, 5, it_opts);
    REQUIRE(it_rep.backend != "dense");
    for (int i = 0; i < 5; ++i)
        REQUIRE(it_rep.eigenvalues[static_cast<std::size_t>(i)] ==
                Catch::Approx(dense_rep.eigenvalues[static_cast<std::size_t>(i)]).margin(1e-7));
    for (std::size_t i = 0; i < it_rep.residuals.size(); ++i)
        REQUIRE(it_rep.residuals[i] <= it_rep.tolerance * 50);
}

TEST_CASE("lanczos resolves degenerate ground spaces") {
    // Two decoupled qubits with Z each: ground |11> unique, but first excited
    // doubly degenerate; ask for 4 of 6 qubits worth.
    auto lay = RegisterLayout::single("R", 6);
    Hamiltonian h(lay);
    for (int q = 0; q < 6; ++q) h.add({q}, pauli_z(), 1.0);
    SpectralOptions it_opts;
    it_opts.dense_threshold = 16;
    auto rep = eigensolve_smallest(h, 8, it_opts);
    REQUIRE(rep.eigenvalues[0] == Catch::Approx(-6.0));
    for (int i = 1; i <= 6; ++i) REQUIRE(rep.eigenvalues[static_cast<std::size_t>(i)] == Catch::Approx(-4.0));
    REQUIRE(rep.eigenvalues[7] == Catch::Approx(-2.0));
}
