#include <cmath>
#include <cstring>

#include <doctest.h>

#include "paseig/cg.hpp"
#include "paseig/dense.hpp"
#include "paseig/errors.hpp"
#include "paseig/mesh.hpp"
#include "paseig/sparse.hpp"

#include "support.hpp"

using namespace paseig;
using namespace testsupport;

namespace {

SparseMatrix two_by_two() {
    return SparseMatrix::from_triplets(2, 2, {{0, 0, 2.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 3.0}});
}

} // namespace

TEST_SUITE("linalg") {

TEST_CASE("spmv identity returns the input") {
    const SparseMatrix eye = SparseMatrix::identity(7);
    const Vec x = random_vec(7, 11);
    CHECK(spmv(eye, x) == x);
}

TEST_CASE("spmv hand-checked 2x2") {
    const Vec y = spmv(two_by_two(), Vec{1.0, 1.0});
    CHECK(y[0] == 3.0);
    CHECK(y[1] == 4.0);
}

TEST_CASE("spmv on a random symmetric matrix is self-adjoint") {
    const int n = 50;
    const DenseMatrix ad = random_spd(n, 42);
    const SparseMatrix a = to_sparse(ad);
    const Vec x = random_vec(n, 1);
    const Vec y = random_vec(n, 2);
    const double xay = dot(x, spmv(a, y));
    const double yax = dot(y, spmv(a, x));
    CHECK(std::abs(xay - yax) <= 1e-12 * std::abs(xay));
}

TEST_CASE("spmv_transpose matches a densified transpose") {
    std::vector<Triplet> t{{0, 0, 1.5}, {0, 2, -2.0}, {1, 1, 3.0}, {2, 0, 0.5}, {2, 2, 4.0},
                           {3, 1, -1.0}};
    const SparseMatrix a = SparseMatrix::from_triplets(4, 3, t);
    const Vec x = random_vec(4, 3);
    const Vec y = spmv_transpose(a, x);
    for (int j = 0; j < 3; ++j) {
        double want = 0.0;
        for (const Triplet& e : t)
            if (e.col == j) want += e.value * x[static_cast<std::size_t>(e.row)];
        CHECK(y[static_cast<std::size_t>(j)] == doctest::Approx(want).epsilon(1e-14));
    }
}

TEST_CASE("from_triplets sums duplicates and keeps columns sorted") {
    const SparseMatrix a = SparseMatrix::from_triplets(
        2, 2, {{0, 1, 1.0}, {0, 0, 2.0}, {0, 1, 0.5}, {1, 1, 1.0}});
    CHECK(a.nonzeros() == 3);
    const Vec y = spmv(a, Vec{1.0, 1.0});
    CHECK(y[0] == 3.5); // 2 + (1 + 0.5)
    for (int i = 0; i < a.rows(); ++i)
        for (int k = a.row_ptr()[i] + 1; k < a.row_ptr()[i + 1]; ++k)
            CHECK(a.col_idx()[k - 1] < a.col_idx()[k]);
}

TEST_CASE("from_triplets rejects bad input") {
    CHECK_THROWS_AS(SparseMatrix::from_triplets(2, 2, {{2, 0, 1.0}}), Error);
    CHECK_THROWS_AS(SparseMatrix::from_triplets(2, 2, {{0, -1, 1.0}}), Error);
    CHECK_THROWS_AS(SparseMatrix::from_triplets(2, 2, {{0, 0, std::nan("")}}), Error);
}

TEST_CASE("spmv rejects dimension mismatch") {
    CHECK_THROWS_AS(spmv(two_by_two(), Vec{1.0, 2.0, 3.0}), Error);
}

TEST_CASE("cg_steps solves the identity in one step") {
    const SparseMatrix eye = SparseMatrix::identity(5);
    const Vec rhs = random_vec(5, 7);
    CHECK(cg_steps(eye, rhs, zeros(5), 1) == rhs);
}

TEST_CASE("cg_steps is exact after n steps on a diagonal system") {
    const SparseMatrix a = SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {1, 1, 2.0}});
    const Vec x = cg_steps(a, Vec{1.0, 2.0}, zeros(2), 2);
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("cg_steps with zero steps returns the start") {
    const Vec x0 = random_vec(4, 9);
    CHECK(cg_steps(SparseMatrix::identity(4), random_vec(4, 10), x0, 0) == x0);
}

TEST_CASE("cg error decreases monotonically in the energy norm") {
    const int n = 30;
    const DenseMatrix ad = random_spd(n, 5);
    const SparseMatrix a = to_sparse(ad);
    const Vec rhs = random_vec(n, 6);
    const Vec exact = gauss_solve(ad, rhs);

    double prev = -1.0;
    for (int steps = 0; steps <= 12; ++steps) {
        Vec e = cg_steps(a, rhs, zeros(n), steps);
        axpy(-1.0, exact, e);
        const double err = energy_norm(a, e);
        if (steps > 0) CHECK(err <= prev * (1.0 + 1e-12));
        prev = err;
    }
}

TEST_CASE("cg_steps detects indefinite systems") {
    const SparseMatrix a = SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {1, 1, -1.0}});
    CHECK_THROWS_AS(cg_steps(a, Vec{0.0, 1.0}, zeros(2), 3), NonFiniteError);
}

TEST_CASE("cg_solve on a zero right side stops immediately") {
    const CgResult r = cg_solve(SparseMatrix::identity(3), zeros(3), zeros(3), 1e-12, 10);
    CHECK(r.iterations == 0);
    CHECK(r.converged);
    CHECK(r.x == zeros(3));
}

TEST_CASE("cg_solve reaches the exact solution of the 2x2 system") {
    const CgResult r = cg_solve(two_by_two(), Vec{3.0, 4.0}, zeros(2), 1e-12, 50);
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("cg_solve matches a dense direct solve on a mesh stiffness matrix") {
    const LevelOperators ops = laplace_ops(4, 3);
    const SparseMatrix& a = ops.stiffness[2];
    const Vec rhs = random_vec(static_cast<std::size_t>(a.rows()), 13);
    const CgResult r = cg_solve(a, rhs, zeros(rhs.size()), 1e-12, 10 * a.rows());
    CHECK(r.converged);

    const Vec exact = gauss_solve(DenseMatrix::from_sparse(a), rhs);
    Vec diff = r.x;
    axpy(-1.0, exact, diff);
    CHECK(norm2(diff) <= 1e-8 * norm2(exact));
}

TEST_CASE("cg_solve reports non-convergence") {
    const LevelOperators ops = laplace_ops(4, 2);
    const SparseMatrix& a = ops.stiffness[1];
    const Vec rhs = random_vec(static_cast<std::size_t>(a.rows()), 14);
    const CgResult r = cg_solve(a, rhs, zeros(rhs.size()), 1e-14, 2);
    CHECK(!r.converged);
    CHECK(r.iterations == 2);
}

TEST_CASE("gevp on a diagonal pair, a-normalized eigenvectors") {
    DenseMatrix a(2, 2), m(2, 2);
    a(0, 0) = 2.0;
    a(1, 1) = 6.0;
    m(0, 0) = 1.0;
    m(1, 1) = 2.0;
    const DenseEigenResult r = solve_gevp_dense(a, m, 2);
    REQUIRE(r.eigenvalues.size() == 2);
    CHECK(r.eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(r.eigenvalues[1] == doctest::Approx(3.0).epsilon(1e-13));
    // x^T A x = 1 with A = diag(2,6): the lambda=2 direction is e_0/sqrt(2)
    CHECK(std::abs(r.eigenvectors(0, 0)) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));
    CHECK(r.eigenvectors(1, 0) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("gevp with equal matrices gives unit eigenvalues") {
    const DenseMatrix a = random_spd(8, 21);
    const DenseEigenResult r = solve_gevp_dense(a, a, 8);
    for (double lam : r.eigenvalues) CHECK(lam == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("gevp residual and a-orthonormality on a random pair") {
    const int n = 20;
    DenseMatrix a = random_spd(n, 31);
    const DenseMatrix m = random_spd(n, 32);
    const DenseEigenResult r = solve_gevp_dense(a, m, n);

    const double anorm = a.frobenius_norm();
    const double mnorm = m.frobenius_norm();
    for (int j = 0; j < n; ++j) {
        const double lam = r.eigenvalues[static_cast<std::size_t>(j)];
        const Vec x = r.eigenvectors.column(j);
        const Vec ax = multiply(a, x);
        const Vec mx = multiply(m, x);
        double rss = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = ax[static_cast<std::size_t>(i)] - lam * mx[static_cast<std::size_t>(i)];
            rss += d * d;
        }
        CHECK(std::sqrt(rss) <= 1e-10 * (anorm + std::abs(lam) * mnorm));
        for (int k = 0; k <= j; ++k) {
            const double want = k == j ? 1.0 : 0.0;
            CHECK(std::abs(dot(r.eigenvectors.column(k), ax) - want) <= 1e-10);
        }
    }
    for (std::size_t j = 1; j < r.eigenvalues.size(); ++j)
        CHECK(r.eigenvalues[j - 1] <= r.eigenvalues[j]);
}

TEST_CASE("gevp rejects an indefinite mass matrix") {
    DenseMatrix a = DenseMatrix::identity(2);
    DenseMatrix m(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    CHECK_THROWS_WITH_AS(solve_gevp_dense(a, m, 1), doctest::Contains("mass matrix not SPD"),
                         NotSpdError);
}

TEST_CASE("gevp rejects a count above the dimension") {
    const DenseMatrix a = DenseMatrix::identity(3);
    CHECK_THROWS_AS(solve_gevp_dense(a, a, 4), Error);
}

TEST_CASE("coarse mesh eigenvalue brackets the analytic ground value") {
    const LevelOperators ops = laplace_ops(8, 1);
    const DenseEigenResult r = solve_gevp_dense(DenseMatrix::from_sparse(ops.stiffness[0]),
                                                DenseMatrix::from_sparse(ops.mass[0]), 1);
    const double lam1 = 2.0 * pi_sq();
    CHECK(r.eigenvalues[0] >= lam1);
    CHECK(r.eigenvalues[0] <= lam1 + 2.0);
}

TEST_CASE("dense eigensolve is bit-deterministic") {
    const DenseMatrix a = random_spd(12, 77);
    const DenseEigenResult r1 = sym_eig(a);
    const DenseEigenResult r2 = sym_eig(a);
    REQUIRE(r1.eigenvalues.size() == r2.eigenvalues.size());
    CHECK(std::memcmp(r1.eigenvalues.data(), r2.eigenvalues.data(),
                      r1.eigenvalues.size() * sizeof(double)) == 0);
    for (int j = 0; j < 12; ++j) {
        const Vec c1 = r1.eigenvectors.column(j);
        const Vec c2 = r2.eigenvectors.column(j);
        CHECK(std::memcmp(c1.data(), c2.data(), c1.size() * sizeof(double)) == 0);
    }
}

} // TEST_SUITE
