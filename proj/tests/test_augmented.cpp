#include <cmath>
#include <cstring>

#include <doctest.h>

#include "paseig/augmented.hpp"
#include "paseig/dense.hpp"
#include "paseig/errors.hpp"

#include "support.hpp"

using namespace paseig;
using namespace testsupport;

namespace {

struct OraclePair {
    double lambda;
    Vec u; // a-normalized, consistent with EigenPairState
};

OraclePair dense_pair(const LevelOperators& ops, int level, int index) {
    const DenseEigenResult eig = solve_gevp_dense(DenseMatrix::from_sparse(ops.stiffness[level]),
                                                  DenseMatrix::from_sparse(ops.mass[level]),
                                                  index + 1);
    return {eig.eigenvalues[index], eig.eigenvectors.column(index)};
}

DenseEigenResult make_candidates(const std::vector<double>& lambdas,
                                 const std::vector<Vec>& columns) {
    DenseEigenResult r;
    r.eigenvalues = lambdas;
    r.eigenvectors = DenseMatrix(static_cast<int>(columns[0].size()), static_cast<int>(columns.size()));
    for (int j = 0; j < static_cast<int>(columns.size()); ++j) r.eigenvectors.set_column(j, columns[j]);
    return r;
}

double energy_error(const SparseMatrix& a, const Vec& x, const Vec& ref) {
    Vec d = x;
    axpy(-1.0, ref, d);
    Vec s = x;
    axpy(1.0, ref, s);
    return std::min(energy_norm(a, d), energy_norm(a, s));
}

} // namespace

TEST_SUITE("augmented") {

TEST_CASE("coarse space data carries the prolonged nodal basis") {
    const LevelOperators ops = laplace_ops(4, 2);
    const CoarseSpaceData csd = build_coarse_space_data(ops, 1);

    CHECK(csd.level == 1);
    REQUIRE(csd.basis.size() == static_cast<std::size_t>(ops.dofs(0)));
    for (const Vec& v : csd.basis) REQUIRE(v.size() == static_cast<std::size_t>(ops.dofs(1)));

    // each basis vector is the interpolated coarse hat function
    for (std::size_t j = 0; j < csd.basis.size(); ++j) {
        Vec e = zeros(csd.basis.size());
        e[j] = 1.0;
        CHECK(csd.basis[j] == prolongate(ops, 0, 1, e));
    }

    // blocks agree with explicit pairwise inner products
    const int nh = static_cast<int>(csd.basis.size());
    REQUIRE(csd.stiffness.rows() == nh);
    REQUIRE(csd.mass.rows() == nh);
    for (int i = 0; i < nh; ++i) {
        const Vec ai = spmv(ops.stiffness[1], csd.basis[static_cast<std::size_t>(i)]);
        const Vec mi = spmv(ops.mass[1], csd.basis[static_cast<std::size_t>(i)]);
        for (int j = 0; j < nh; ++j) {
            CHECK(csd.stiffness(i, j) ==
                  doctest::Approx(dot(csd.basis[static_cast<std::size_t>(j)], ai)).epsilon(1e-12));
            CHECK(csd.mass(i, j) ==
                  doctest::Approx(dot(csd.basis[static_cast<std::size_t>(j)], mi)).epsilon(1e-12));
        }
    }

    // nested spaces: the blocks are the level-0 operators
    const DenseMatrix a0 = DenseMatrix::from_sparse(ops.stiffness[0]);
    const DenseMatrix m0 = DenseMatrix::from_sparse(ops.mass[0]);
    for (int i = 0; i < nh; ++i)
        for (int j = 0; j < nh; ++j) {
            CHECK(std::abs(csd.stiffness(i, j) - a0(i, j)) <= 1e-10 * a0.frobenius_norm());
            CHECK(std::abs(csd.mass(i, j) - m0(i, j)) <= 1e-10 * m0.frobenius_norm());
        }
}

TEST_CASE("bordered system rows are the augmented inner products") {
    const LevelOperators ops = laplace_ops(4, 2);
    const CoarseSpaceData csd = build_coarse_space_data(ops, 1);
    const Vec w = random_vec(static_cast<std::size_t>(ops.dofs(1)), 7);
    const BorderedSystem sys = build_bordered_system(csd, ops, 1, w);

    const int nh = static_cast<int>(csd.basis.size());
    REQUIRE(sys.dim() == nh + 1);
    CHECK(sys.stiffness.symmetry_defect() <= 1e-12 * sys.stiffness.frobenius_norm());
    CHECK(sys.mass.symmetry_defect() <= 1e-12 * sys.mass.frobenius_norm());

    for (int i = 0; i < nh; ++i)
        for (int j = 0; j < nh; ++j) {
            CHECK(sys.stiffness(i, j) == csd.stiffness(i, j));
            CHECK(sys.mass(i, j) == csd.mass(i, j));
        }

    const Vec aw = spmv(ops.stiffness[1], w);
    const Vec mw = spmv(ops.mass[1], w);
    for (int j = 0; j < nh; ++j) {
        const double bj = dot(csd.basis[static_cast<std::size_t>(j)], aw);
        const double cj = dot(csd.basis[static_cast<std::size_t>(j)], mw);
        CHECK(sys.stiffness(j, nh) == doctest::Approx(bj).epsilon(1e-12));
        CHECK(sys.stiffness(nh, j) == doctest::Approx(bj).epsilon(1e-12));
        CHECK(sys.mass(j, nh) == doctest::Approx(cj).epsilon(1e-12));
        CHECK(sys.mass(nh, j) == doctest::Approx(cj).epsilon(1e-12));
    }
    CHECK(sys.stiffness(nh, nh) == doctest::Approx(dot(w, aw)).epsilon(1e-12));
    CHECK(sys.mass(nh, nh) == doctest::Approx(dot(w, mw)).epsilon(1e-12));
}

TEST_CASE("tracked selection takes the largest mass weight") {
    const DenseEigenResult cands = make_candidates(
        {1.0, 2.0, 3.0}, {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}});

    CHECK(select_tracked(cands, {0.3, -0.9, 0.1}) == 1); // magnitude counts, sign does not
    CHECK(select_tracked(cands, {0.0, 0.0, 1.0}) == 2);  // weight on one candidate only
    CHECK(select_tracked(cands, {0.5, 0.5, 0.2}) == 0);  // score tie: smaller eigenvalue

    const DenseEigenResult flat = make_candidates(
        {2.0, 2.0, 2.0}, {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}});
    CHECK(select_tracked(flat, {0.0, 0.4, 0.4}) == 1); // full tie: smaller index
}

TEST_CASE("algebraic residual matches a hand computation") {
    const LevelOperators tiny = laplace_ops(2, 1);
    REQUIRE(tiny.dofs(0) == 1);
    const double a00 = DenseMatrix::from_sparse(tiny.stiffness[0])(0, 0);
    const double m00 = DenseMatrix::from_sparse(tiny.mass[0])(0, 0);
    const double expect = std::abs(a00 * 2.0 - 3.5 * m00 * 2.0);
    CHECK(algebraic_residual(tiny, 0, 3.5, {2.0}) == doctest::Approx(expect).epsilon(1e-14));

    const LevelOperators ops = laplace_ops(4, 1);
    const OraclePair p = dense_pair(ops, 0, 0);
    CHECK(algebraic_residual(ops, 0, p.lambda, p.u) <= 1e-8);
}

TEST_CASE("an exact eigenpair is a fixed point") {
    const LevelOperators ops = laplace_ops(4, 2);
    const CoarseSpaceData csd = build_coarse_space_data(ops, 1);
    const OraclePair p = dense_pair(ops, 1, 0);

    EigenPairState state;
    state.level = 1;
    state.lambda = p.lambda;
    state.u = p.u;

    MgConfig mg;
    mg.cycles_per_solve = 30;
    const EigenPairState out = correction_step(ops, csd, state, mg);

    CHECK(!out.failed);
    CHECK(out.level == 1);
    CHECK(std::abs(out.lambda - p.lambda) <= 1e-10 * p.lambda);
    Vec d = out.u;
    axpy(-1.0, p.u, d); // output sign is pinned to the incoming iterate
    CHECK(norm2(d) <= 1e-8);

    REQUIRE(out.history.size() == 1);
    CHECK(out.history[0].level == 1);
    CHECK(out.history[0].iteration == 1);
    CHECK(out.history[0].lambda == out.lambda);
    CHECK(out.history[0].residual <= 1e-8);
}

TEST_CASE("corrections contract perturbed starts") {
    const LevelOperators ops = laplace_ops(4, 2);
    const CoarseSpaceData csd = build_coarse_space_data(ops, 1);
    const SparseMatrix& a = ops.stiffness[1];
    const SparseMatrix& m = ops.mass[1];
    const OraclePair p = dense_pair(ops, 1, 0);

    for (int trial = 0; trial < 10; ++trial) {
        Vec noise = random_vec(p.u.size(), 100 + static_cast<std::uint64_t>(trial));
        scal(0.3 / energy_norm(a, noise), noise);
        Vec u0 = p.u;
        axpy(1.0, noise, u0);
        scal(1.0 / energy_norm(a, u0), u0);

        EigenPairState state;
        state.level = 1;
        state.lambda = quad_form(a, u0) / quad_form(m, u0);
        state.u = u0;

        const EigenPairState out = correction_step(ops, csd, state, MgConfig{});
        CHECK(!out.failed);
        CHECK(energy_error(a, out.u, p.u) < energy_error(a, u0, p.u));
        CHECK(std::abs(out.lambda - p.lambda) < std::abs(state.lambda - p.lambda));
    }
}

TEST_CASE("a correction direction inside the coarse space is rejected") {
    const LevelOperators base = laplace_ops(4, 1);
    const int n = base.dofs(0);

    // two identical spaces: the fine level adds nothing, so the solve
    // output always lies in the coarse span
    LevelOperators flat;
    flat.stiffness = {base.stiffness[0], base.stiffness[0]};
    flat.mass = {base.mass[0], base.mass[0]};
    flat.prolongation = {SparseMatrix{}, SparseMatrix::identity(n)};

    const CoarseSpaceData csd = build_coarse_space_data(flat, 1);
    const OraclePair p = dense_pair(base, 0, 0);

    EigenPairState state;
    state.level = 1;
    state.lambda = p.lambda;
    state.u = p.u;

    CHECK_THROWS_WITH_AS(correction_step(flat, csd, state, MgConfig{}),
                         doctest::Contains("augmented space degenerate"), DegenerateSpaceError);
}

TEST_CASE("iteration numbering continues per level") {
    const LevelOperators ops = laplace_ops(4, 2);
    const CoarseSpaceData csd = build_coarse_space_data(ops, 1);
    const OraclePair p = dense_pair(ops, 1, 1);

    EigenPairState state;
    state.level = 1;
    state.lambda = p.lambda;
    state.u = p.u;
    state.history.push_back({0, 3, p.lambda, 0.0}); // earlier level does not count
    state.history.push_back({1, 0, p.lambda, 0.0}); // arrival marker

    EigenPairState s1 = correction_step(ops, csd, state, MgConfig{});
    REQUIRE(s1.history.size() == 3);
    CHECK(s1.history.back().level == 1);
    CHECK(s1.history.back().iteration == 1);

    const EigenPairState s2 = correction_step(ops, csd, std::move(s1), MgConfig{});
    REQUIRE(s2.history.size() == 4);
    CHECK(s2.history.back().iteration == 2);
}

TEST_CASE("corrections are bit-deterministic") {
    const LevelOperators ops = laplace_ops(4, 2);
    const CoarseSpaceData csd = build_coarse_space_data(ops, 1);

    EigenPairState state;
    state.level = 1;
    state.lambda = 21.0;
    state.u = random_vec(static_cast<std::size_t>(ops.dofs(1)), 9);
    scal(1.0 / energy_norm(ops.stiffness[1], state.u), state.u);

    const EigenPairState a = correction_step(ops, csd, state, MgConfig{});
    const EigenPairState b = correction_step(ops, csd, state, MgConfig{});
    CHECK(a.lambda == b.lambda);
    CHECK(std::memcmp(a.u.data(), b.u.data(), a.u.size() * sizeof(double)) == 0);
}

} // TEST_SUITE
