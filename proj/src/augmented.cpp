#include "paseig/augmented.hpp"

#include <cassert>
#include <cmath>

#include "paseig/errors.hpp"

namespace paseig {

CoarseSpaceData build_coarse_space_data(const LevelOperators& ops, int level) {
    assert(level >= 0 && level < ops.num_levels());
    CoarseSpaceData data;
    data.level = level;
    const int nh = ops.dofs(0);
    const int nk = ops.dofs(level);

    data.basis.reserve(static_cast<std::size_t>(nh));
    for (int j = 0; j < nh; ++j) {
        Vec e = zeros(static_cast<std::size_t>(nh));
        e[j] = 1.0;
        data.basis.push_back(prolongate(ops, 0, level, e));
    }

    data.stiffness = DenseMatrix(nh, nh);
    data.mass = DenseMatrix(nh, nh);
    Vec tmp(static_cast<std::size_t>(nk));
    for (int j = 0; j < nh; ++j) {
        spmv(ops.stiffness[level], data.basis[j], tmp);
        for (int i = 0; i <= j; ++i) {
            const double v = dot(data.basis[i], tmp);
            data.stiffness(i, j) = v;
            data.stiffness(j, i) = v;
        }
        spmv(ops.mass[level], data.basis[j], tmp);
        for (int i = 0; i <= j; ++i) {
            const double v = dot(data.basis[i], tmp);
            data.mass(i, j) = v;
            data.mass(j, i) = v;
        }
    }
    return data;
}

BorderedSystem build_bordered_system(const CoarseSpaceData& coarse, const LevelOperators& ops,
                                     int level, const Vec& w, WorkCounters* counters) {
    assert(level == coarse.level);
    const int nh = static_cast<int>(coarse.basis.size());

    BorderedSystem sys;
    sys.stiffness = DenseMatrix(nh + 1, nh + 1);
    sys.mass = DenseMatrix(nh + 1, nh + 1);
    for (int i = 0; i < nh; ++i)
        for (int j = 0; j < nh; ++j) {
            sys.stiffness(i, j) = coarse.stiffness(i, j);
            sys.mass(i, j) = coarse.mass(i, j);
        }

    const Vec aw = spmv(ops.stiffness[level], w, counters);
    for (int j = 0; j < nh; ++j) {
        const double v = dot(coarse.basis[j], aw);
        sys.stiffness(j, nh) = v;
        sys.stiffness(nh, j) = v;
    }
    sys.stiffness(nh, nh) = dot(w, aw);

    const Vec mw = spmv(ops.mass[level], w, counters);
    for (int j = 0; j < nh; ++j) {
        const double v = dot(coarse.basis[j], mw);
        sys.mass(j, nh) = v;
        sys.mass(nh, j) = v;
    }
    sys.mass(nh, nh) = dot(w, mw);
    return sys;
}

int select_tracked(const DenseEigenResult& candidates, const Vec& weights) {
    const int n = candidates.eigenvectors.rows();
    const int count = static_cast<int>(candidates.eigenvalues.size());
    assert(static_cast<int>(weights.size()) == n);
    assert(count >= 1);

    int best = 0;
    double best_score = -1.0;
    // ascending eigenvalue order plus strict improvement = ties resolve to
    // the smaller eigenvalue, then the smaller index
    for (int j = 0; j < count; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += candidates.eigenvectors(i, j) * weights[i];
        s = std::abs(s);
        if (s > best_score) {
            best_score = s;
            best = j;
        }
    }
    return best;
}

double algebraic_residual(const LevelOperators& ops, int level, double lambda, const Vec& u,
                          WorkCounters* counters) {
    const Vec au = spmv(ops.stiffness[level], u, counters);
    const Vec mu = spmv(ops.mass[level], u, counters);
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double r = au[i] - lambda * mu[i];
        s += r * r;
    }
    return std::sqrt(s);
}

EigenPairState correction_step(const LevelOperators& ops, const CoarseSpaceData& coarse,
                               EigenPairState state, const MgConfig& mg) {
    const int k = state.level;
    assert(k == coarse.level);
    assert(static_cast<int>(state.u.size()) == ops.dofs(k));
    if (!std::isfinite(state.lambda) || !all_finite(state.u))
        throw NonFiniteError("correction: non-finite eigenpair state");

    const int nh = static_cast<int>(coarse.basis.size());
    WorkCounters* ctr = &state.counters;

    // inexact solve of A v = lambda M u, warm-started at u
    Vec rhs = spmv(ops.mass[k], state.u, ctr);
    scal(state.lambda, rhs);
    const Vec w = mg_solve(ops, k, rhs, state.u, mg, ctr);
    if (!all_finite(w)) throw NonFiniteError("correction: solver produced non-finite values");

    double lambda_next = 0.0;
    Vec u_next;

    if (k == 0) {
        // the augmented space collapses onto the coarse space itself; solve
        // the plain coarse problem and track through the solve output
        const DenseEigenResult eig = solve_gevp_dense(coarse.stiffness, coarse.mass, nh);
        const Vec weights = multiply(coarse.mass, w);
        const int sel = select_tracked(eig, weights);
        lambda_next = eig.eigenvalues[sel];
        u_next = eig.eigenvectors.column(sel);
    } else {
        const BorderedSystem sys = build_bordered_system(coarse, ops, k, w, ctr);
        const double trace = [&] {
            double t = 0.0;
            for (int i = 0; i < sys.dim(); ++i) t += sys.mass(i, i);
            return t;
        }();
        try {
            cholesky_factor(sys.mass, "bordered mass matrix", 1e-14 * trace);
        } catch (const NotSpdError&) {
            throw DegenerateSpaceError(
                "augmented space degenerate: correction direction lies in the coarse space");
        }

        const DenseEigenResult eig = solve_gevp_dense(sys.stiffness, sys.mass, nh + 1);
        Vec weights(static_cast<std::size_t>(nh) + 1);
        for (int i = 0; i <= nh; ++i) weights[i] = sys.mass(i, nh);
        const int sel = select_tracked(eig, weights);
        lambda_next = eig.eigenvalues[sel];

        u_next = zeros(state.u.size());
        for (int j = 0; j < nh; ++j) axpy(eig.eigenvectors(j, sel), coarse.basis[j], u_next);
        axpy(eig.eigenvectors(nh, sel), w, u_next);
    }

    if (!std::isfinite(lambda_next) || !all_finite(u_next))
        throw NonFiniteError("correction: small eigenproblem produced non-finite values");

    // renormalize in the a-inner product and fix the sign against the
    // incoming iterate so the history stays continuous
    const Vec au = spmv(ops.stiffness[k], u_next, ctr);
    const double anorm = std::sqrt(dot(u_next, au));
    if (!(anorm > 0.0) || !std::isfinite(anorm))
        throw NonFiniteError("correction: zero or non-finite candidate norm");
    scal(1.0 / anorm, u_next);

    const Vec mu = spmv(ops.mass[k], u_next, ctr);
    double rss = 0.0;
    for (std::size_t i = 0; i < u_next.size(); ++i) {
        const double r = au[i] / anorm - lambda_next * mu[i];
        rss += r * r;
    }
    // the residual norm is sign-invariant, so flipping after is safe
    if (dot(mu, state.u) < 0.0) scal(-1.0, u_next);

    int iter = 1;
    for (auto it = state.history.rbegin(); it != state.history.rend(); ++it)
        if (it->level == k) {
            iter = it->iteration + 1;
            break;
        }

    state.lambda = lambda_next;
    state.u = std::move(u_next);
    state.history.push_back({k, iter, lambda_next, std::sqrt(rss)});
    return state;
}

} // namespace paseig
