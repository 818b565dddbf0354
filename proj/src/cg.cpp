#include "paseig/cg.hpp"

#include <cassert>
#include <cmath>

#include "paseig/errors.hpp"

namespace paseig {

namespace {

struct CgOutcome {
    Vec x;
    int iterations = 0;
    bool converged = false;
};

// step_limit < 0 means "until converged or exact". abs_tol is an absolute
// threshold on ||r||_2; 0 keeps only the exact-zero early exit.
CgOutcome cg_run(const SparseMatrix& a, const Vec& rhs, const Vec& x0, int step_limit,
                 double abs_tol, int hard_cap, WorkCounters* counters) {
    assert(a.rows() == a.cols());
    assert(rhs.size() == x0.size());

    CgOutcome out;
    out.x = x0;
    Vec r = spmv(a, out.x, counters);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = rhs[i] - r[i];
    Vec p = r;
    Vec ap(r.size());
    double rr = dot(r, r);
    if (!std::isfinite(rr)) throw NonFiniteError("cg: non-finite residual");

    while (step_limit < 0 || out.iterations < step_limit) {
        if (rr == 0.0) break;
        if (std::sqrt(rr) <= abs_tol) {
            out.converged = true;
            break;
        }
        if (out.iterations >= hard_cap) break;
        spmv(a, p, ap, counters);
        const double pap = dot(p, ap);
        if (!std::isfinite(pap) || pap <= 0.0)
            throw NonFiniteError("cg: non-finite or non-positive curvature, system is "
                                 "indefinite or ill-posed");
        const double alpha = rr / pap;
        axpy(alpha, p, out.x);
        axpy(-alpha, ap, r);
        const double rr_next = dot(r, r);
        if (!std::isfinite(rr_next)) throw NonFiniteError("cg: non-finite residual");
        const double beta = rr_next / rr;
        rr = rr_next;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * p[i];
        ++out.iterations;
        if (counters) ++counters->cg_iterations;
    }
    if (!out.converged && abs_tol > 0.0) out.converged = std::sqrt(rr) <= abs_tol;
    return out;
}

} // namespace

Vec cg_steps(const SparseMatrix& a, const Vec& rhs, const Vec& x0, int step_count,
             WorkCounters* counters) {
    assert(step_count >= 0);
    return cg_run(a, rhs, x0, step_count, 0.0, step_count, counters).x;
}

CgResult cg_solve(const SparseMatrix& a, const Vec& rhs, const Vec& x0, double rel_tol,
                  int max_iter, WorkCounters* counters) {
    assert(rel_tol > 0.0);
    const double abs_tol = rel_tol * norm2(rhs);
    CgOutcome got = cg_run(a, rhs, x0, -1, abs_tol, max_iter, counters);
    CgResult res;
    res.x = std::move(got.x);
    res.iterations = got.iterations;
    res.converged = got.converged || norm2(rhs) == 0.0;
    return res;
}

} // namespace paseig
