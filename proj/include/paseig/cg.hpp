#pragma once

#include "paseig/sparse.hpp"
#include "paseig/vec.hpp"

namespace paseig {

// Exactly step_count unpreconditioned CG iterations starting from x0.
// step_count = 0 returns x0. Stops early only if the residual hits exact
// zero (the iterate is then a fixed point of further steps). Throws
// NonFiniteError when NaN/Inf appears or a search direction has
// non-positive curvature, which indicates an indefinite or ill-posed
// system.
Vec cg_steps(const SparseMatrix& a, const Vec& rhs, const Vec& x0, int step_count,
             WorkCounters* counters = nullptr);

struct CgResult {
    Vec x;
    int iterations = 0;
    bool converged = false; // ||r|| <= rel_tol * ||rhs|| reached within max_iter
};

CgResult cg_solve(const SparseMatrix& a, const Vec& rhs, const Vec& x0, double rel_tol,
                  int max_iter, WorkCounters* counters = nullptr);

} // namespace paseig
