#pragma once

#include <cstdint>

#include "paseig/assembly.hpp"

namespace paseig {

struct MgConfig {
    int pre_smooth_steps = 2;
    int post_smooth_steps = 2;
    int cycles_per_solve = 1;
    double coarsest_rel_tol = 1e-12;
};

void validate(const MgConfig& cfg);

// One V-cycle on the given level: CG smoothing, residual restriction,
// recursive coarse correction, CG smoothing. Level 0 solves directly (CG to
// coarsest_rel_tol). Positively homogeneous of degree 1 in (rhs, x0).
Vec v_cycle(const LevelOperators& ops, int level, const Vec& rhs, const Vec& x0,
            const MgConfig& cfg, WorkCounters* counters = nullptr);

// cycles_per_solve consecutive V-cycles.
Vec mg_solve(const LevelOperators& ops, int level, const Vec& rhs, const Vec& x0,
             const MgConfig& cfg, WorkCounters* counters = nullptr);

// Worst observed energy-error contraction of mg_solve on this level over
// `trials` random (rhs, x0) pairs, measured against a tightly converged CG
// oracle. The solver never assumes a contraction factor; this is how one is
// obtained when needed.
double measure_contraction(const LevelOperators& ops, int level, const MgConfig& cfg, int trials,
                           std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

} // namespace paseig
