#include "paseig/multigrid.hpp"

#include <cassert>
#include <cmath>
#include <random>

#include "paseig/cg.hpp"
#include "paseig/errors.hpp"

namespace paseig {

void validate(const MgConfig& cfg) {
    if (cfg.pre_smooth_steps < 0 || cfg.post_smooth_steps < 0)
        throw ConfigError("multigrid: smoothing step counts must be >= 0");
    if (cfg.cycles_per_solve < 1) throw ConfigError("multigrid: cycles_per_solve must be >= 1");
    if (!(cfg.coarsest_rel_tol > 0.0 && cfg.coarsest_rel_tol < 1.0))
        throw ConfigError("multigrid: coarsest_rel_tol must lie in (0, 1)");
}

Vec v_cycle(const LevelOperators& ops, int level, const Vec& rhs, const Vec& x0,
            const MgConfig& cfg, WorkCounters* counters) {
    assert(level >= 0 && level < ops.num_levels());
    const SparseMatrix& a = ops.stiffness[level];

    if (level == 0) {
        const int cap = 40 * a.rows() + 100;
        return cg_solve(a, rhs, x0, cfg.coarsest_rel_tol, cap, counters).x;
    }

    Vec x = cg_steps(a, rhs, x0, cfg.pre_smooth_steps, counters);

    Vec r = spmv(a, x, counters);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = rhs[i] - r[i];
    Vec rc = spmv_transpose(ops.prolongation[level], r, counters);

    Vec ec = v_cycle(ops, level - 1, rc, zeros(rc.size()), cfg, counters);

    Vec ef = spmv(ops.prolongation[level], ec, counters);
    axpy(1.0, ef, x);

    return cg_steps(a, rhs, x, cfg.post_smooth_steps, counters);
}

Vec mg_solve(const LevelOperators& ops, int level, const Vec& rhs, const Vec& x0,
             const MgConfig& cfg, WorkCounters* counters) {
    Vec x = x0;
    for (int c = 0; c < cfg.cycles_per_solve; ++c) x = v_cycle(ops, level, rhs, x, cfg, counters);
    return x;
}

double measure_contraction(const LevelOperators& ops, int level, const MgConfig& cfg, int trials,
                           std::uint64_t seed) {
    assert(trials >= 1);
    const SparseMatrix& a = ops.stiffness[level];
    const int n = a.rows();
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(level));
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    auto energy_norm = [&](const Vec& v) { return std::sqrt(std::max(0.0, dot(v, spmv(a, v)))); };

    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        Vec rhs(static_cast<std::size_t>(n)), x0(static_cast<std::size_t>(n));
        for (double& v : rhs) v = unit(rng);
        for (double& v : x0) v = unit(rng);

        const Vec exact = cg_solve(a, rhs, zeros(rhs.size()), 1e-14, 100 * n + 100).x;

        Vec e0(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) e0[i] = x0[i] - exact[i];
        const double before = energy_norm(e0);
        if (before == 0.0) continue;

        const Vec x1 = mg_solve(ops, level, rhs, x0, cfg);
        Vec e1(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) e1[i] = x1[i] - exact[i];
        worst = std::max(worst, energy_norm(e1) / before);
    }
    return worst;
}

} // namespace paseig
