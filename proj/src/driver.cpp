#include "paseig/driver.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <thread>

#include "paseig/cg.hpp"
#include "paseig/errors.hpp"

namespace paseig {

void validate(const SolverConfig& cfg) {
    std::string problems;
    auto complain = [&problems](const char* msg) {
        if (!problems.empty()) problems += "; ";
        problems += msg;
    };

    if (cfg.levels < 1) complain("levels must be >= 1");
    if (cfg.eigenpairs < 1) complain("eigenpairs (m) must be >= 1");
    if (cfg.corrections < 1) complain("corrections must be >= 1");
    if (cfg.finest_corrections < 1) complain("finest_corrections must be >= 1");
    if (cfg.coarse_divisions < 2) complain("coarse_divisions must be >= 2 so the coarse space is nonempty");
    if (cfg.workers < 0) complain("workers must be >= 0 (0 = automatic)");
    if (cfg.dense_cap < 1) complain("dense_cap must be >= 1");
    if (cfg.max_interior_dofs < 1) complain("max_interior_dofs must be >= 1");
    if (cfg.contraction_trials < 0) complain("contraction_trials must be >= 0");
    if (cfg.dimension != 0 && !dimension_allowed(cfg.problem, cfg.dimension))
        complain("problem does not support the requested dimension");
    if (cfg.box) {
        const int dim = cfg.dimension != 0 ? cfg.dimension : default_dimension(cfg.problem);
        if (cfg.box->dim != dim) complain("box dimension does not match the problem dimension");
        for (int d = 0; d < cfg.box->dim; ++d)
            if (!(cfg.box->hi[d] > cfg.box->lo[d])) {
                complain("box extents must be positive");
                break;
            }
    }
    try {
        validate(cfg.mg);
    } catch (const ConfigError& e) {
        complain(e.what());
    }
    if (!problems.empty()) throw ConfigError(problems);
}

int resolved_dimension(const SolverConfig& cfg) {
    return cfg.dimension != 0 ? cfg.dimension : default_dimension(cfg.problem);
}

Box resolved_box(const SolverConfig& cfg) {
    if (cfg.box) return *cfg.box;
    return default_box(cfg.problem, resolved_dimension(cfg));
}

int resolved_workers(const SolverConfig& cfg) {
    const int m = cfg.eigenpairs;
    if (cfg.workers > 0) return std::min(cfg.workers, m);
    const int hw = std::max(1u, std::thread::hardware_concurrency());
    return std::min(m, hw);
}

ProblemSetup build_setup(const SolverConfig& cfg) {
    validate(cfg);
    ProblemSetup setup;
    setup.hierarchy = build_hierarchy(resolved_box(cfg), cfg.coarse_divisions, cfg.levels,
                                      cfg.max_interior_dofs);
    const ProblemCoefficients coeffs = make_coefficients(cfg.problem, resolved_dimension(cfg));
    setup.ops = build_level_operators(setup.hierarchy, coeffs);
    for (int k = 0; k < setup.hierarchy.num_levels(); ++k)
        setup.coarse.push_back(build_coarse_space_data(setup.ops, k));
    setup.seed_level = cfg.seed_on_coarse ? 0 : std::min(1, cfg.levels - 1);
    return setup;
}

std::vector<std::pair<int, int>> correction_plan(const SolverConfig& cfg) {
    const int s = cfg.seed_on_coarse ? 0 : std::min(1, cfg.levels - 1);
    const int finest = cfg.levels - 1;
    std::vector<std::pair<int, int>> plan;
    for (int t = s + 1; t <= finest; ++t)
        plan.emplace_back(t, t == finest ? cfg.finest_corrections : cfg.corrections);
    return plan;
}

namespace {

// Prolong the state one level up, renormalize in the a-inner product and
// log the arrival as iteration 0 of the new level.
void advance_to_level(EigenPairState& st, const ProblemSetup& setup, int target) {
    assert(target == st.level + 1);
    WorkCounters* ctr = &st.counters;
    st.u = spmv(setup.ops.prolongation[target], st.u, ctr);
    st.level = target;

    const Vec au = spmv(setup.ops.stiffness[target], st.u, ctr);
    const double anorm = std::sqrt(dot(st.u, au));
    if (!(anorm > 0.0) || !std::isfinite(anorm))
        throw NonFiniteError("prolongation produced a zero or non-finite iterate");
    scal(1.0 / anorm, st.u);

    const Vec mu = spmv(setup.ops.mass[target], st.u, ctr);
    double rss = 0.0;
    for (std::size_t i = 0; i < st.u.size(); ++i) {
        const double r = au[i] / anorm - st.lambda * mu[i];
        rss += r * r;
    }
    st.history.push_back({target, 0, st.lambda, std::sqrt(rss)});
}

void run_pipeline(PairResult& pr, const ProblemSetup& setup, const SolverConfig& cfg,
                  const std::vector<std::pair<int, int>>& plan) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (!std::isfinite(pr.state.lambda) || !all_finite(pr.state.u))
            throw NonFiniteError("eigenpair state is non-finite");
        for (const auto& [level, steps] : plan) {
            advance_to_level(pr.state, setup, level);
            for (int i = 0; i < steps; ++i)
                pr.state = correction_step(setup.ops, setup.coarse[level], std::move(pr.state),
                                           cfg.mg);
        }
    } catch (const std::exception& e) {
        pr.state.failed = true;
        pr.state.failure_reason = e.what();
    }
    pr.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

void run_workers(std::vector<PairResult>& pairs, const ProblemSetup& setup,
                 const SolverConfig& cfg, int workers) {
    const auto plan = correction_plan(cfg);
    workers = std::max(1, std::min<int>(workers, static_cast<int>(pairs.size())));

    if (workers == 1) {
        for (PairResult& pr : pairs) run_pipeline(pr, setup, cfg, plan);
        return;
    }
    // static round-robin split; no shared mutable state, so the result is
    // independent of scheduling
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = static_cast<std::size_t>(w); i < pairs.size();
                 i += static_cast<std::size_t>(workers))
                run_pipeline(pairs[i], setup, cfg, plan);
        });
    for (std::thread& t : pool) t.join();
}

double orthogonality_report(const LevelOperators& ops, int level,
                            const std::vector<const Vec*>& vectors,
                            const std::vector<double>& lambdas, double cluster_rel_tol) {
    assert(vectors.size() == lambdas.size());
    const std::size_t m = vectors.size();
    std::vector<Vec> mu(m);
    std::vector<double> bnorm(m);
    for (std::size_t i = 0; i < m; ++i) {
        mu[i] = spmv(ops.mass[level], *vectors[i]);
        bnorm[i] = std::sqrt(dot(*vectors[i], mu[i]));
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            const double scale = std::max(std::abs(lambdas[i]), std::abs(lambdas[j]));
            if (std::abs(lambdas[i] - lambdas[j]) <= cluster_rel_tol * scale) continue;
            if (bnorm[i] == 0.0 || bnorm[j] == 0.0) continue;
            worst = std::max(worst, std::abs(dot(*vectors[i], mu[j])) / (bnorm[i] * bnorm[j]));
        }
    return worst;
}

DenseEigenResult oracle_fine_solve(const LevelOperators& ops, int level, int count,
                                   int dense_cap) {
    const int n = ops.dofs(level);
    if (n > dense_cap)
        throw DenseCapError("reference solve refused: " + std::to_string(n) +
                            " DOFs exceed the dense cap of " + std::to_string(dense_cap));
    return solve_gevp_dense(DenseMatrix::from_sparse(ops.stiffness[level]),
                            DenseMatrix::from_sparse(ops.mass[level]), count);
}

namespace {

std::vector<PairResult> seed_pairs(const ProblemSetup& setup, const SolverConfig& cfg) {
    const int s = setup.seed_level;
    const int ns = setup.ops.dofs(s);
    if (cfg.eigenpairs > ns)
        throw ConfigError("eigenpairs (m) must be <= the interior DOF count of the first space (" +
                          std::to_string(ns) + ")");
    if (ns > cfg.dense_cap)
        throw DenseCapError("first-space eigensolve needs " + std::to_string(ns) +
                            " dense DOFs, above the dense cap of " + std::to_string(cfg.dense_cap));

    const DenseEigenResult eig =
        solve_gevp_dense(DenseMatrix::from_sparse(setup.ops.stiffness[s]),
                         DenseMatrix::from_sparse(setup.ops.mass[s]), cfg.eigenpairs);

    std::vector<PairResult> pairs(static_cast<std::size_t>(cfg.eigenpairs));
    for (int i = 0; i < cfg.eigenpairs; ++i) {
        PairResult& pr = pairs[static_cast<std::size_t>(i)];
        pr.seed_index = i;
        pr.state.level = s;
        pr.state.lambda = eig.eigenvalues[static_cast<std::size_t>(i)];
        pr.state.u = eig.eigenvectors.column(i);
        const double res = algebraic_residual(setup.ops, s, pr.state.lambda, pr.state.u);
        pr.state.history.push_back({s, 0, pr.state.lambda, res});
    }
    return pairs;
}

} // namespace

RunReport solve(const SolverConfig& cfg, const SolveHooks& hooks) {
    validate(cfg);
    const ProblemSetup setup = build_setup(cfg);

    std::vector<PairResult> pairs = seed_pairs(setup, cfg);
    if (hooks.after_seed)
        for (PairResult& pr : pairs) hooks.after_seed(pr.seed_index, pr.state);

    run_workers(pairs, setup, cfg, resolved_workers(cfg));

    std::stable_sort(pairs.begin(), pairs.end(), [](const PairResult& a, const PairResult& b) {
        if (a.state.failed != b.state.failed) return !a.state.failed;
        if (a.state.failed) return a.seed_index < b.seed_index;
        if (a.state.lambda != b.state.lambda) return a.state.lambda < b.state.lambda;
        return a.seed_index < b.seed_index;
    });

    RunReport report;
    report.levels = cfg.levels;
    report.seed_level = setup.seed_level;

    std::vector<const Vec*> good;
    std::vector<double> lambdas;
    int good_level = -1;
    for (const PairResult& pr : pairs)
        if (!pr.state.failed) {
            good.push_back(&pr.state.u);
            lambdas.push_back(pr.state.lambda);
            good_level = pr.state.level;
        }
    if (good.size() >= 2)
        report.orthogonality_max = orthogonality_report(setup.ops, good_level, good, lambdas);

    if (cfg.contraction_trials > 0)
        for (int k = 1; k < cfg.levels; ++k)
            report.theta_hat.push_back(
                measure_contraction(setup.ops, k, cfg.mg, cfg.contraction_trials));

    report.pairs = std::move(pairs);
    return report;
}

GammaEstimate measure_gamma(const SolverConfig& cfg, int eigenpair_index, int steps,
                            const DenseEigenResult* oracle) {
    validate(cfg);
    if (eigenpair_index < 0 || eigenpair_index >= cfg.eigenpairs)
        throw ConfigError("measure_gamma: eigenpair index out of range");
    assert(steps >= 2);

    const ProblemSetup setup = build_setup(cfg);
    const int finest = cfg.levels - 1;

    DenseEigenResult local;
    if (!oracle) {
        const int count = std::min(setup.ops.dofs(finest), eigenpair_index + 6);
        local = oracle_fine_solve(setup.ops, finest, count, cfg.dense_cap);
        oracle = &local;
    }
    assert(static_cast<int>(oracle->eigenvalues.size()) > eigenpair_index);

    // run one pair through the pipeline, stopping on arrival at the finest
    // level
    std::vector<PairResult> pairs = seed_pairs(setup, cfg);
    PairResult pr = std::move(pairs[static_cast<std::size_t>(eigenpair_index)]);
    for (const auto& [level, planned] : correction_plan(cfg)) {
        advance_to_level(pr.state, setup, level);
        if (level == finest) break;
        for (int i = 0; i < planned; ++i)
            pr.state = correction_step(setup.ops, setup.coarse[level], std::move(pr.state), cfg.mg);
    }
    assert(pr.state.level == finest);

    // reference direction: the b-orthogonal projection onto the eigenvalue
    // cluster around the target, so degenerate eigenvalues are handled
    const double target = oracle->eigenvalues[static_cast<std::size_t>(eigenpair_index)];
    std::vector<int> cluster;
    for (std::size_t j = 0; j < oracle->eigenvalues.size(); ++j)
        if (std::abs(oracle->eigenvalues[j] - target) <=
            1e-6 * std::max(std::abs(target), std::abs(oracle->eigenvalues[j])))
            cluster.push_back(static_cast<int>(j));

    const SparseMatrix& a = setup.ops.stiffness[finest];
    const SparseMatrix& mm = setup.ops.mass[finest];
    auto energy_error = [&](const Vec& u) {
        const Vec mu = spmv(mm, u);
        Vec proj = zeros(u.size());
        for (int j : cluster) {
            const Vec ubar = oracle->eigenvectors.column(j);
            const double num = dot(ubar, mu);
            const double den = dot(ubar, spmv(mm, ubar));
            axpy(num / den, ubar, proj);
        }
        const double pa = std::sqrt(std::max(0.0, dot(proj, spmv(a, proj))));
        if (pa > 0.0) scal(1.0 / pa, proj);
        Vec diff = u;
        axpy(-1.0, proj, diff);
        return std::sqrt(std::max(0.0, dot(diff, spmv(a, diff))));
    };

    GammaEstimate est;
    est.errors.push_back(energy_error(pr.state.u));
    for (int l = 0; l < steps; ++l) {
        pr.state = correction_step(setup.ops, setup.coarse[finest], std::move(pr.state), cfg.mg);
        est.errors.push_back(energy_error(pr.state.u));
    }

    // least-squares slope of log(error), ignoring the roundoff floor
    std::vector<std::pair<double, double>> pts;
    for (std::size_t l = 0; l < est.errors.size(); ++l)
        if (est.errors[l] > 1e-11) pts.emplace_back(static_cast<double>(l), std::log(est.errors[l]));
    if (pts.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [x, y] : pts) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double nn = static_cast<double>(pts.size());
        est.gamma = std::exp((nn * sxy - sx * sy) / (nn * sxx - sx * sx));
    } else if (est.errors.size() >= 2 && est.errors[0] > 0.0) {
        est.gamma = est.errors[1] / est.errors[0];
    }
    est.condition_ok =
        std::pow(est.gamma, cfg.corrections) * setup.hierarchy.refinement_factor < 1.0;
    return est;
}

} // namespace paseig
