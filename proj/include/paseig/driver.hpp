#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "paseig/augmented.hpp"
#include "paseig/problems.hpp"

namespace paseig {

struct SolverConfig {
    ProblemId problem = ProblemId::laplace2d;
    int dimension = 0; // 0 = problem default
    std::optional<Box> box; // unset = problem default
    int coarse_divisions = 4;
    int levels = 4;           // hierarchy depth
    int eigenpairs = 10;      // m, one worker pipeline each
    int corrections = 1;      // steps on each intermediate level
    int finest_corrections = 1;
    MgConfig mg;
    int workers = 0; // 0 = min(eigenpairs, hardware threads)
    std::int64_t max_interior_dofs = kDefaultMaxInteriorDofs;
    int dense_cap = 4000;
    // start the seed eigensolve on level 0 itself instead of level 1
    bool seed_on_coarse = false;
    int contraction_trials = 3; // 0 disables the per-level theta estimate
};

void validate(const SolverConfig& cfg); // throws ConfigError naming each violated rule

int resolved_dimension(const SolverConfig& cfg);
Box resolved_box(const SolverConfig& cfg);
int resolved_workers(const SolverConfig& cfg);

// Meshes, per-level operators and coarse-space images, shared read-only by
// all workers.
struct ProblemSetup {
    MeshHierarchy hierarchy;
    LevelOperators ops;
    std::vector<CoarseSpaceData> coarse;
    int seed_level = 1;
};

ProblemSetup build_setup(const SolverConfig& cfg);

struct PairResult {
    int seed_index = 0; // position in the seed solve, before sorting
    EigenPairState state;
    double wall_seconds = 0.0;
};

struct RunReport {
    std::vector<PairResult> pairs; // ascending eigenvalue, failed pairs last
    double orthogonality_max = 0.0;
    std::vector<double> theta_hat; // per level >= 1; empty when not measured
    std::optional<double> gamma_hat;
    int levels = 0;
    int seed_level = 0;
};

// Test seam: runs after the seed eigensolve, before any corrections.
struct SolveHooks {
    std::function<void(int seed_index, EigenPairState&)> after_seed;
};

// The full pipeline: seed eigensolve on the first space, then per-eigenpair
// prolong-and-correct sweeps through the hierarchy, each eigenpair on its
// own worker with no cross-talk. Output is bit-identical for any worker
// count. A failing eigenpair is flagged and reported; the others are
// unaffected.
RunReport solve(const SolverConfig& cfg, const SolveHooks& hooks = {});

// The correction schedule of a run: (level, steps) pairs in execution order.
std::vector<std::pair<int, int>> correction_plan(const SolverConfig& cfg);

// Executes the per-eigenpair pipelines on `workers` threads. States are
// handed out round-robin; each worker touches only its own states.
void run_workers(std::vector<PairResult>& pairs, const ProblemSetup& setup,
                 const SolverConfig& cfg, int workers);

// Largest normalized |b(u_i, u_j)| over distinct pairs, skipping pairs
// whose eigenvalues agree to cluster_rel_tol (their span is what converges,
// not the individual directions).
double orthogonality_report(const LevelOperators& ops, int level,
                            const std::vector<const Vec*>& vectors,
                            const std::vector<double>& lambdas,
                            double cluster_rel_tol = 1e-6);

// Dense reference eigensolve on one level. Refuses to densify above
// dense_cap rows.
DenseEigenResult oracle_fine_solve(const LevelOperators& ops, int level, int count, int dense_cap);

struct GammaEstimate {
    double gamma = 0.0;          // fitted per-step energy-error factor
    bool condition_ok = false;   // gamma^corrections * 2 < 1
    std::vector<double> errors;  // ||u^(l) - u_ref||_a per step, l = 0..steps
};

// Runs one eigenpair through the pipeline, then applies `steps` extra
// corrections on the finest level and fits the geometric decay of the
// energy error against the dense reference pair. `oracle`, when given,
// must hold at least eigenpair_index+1 finest-level pairs.
GammaEstimate measure_gamma(const SolverConfig& cfg, int eigenpair_index = 0, int steps = 6,
                            const DenseEigenResult* oracle = nullptr);

} // namespace paseig
