#pragma once

#include <string>
#include <vector>

#include "paseig/assembly.hpp"
#include "paseig/dense.hpp"
#include "paseig/multigrid.hpp"

namespace paseig {

struct HistoryEntry {
    int level = 0;
    int iteration = 0; // 0 marks arrival on the level, then 1, 2, ...
    double lambda = 0.0;
    double residual = 0.0; // ||A u - lambda M u||_2 on that level
};

// The whole per-eigenpair pipeline state. Workers own exactly one of these
// each and never look at another; everything shared is read-only.
struct EigenPairState {
    int level = 0;
    double lambda = 0.0;
    Vec u; // normalized so u^T A_level u = 1
    std::vector<HistoryEntry> history;
    WorkCounters counters;
    bool failed = false;
    std::string failure_reason;
};

// Image of the level-0 space on a finer level: prolonged nodal basis plus
// the restricted stiffness/mass blocks. Built once per level, shared
// read-only by every worker.
struct CoarseSpaceData {
    int level = 0;
    std::vector<Vec> basis; // one entry per level-0 interior DOF
    DenseMatrix stiffness;  // basis^T A_level basis
    DenseMatrix mass;       // basis^T M_level basis
};

CoarseSpaceData build_coarse_space_data(const LevelOperators& ops, int level);

// The level-0 space augmented with one direction: block structure
//   [ S   b ]        [ T   c ]
//   [ b^T p ]  and   [ c^T q ]
// with S, T the coarse blocks, b_j = a(basis_j, w), c_j = b(basis_j, w),
// p = a(w,w), q = b(w,w) for the augmenting vector w.
struct BorderedSystem {
    DenseMatrix stiffness;
    DenseMatrix mass;
    int dim() const { return stiffness.rows(); }
};

BorderedSystem build_bordered_system(const CoarseSpaceData& coarse, const LevelOperators& ops,
                                     int level, const Vec& w, WorkCounters* counters = nullptr);

// Index of the candidate that carries the largest mass-inner-product
// weight, i.e. argmax_j |candidates_j . weights|. Ties go to the smaller
// eigenvalue, then the smaller index. `weights` is M_bordered times the
// coordinate vector of the tracked direction, so the score is |b(cand, w)|.
int select_tracked(const DenseEigenResult& candidates, const Vec& weights);

double algebraic_residual(const LevelOperators& ops, int level, double lambda, const Vec& u,
                          WorkCounters* counters = nullptr);

// One correction: inexact solve of a(v, .) = lambda b(u, .) by multigrid
// started from u, then the small eigenproblem on the coarse space augmented
// with the solve output, then reconstruction of the tracked eigenpair.
// Throws DegenerateSpaceError when the augmenting direction is numerically
// inside the coarse space (bordered mass Cholesky pivot under 1e-14 of its
// trace), NonFiniteError on NaN/Inf state.
EigenPairState correction_step(const LevelOperators& ops, const CoarseSpaceData& coarse,
                               EigenPairState state, const MgConfig& mg);

} // namespace paseig
