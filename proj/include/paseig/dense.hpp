#pragma once

#include <vector>

#include "paseig/sparse.hpp"
#include "paseig/vec.hpp"

namespace paseig {

// Row-major dense matrix. Used for coarse-space operators and oracle
// solves only; dimensions stay at desk scale.
class DenseMatrix {
  public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0.0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    Vec column(int j) const;
    void set_column(int j, const Vec& v);

    double frobenius_norm() const;
    double symmetry_defect() const;

    static DenseMatrix identity(int n);
    static DenseMatrix from_sparse(const SparseMatrix& a);

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> a_;
};

Vec multiply(const DenseMatrix& a, const Vec& x);

// In-place lower Cholesky A = L L^T. Throws NotSpdError (with the given
// matrix name in the message) if any pivot is <= pivot_floor.
// min_pivot, when non-null, receives the smallest accepted pivot d_k
// (before the square root), useful for near-singularity diagnostics.
DenseMatrix cholesky_factor(const DenseMatrix& a, const char* name, double pivot_floor = 0.0,
                            double* min_pivot = nullptr);

struct DenseEigenResult {
    std::vector<double> eigenvalues; // ascending
    DenseMatrix eigenvectors;        // one eigenvector per column
};

// Full symmetric eigendecomposition by Householder tridiagonalization and
// implicit-shift QL. Eigenvalues ascending, eigenvectors orthonormal with a
// deterministic sign convention (largest-magnitude entry positive).
DenseEigenResult sym_eig(DenseMatrix a);

// First `count` eigenpairs of A x = lambda M x with A symmetric and M SPD.
// Eigenvectors are normalized in the A-inner product (x^T A x = 1) whenever
// lambda > 0, otherwise in the M-inner product. Throws NotSpdError("mass
// matrix not SPD") when the Cholesky of M fails.
DenseEigenResult solve_gevp_dense(const DenseMatrix& a, const DenseMatrix& m, int count);

} // namespace paseig
