#pragma once

#include <cstdint>
#include <vector>

#include "paseig/vec.hpp"

namespace paseig {

// Per-eigenpair work accounting. matvec_work is the number of stored
// nonzeros touched, i.e. proportional to flops, so it scales with problem
// size where a bare call count would not.
struct WorkCounters {
    std::uint64_t matvec_calls = 0;
    std::uint64_t matvec_work = 0;
    std::uint64_t cg_iterations = 0;

    void add_matvec(std::uint64_t nnz) {
        ++matvec_calls;
        matvec_work += nnz;
    }
};

struct Triplet {
    int row;
    int col;
    double value;
};

// Compressed sparse row, column indices sorted within each row.
// Symmetric matrices store both halves; symmetry is a property of the
// values, not of the storage.
class SparseMatrix {
  public:
    SparseMatrix() = default;

    // Duplicate (row,col) entries are summed in insertion order.
    // Rejects out-of-range indices and non-finite values.
    static SparseMatrix from_triplets(int rows, int cols, const std::vector<Triplet>& entries);

    static SparseMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::int64_t nonzeros() const { return static_cast<std::int64_t>(values_.size()); }

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return values_; }

    double frobenius_norm() const;

    // max_ij |a_ij - a_ji|, 0 for structurally missing pairs counted as 0.
    double symmetry_defect() const;

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<int> row_ptr_{0};
    std::vector<int> col_idx_;
    std::vector<double> values_;
};

// y = A x. Row-major traversal, fixed summation order.
void spmv(const SparseMatrix& a, const Vec& x, Vec& y, WorkCounters* counters = nullptr);
Vec spmv(const SparseMatrix& a, const Vec& x, WorkCounters* counters = nullptr);

// y = A^T x without forming the transpose. Deterministic scatter order.
void spmv_transpose(const SparseMatrix& a, const Vec& x, Vec& y, WorkCounters* counters = nullptr);
Vec spmv_transpose(const SparseMatrix& a, const Vec& x, WorkCounters* counters = nullptr);

} // namespace paseig
