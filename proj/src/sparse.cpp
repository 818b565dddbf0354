#include "paseig/sparse.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "paseig/errors.hpp"

namespace paseig {

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, const std::vector<Triplet>& entries) {
    if (rows < 0 || cols < 0) throw Error("sparse: negative dimensions");
    for (const Triplet& t : entries) {
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
            throw Error("sparse: triplet index out of range");
        if (!std::isfinite(t.value)) throw NonFiniteError("sparse: non-finite triplet value");
    }

    // Stable sort keeps insertion order inside each (row,col) group, so the
    // duplicate sum below is deterministic.
    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (entries[a].row != entries[b].row) return entries[a].row < entries[b].row;
        return entries[a].col < entries[b].col;
    });

    SparseMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.row_ptr_.assign(static_cast<std::size_t>(rows) + 1, 0);
    m.col_idx_.reserve(entries.size());
    m.values_.reserve(entries.size());

    std::size_t i = 0;
    for (int r = 0; r < rows; ++r) {
        while (i < order.size() && entries[order[i]].row == r) {
            const int c = entries[order[i]].col;
            double v = 0.0;
            while (i < order.size() && entries[order[i]].row == r && entries[order[i]].col == c) {
                v += entries[order[i]].value;
                ++i;
            }
            m.col_idx_.push_back(c);
            m.values_.push_back(v);
        }
        m.row_ptr_[static_cast<std::size_t>(r) + 1] = static_cast<int>(m.col_idx_.size());
    }
    return m;
}

SparseMatrix SparseMatrix::identity(int n) {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t.push_back({i, i, 1.0});
    return from_triplets(n, n, t);
}

double SparseMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return std::sqrt(s);
}

double SparseMatrix::symmetry_defect() const {
    assert(rows_ == cols_);
    double worst = 0.0;
    for (int r = 0; r < rows_; ++r) {
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            const int c = col_idx_[k];
            // binary search for (c, r)
            const int lo = row_ptr_[c], hi = row_ptr_[c + 1];
            const auto it = std::lower_bound(col_idx_.begin() + lo, col_idx_.begin() + hi, r);
            const double mirror =
                (it != col_idx_.begin() + hi && *it == r) ? values_[it - col_idx_.begin()] : 0.0;
            worst = std::max(worst, std::abs(values_[k] - mirror));
        }
    }
    return worst;
}

void spmv(const SparseMatrix& a, const Vec& x, Vec& y, WorkCounters* counters) {
    if (static_cast<int>(x.size()) != a.cols())
        throw Error("spmv: vector length " + std::to_string(x.size()) + " does not match " +
                    std::to_string(a.cols()) + " columns");
    y.assign(static_cast<std::size_t>(a.rows()), 0.0);
    const auto& rp = a.row_ptr();
    const auto& ci = a.col_idx();
    const auto& va = a.values();
    for (int r = 0; r < a.rows(); ++r) {
        double s = 0.0;
        for (int k = rp[r]; k < rp[r + 1]; ++k) s += va[k] * x[ci[k]];
        y[r] = s;
    }
    if (counters) counters->add_matvec(static_cast<std::uint64_t>(a.nonzeros()));
}

Vec spmv(const SparseMatrix& a, const Vec& x, WorkCounters* counters) {
    Vec y;
    spmv(a, x, y, counters);
    return y;
}

void spmv_transpose(const SparseMatrix& a, const Vec& x, Vec& y, WorkCounters* counters) {
    if (static_cast<int>(x.size()) != a.rows())
        throw Error("spmv_transpose: vector length " + std::to_string(x.size()) +
                    " does not match " + std::to_string(a.rows()) + " rows");
    y.assign(static_cast<std::size_t>(a.cols()), 0.0);
    const auto& rp = a.row_ptr();
    const auto& ci = a.col_idx();
    const auto& va = a.values();
    for (int r = 0; r < a.rows(); ++r) {
        const double xr = x[r];
        for (int k = rp[r]; k < rp[r + 1]; ++k) y[ci[k]] += va[k] * xr;
    }
    if (counters) counters->add_matvec(static_cast<std::uint64_t>(a.nonzeros()));
}

Vec spmv_transpose(const SparseMatrix& a, const Vec& x, WorkCounters* counters) {
    Vec y;
    spmv_transpose(a, x, y, counters);
    return y;
}

} // namespace paseig
