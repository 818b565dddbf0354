#pragma once

// Shared test helpers. Oracles here are deliberately independent of the
// library's own kernels: the dense solver is plain Gaussian elimination
// with partial pivoting, not the library's Cholesky.

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "paseig/assembly.hpp"
#include "paseig/dense.hpp"
#include "paseig/mesh.hpp"
#include "paseig/sparse.hpp"
#include "paseig/vec.hpp"

namespace testsupport {

inline paseig::Vec random_vec(std::size_t n, std::uint64_t seed, double lo = -1.0,
                              double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    paseig::Vec v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

// Dense solve by Gaussian elimination with partial pivoting.
inline paseig::Vec gauss_solve(paseig::DenseMatrix a, paseig::Vec b) {
    const int n = a.rows();
    if (n != a.cols() || static_cast<std::size_t>(n) != b.size())
        throw std::invalid_argument("gauss_solve: shape mismatch");
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        if (a(piv, k) == 0.0) throw std::runtime_error("gauss_solve: singular matrix");
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(b[k], b[piv]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            if (f == 0.0) continue;
            for (int j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    paseig::Vec x(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

inline double quad_form(const paseig::SparseMatrix& a, const paseig::Vec& v) {
    return paseig::dot(v, paseig::spmv(a, v));
}

inline double energy_norm(const paseig::SparseMatrix& a, const paseig::Vec& v) {
    return std::sqrt(std::max(0.0, quad_form(a, v)));
}

// Random symmetric positive definite matrix B B^T + n I (well conditioned).
inline paseig::DenseMatrix random_spd(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    paseig::DenseMatrix b(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(i, j) = dist(rng);
    paseig::DenseMatrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += b(i, k) * b(j, k);
            a(i, j) = s + (i == j ? n : 0.0);
        }
    return a;
}

inline paseig::SparseMatrix to_sparse(const paseig::DenseMatrix& a) {
    std::vector<paseig::Triplet> t;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (a(i, j) != 0.0) t.push_back({i, j, a(i, j)});
    return paseig::SparseMatrix::from_triplets(a.rows(), a.cols(), t);
}

// Unit-box Laplace hierarchy and operators, the standard fixture.
inline paseig::LevelOperators laplace_ops(int divisions, int levels, int dim = 2) {
    paseig::Box box;
    box.dim = dim;
    const paseig::MeshHierarchy h = paseig::build_hierarchy(box, divisions, levels);
    return paseig::build_level_operators(h, paseig::constant_coefficients());
}

inline double pi_sq() { return M_PI * M_PI; }

} // namespace testsupport
