#include "paseig/dense.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "paseig/errors.hpp"

namespace paseig {

Vec DenseMatrix::column(int j) const {
    Vec v(static_cast<std::size_t>(rows_));
    for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

void DenseMatrix::set_column(int j, const Vec& v) {
    assert(static_cast<int>(v.size()) == rows_);
    for (int i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

double DenseMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
}

double DenseMatrix::symmetry_defect() const {
    assert(rows_ == cols_);
    double worst = 0.0;
    for (int i = 0; i < rows_; ++i)
        for (int j = i + 1; j < cols_; ++j)
            worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
    return worst;
}

DenseMatrix DenseMatrix::identity(int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::from_sparse(const SparseMatrix& a) {
    DenseMatrix m(a.rows(), a.cols());
    const auto& rp = a.row_ptr();
    const auto& ci = a.col_idx();
    const auto& va = a.values();
    for (int r = 0; r < a.rows(); ++r)
        for (int k = rp[r]; k < rp[r + 1]; ++k) m(r, ci[k]) = va[k];
    return m;
}

Vec multiply(const DenseMatrix& a, const Vec& x) {
    assert(static_cast<int>(x.size()) == a.cols());
    Vec y(static_cast<std::size_t>(a.rows()), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

DenseMatrix cholesky_factor(const DenseMatrix& a, const char* name, double pivot_floor,
                            double* min_pivot) {
    assert(a.rows() == a.cols());
    const int n = a.rows();
    DenseMatrix l(n, n);
    double smallest = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        double d = a(k, k);
        for (int j = 0; j < k; ++j) d -= l(k, j) * l(k, j);
        if (!(d > pivot_floor) || !std::isfinite(d))
            throw NotSpdError(std::string(name) + " not SPD");
        smallest = std::min(smallest, d);
        const double lkk = std::sqrt(d);
        l(k, k) = lkk;
        for (int i = k + 1; i < n; ++i) {
            double s = a(i, k);
            for (int j = 0; j < k; ++j) s -= l(i, j) * l(k, j);
            l(i, k) = s / lkk;
        }
    }
    if (min_pivot) *min_pivot = smallest;
    return l;
}

namespace {

double sign_transfer(double magnitude, double carrier) {
    return carrier >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude);
}

// Householder reduction of the symmetric matrix stored in z to tridiagonal
// form; z is overwritten with the accumulated orthogonal transformation.
// On return z^T A z = tridiag(d, e) with e[0] unused.
void tridiagonalize(DenseMatrix& z, std::vector<double>& d, std::vector<double>& e) {
    const int n = z.rows();
    d.assign(static_cast<std::size_t>(n), 0.0);
    e.assign(static_cast<std::size_t>(n), 0.0);

    for (int i = n - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0;
        double scale = 0.0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::abs(z(i, k));
            if (scale == 0.0) {
                e[i] = z(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    z(i, k) /= scale;
                    h += z(i, k) * z(i, k);
                }
                double f = z(i, l);
                double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                z(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    z(j, i) = z(i, j) / h;
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += z(j, k) * z(i, k);
                    for (int k = j + 1; k <= l; ++k) g += z(k, j) * z(i, k);
                    e[j] = g / h;
                    f += e[j] * z(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = z(i, j);
                    g = e[j] - hh * f;
                    e[j] = g;
                    for (int k = 0; k <= j; ++k) z(j, k) -= f * e[k] + g * z(i, k);
                }
            }
        } else {
            e[i] = z(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        const int l = i - 1;
        if (d[i] != 0.0) {
            for (int j = 0; j <= l; ++j) {
                double g = 0.0;
                for (int k = 0; k <= l; ++k) g += z(i, k) * z(k, j);
                for (int k = 0; k <= l; ++k) z(k, j) -= g * z(k, i);
            }
        }
        d[i] = z(i, i);
        z(i, i) = 1.0;
        for (int j = 0; j <= l; ++j) {
            z(j, i) = 0.0;
            z(i, j) = 0.0;
        }
    }
}

// Implicit-shift QL on the tridiagonal (d, e); the rotations are applied to
// the columns of z so its columns end up as eigenvectors.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, DenseMatrix& z) {
    const int n = static_cast<int>(d.size());
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (iter++ == 60) throw NumericalError("symmetric eigensolver failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + sign_transfer(r, g));
                double s = 1.0;
                double c = 1.0;
                double p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        f = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * f;
                        z(k, i) = c * z(k, i) - s * f;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

void canonical_sign(DenseMatrix& z, int col) {
    int arg = 0;
    double best = 0.0;
    for (int i = 0; i < z.rows(); ++i) {
        const double v = std::abs(z(i, col));
        if (v > best) {
            best = v;
            arg = i;
        }
    }
    if (z(arg, col) < 0.0)
        for (int i = 0; i < z.rows(); ++i) z(i, col) = -z(i, col);
}

} // namespace

DenseEigenResult sym_eig(DenseMatrix a) {
    assert(a.rows() == a.cols());
    const int n = a.rows();
    DenseEigenResult out;
    if (n == 0) return out;

    std::vector<double> d, e;
    if (n == 1) {
        d = {a(0, 0)};
        a(0, 0) = 1.0;
    } else {
        tridiagonalize(a, d, e);
        tridiagonal_ql(d, e, a);
    }

    // ascending eigenvalue order, stable under ties
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return d[i] < d[j]; });

    out.eigenvalues.resize(static_cast<std::size_t>(n));
    out.eigenvectors = DenseMatrix(n, n);
    for (int j = 0; j < n; ++j) {
        out.eigenvalues[j] = d[order[j]];
        for (int i = 0; i < n; ++i) out.eigenvectors(i, j) = a(i, order[j]);
        canonical_sign(out.eigenvectors, j);
    }
    return out;
}

DenseEigenResult solve_gevp_dense(const DenseMatrix& a, const DenseMatrix& m, int count) {
    if (a.rows() != a.cols() || m.rows() != m.cols() || a.rows() != m.rows())
        throw Error("solve_gevp_dense: dimension mismatch");
    const int n = a.rows();
    if (count < 1 || count > n) throw Error("solve_gevp_dense: count out of range");

    const DenseMatrix l = cholesky_factor(m, "mass matrix");

    // C = L^{-1} A L^{-T}, via two triangular solves.
    DenseMatrix w(n, n); // w = L^{-1} A
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            double s = a(i, j);
            for (int k = 0; k < i; ++k) s -= l(i, k) * w(k, j);
            w(i, j) = s / l(i, i);
        }
    }
    DenseMatrix c(n, n); // rows: L c_i^T = w_i^T
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double s = w(i, j);
            for (int k = 0; k < j; ++k) s -= l(j, k) * c(i, k);
            c(i, j) = s / l(j, j);
        }
    }
    // symmetrize against roundoff before the eigensolve
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = 0.5 * (c(i, j) + c(j, i));
            c(i, j) = v;
            c(j, i) = v;
        }

    DenseEigenResult eig = sym_eig(std::move(c));

    // back-transform: x = L^{-T} y, then rescale so x^T A x = 1 when the
    // eigenvalue is positive (x^T M x = 1 falls out of the eigensolve).
    DenseEigenResult out;
    out.eigenvalues.assign(eig.eigenvalues.begin(), eig.eigenvalues.begin() + count);
    out.eigenvectors = DenseMatrix(n, count);
    Vec x(static_cast<std::size_t>(n));
    for (int j = 0; j < count; ++j) {
        for (int i = n - 1; i >= 0; --i) {
            double s = eig.eigenvectors(i, j);
            for (int k = i + 1; k < n; ++k) s -= l(k, i) * x[k];
            x[i] = s / l(i, i);
        }
        const double lambda = out.eigenvalues[j];
        if (lambda > 0.0) {
            const double inv = 1.0 / std::sqrt(lambda);
            for (double& v : x) v *= inv;
        }
        out.eigenvectors.set_column(j, x);
        canonical_sign(out.eigenvectors, j);
    }
    return out;
}

} // namespace paseig
