#include "paseig/assembly.hpp"

#include <cassert>
#include <cmath>

#include "paseig/errors.hpp"

namespace paseig {

ProblemCoefficients constant_coefficients() {
    ProblemCoefficients c;
    c.diffusion = [](const std::array<double, 3>&) {
        return std::array<double, 9>{1, 0, 0, 0, 1, 0, 0, 0, 1};
    };
    c.potential = [](const std::array<double, 3>&) { return 0.0; };
    c.laplace_scale = 1.0;
    return c;
}

namespace {

// barycentric quadrature, exact for quadratic integrands
struct QuadRule {
    int points;
    std::array<std::array<double, 4>, 4> bary;
    double weight; // fraction of the cell volume per point
};

const QuadRule& quad_rule(int dim) {
    static const QuadRule tri{3,
                              {{{0.5, 0.5, 0.0, 0.0}, {0.0, 0.5, 0.5, 0.0}, {0.5, 0.0, 0.5, 0.0}, {}}},
                              1.0 / 3.0};
    // Stroud rule for the tetrahedron
    static const double a = 0.58541019662496845;
    static const double b = 0.13819660112501051;
    static const QuadRule tet{4,
                              {{{a, b, b, b}, {b, a, b, b}, {b, b, a, b}, {b, b, b, a}}},
                              0.25};
    return dim == 2 ? tri : tet;
}

void invert_transpose(const double* j, int dim, double det, double* jinv_t) {
    if (dim == 2) {
        // j = [[j0 j1],[j2 j3]], inv = adj/det, transpose of inverse
        jinv_t[0] = j[3] / det;
        jinv_t[1] = -j[2] / det;
        jinv_t[2] = -j[1] / det;
        jinv_t[3] = j[0] / det;
    } else {
        const double c00 = j[4] * j[8] - j[5] * j[7];
        const double c01 = j[5] * j[6] - j[3] * j[8];
        const double c02 = j[3] * j[7] - j[4] * j[6];
        const double c10 = j[2] * j[7] - j[1] * j[8];
        const double c11 = j[0] * j[8] - j[2] * j[6];
        const double c12 = j[1] * j[6] - j[0] * j[7];
        const double c20 = j[1] * j[5] - j[2] * j[4];
        const double c21 = j[2] * j[3] - j[0] * j[5];
        const double c22 = j[0] * j[4] - j[1] * j[3];
        // inverse = adj^T/det; transpose of the inverse = adj/det
        jinv_t[0] = c00 / det;
        jinv_t[1] = c01 / det;
        jinv_t[2] = c02 / det;
        jinv_t[3] = c10 / det;
        jinv_t[4] = c11 / det;
        jinv_t[5] = c12 / det;
        jinv_t[6] = c20 / det;
        jinv_t[7] = c21 / det;
        jinv_t[8] = c22 / det;
    }
}

} // namespace

void element_matrices(const Mesh& mesh, int c, const ProblemCoefficients& coeffs,
                      std::array<double, 16>& a_loc, std::array<double, 16>& m_loc) {
    const int dim = mesh.dim;
    const int nv = dim + 1;
    const int* cell = mesh.cell(c);
    const double* p0 = mesh.vertex(cell[0]);

    // jacobian columns are the edge vectors from vertex 0
    double j[9] = {0};
    for (int col = 0; col < dim; ++col) {
        const double* pc = mesh.vertex(cell[col + 1]);
        for (int row = 0; row < dim; ++row) j[row * dim + col] = pc[row] - p0[row];
    }
    double det;
    if (dim == 2) {
        det = j[0] * j[3] - j[1] * j[2];
    } else {
        det = j[0] * (j[4] * j[8] - j[5] * j[7]) - j[1] * (j[3] * j[8] - j[5] * j[6]) +
              j[2] * (j[3] * j[7] - j[4] * j[6]);
    }
    if (det == 0.0 || !std::isfinite(det)) throw NumericalError("assembly: degenerate cell");
    const double vol = std::abs(det) / (dim == 2 ? 2.0 : 6.0);

    double jinv_t[9];
    invert_transpose(j, dim, det, jinv_t);

    // grad phi_i: columns of J^{-T} for i >= 1, the negated sum for i = 0
    double grad[4][3] = {{0}};
    for (int i = 1; i < nv; ++i)
        for (int d = 0; d < dim; ++d) {
            grad[i][d] = jinv_t[d * dim + (i - 1)];
            grad[0][d] -= grad[i][d];
        }

    a_loc.fill(0.0);
    m_loc.fill(0.0);
    const QuadRule& rule = quad_rule(dim);
    const double w = rule.weight * vol;

    for (int q = 0; q < rule.points; ++q) {
        std::array<double, 3> xq{0, 0, 0};
        for (int i = 0; i < nv; ++i)
            for (int d = 0; d < dim; ++d) xq[d] += rule.bary[q][i] * mesh.vertex(cell[i])[d];

        // the tensor is stored as a fixed 3x3 block; 2D uses its upper-left 2x2
        const std::array<double, 9> diff = coeffs.diffusion(xq);
        double dmax = 1.0;
        for (int r = 0; r < dim; ++r)
            for (int s = 0; s < dim; ++s) dmax = std::max(dmax, std::abs(diff[r * 3 + s]));
        for (int r = 0; r < dim; ++r)
            for (int s = r + 1; s < dim; ++s)
                if (std::abs(diff[r * 3 + s] - diff[s * 3 + r]) > 1e-12 * dmax)
                    throw NumericalError("assembly: diffusion tensor not symmetric");

        const double pot = coeffs.potential(xq);
        if (pot < 0.0) throw NumericalError("assembly: negative potential");

        double dg[4][3]; // diffusion applied to each gradient
        for (int i = 0; i < nv; ++i)
            for (int r = 0; r < dim; ++r) {
                double s = 0.0;
                for (int col = 0; col < dim; ++col) s += diff[r * 3 + col] * grad[i][col];
                dg[i][r] = s;
            }

        for (int i = 0; i < nv; ++i)
            for (int k = 0; k < nv; ++k) {
                double stiff = 0.0;
                for (int d = 0; d < dim; ++d) stiff += dg[i][d] * grad[k][d];
                const double mass = rule.bary[q][i] * rule.bary[q][k];
                a_loc[i * 4 + k] += w * (coeffs.laplace_scale * stiff + pot * mass);
                m_loc[i * 4 + k] += w * mass;
            }
    }
}

AssembledPair assemble_level(const Mesh& mesh, const ProblemCoefficients& coeffs) {
    const int n = mesh.num_interior;
    const int nv = mesh.verts_per_cell();
    std::vector<Triplet> ta, tm;
    ta.reserve(static_cast<std::size_t>(mesh.num_cells()) * nv * nv);
    tm.reserve(ta.capacity());

    std::array<double, 16> a_loc, m_loc;
    for (int c = 0; c < mesh.num_cells(); ++c) {
        element_matrices(mesh, c, coeffs, a_loc, m_loc);
        const int* cell = mesh.cell(c);
        for (int i = 0; i < nv; ++i) {
            const int gi = mesh.interior_index[cell[i]];
            if (gi < 0) continue;
            for (int k = 0; k < nv; ++k) {
                const int gk = mesh.interior_index[cell[k]];
                if (gk < 0) continue;
                ta.push_back({gi, gk, a_loc[i * 4 + k]});
                tm.push_back({gi, gk, m_loc[i * 4 + k]});
            }
        }
    }
    return {SparseMatrix::from_triplets(n, n, ta), SparseMatrix::from_triplets(n, n, tm)};
}

SparseMatrix build_prolongation(const MeshHierarchy& hierarchy, int level) {
    assert(level >= 1 && level < hierarchy.num_levels());
    const Mesh& fine = hierarchy.levels[level];
    const Mesh& coarse = hierarchy.levels[level - 1];
    const auto& parents = hierarchy.parent_edges[level];

    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(fine.num_interior) * 2);
    for (int v = 0; v < fine.num_vertices(); ++v) {
        const int r = fine.interior_index[v];
        if (r < 0) continue;
        const ParentEdge& pe = parents[v];
        if (pe.is_copy()) {
            const int ic = coarse.interior_index[pe.v0];
            assert(ic >= 0); // same coordinates, same boundary status
            t.push_back({r, ic, 1.0});
        } else {
            for (int p : {pe.v0, pe.v1}) {
                const int ic = coarse.interior_index[p];
                if (ic >= 0) t.push_back({r, ic, 0.5});
            }
        }
    }
    return SparseMatrix::from_triplets(fine.num_interior, coarse.num_interior, t);
}

LevelOperators build_level_operators(const MeshHierarchy& hierarchy,
                                     const ProblemCoefficients& coeffs) {
    LevelOperators ops;
    ops.prolongation.emplace_back();
    for (int k = 0; k < hierarchy.num_levels(); ++k) {
        AssembledPair p = assemble_level(hierarchy.levels[k], coeffs);
        ops.stiffness.push_back(std::move(p.stiffness));
        ops.mass.push_back(std::move(p.mass));
        if (k >= 1) ops.prolongation.push_back(build_prolongation(hierarchy, k));
    }
    return ops;
}

Vec prolongate(const LevelOperators& ops, int from, int to, const Vec& x, WorkCounters* counters) {
    assert(from <= to && to < ops.num_levels());
    Vec y = x;
    for (int k = from + 1; k <= to; ++k) y = spmv(ops.prolongation[k], y, counters);
    return y;
}

Vec restrict_to(const LevelOperators& ops, int from, int to, const Vec& x, WorkCounters* counters) {
    assert(to <= from && from < ops.num_levels());
    Vec y = x;
    for (int k = from; k > to; --k) y = spmv_transpose(ops.prolongation[k], y, counters);
    return y;
}

} // namespace paseig
