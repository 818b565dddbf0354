#include "paseig/mesh.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <unordered_map>

#include "paseig/errors.hpp"

namespace paseig {

namespace {

double det2(const double* a, const double* b) { return a[0] * b[1] - a[1] * b[0]; }

double det3(const double* a, const double* b, const double* c) {
    return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
           a[2] * (b[0] * c[1] - b[1] * c[0]);
}

double signed_volume(const Mesh& m, const int* cell) {
    const double* p0 = m.vertex(cell[0]);
    if (m.dim == 2) {
        double e1[2], e2[2];
        for (int d = 0; d < 2; ++d) {
            e1[d] = m.vertex(cell[1])[d] - p0[d];
            e2[d] = m.vertex(cell[2])[d] - p0[d];
        }
        return 0.5 * det2(e1, e2);
    }
    double e1[3], e2[3], e3[3];
    for (int d = 0; d < 3; ++d) {
        e1[d] = m.vertex(cell[1])[d] - p0[d];
        e2[d] = m.vertex(cell[2])[d] - p0[d];
        e3[d] = m.vertex(cell[3])[d] - p0[d];
    }
    return det3(e1, e2, e3) / 6.0;
}

// Flip the last two vertices when the cell is negatively oriented. Keeps
// every cell positive without touching the vertex set.
void orient_positive(Mesh& m) {
    const int vpc = m.verts_per_cell();
    for (int c = 0; c < m.num_cells(); ++c) {
        int* cell = m.cells.data() + static_cast<std::size_t>(c) * vpc;
        if (signed_volume(m, cell) < 0.0) std::swap(cell[vpc - 2], cell[vpc - 1]);
    }
}

void flag_boundary(Mesh& m) {
    const int nv = m.num_vertices();
    m.boundary.assign(static_cast<std::size_t>(nv), 0);
    m.interior_index.assign(static_cast<std::size_t>(nv), -1);
    m.num_interior = 0;
    for (int v = 0; v < nv; ++v) {
        const double* x = m.vertex(v);
        bool on = false;
        for (int d = 0; d < m.dim && !on; ++d) {
            const double tol = 1e-12 * std::max(1.0, std::abs(m.box.extent(d)));
            on = std::abs(x[d] - m.box.lo[d]) <= tol || std::abs(x[d] - m.box.hi[d]) <= tol;
        }
        m.boundary[v] = on ? 1 : 0;
        if (!on) m.interior_index[v] = m.num_interior++;
    }
}

// The six tetrahedra of the Kuhn split of a unit cube, as paths from corner
// (0,0,0) to (1,1,1) along axis permutations. Red refinement maps this
// pattern onto itself, so the hierarchy stays uniform in shape.
constexpr int kAxisPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                  {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

} // namespace

double Mesh::cell_volume(int c) const { return std::abs(signed_volume(*this, cell(c))); }
double Mesh::cell_volume_signed(int c) const { return signed_volume(*this, cell(c)); }

Mesh build_coarse_mesh(const Box& box, int divisions) {
    if (box.dim != 2 && box.dim != 3) throw Error("mesh: dimension must be 2 or 3");
    if (divisions < 1) throw Error("mesh: divisions must be >= 1");
    for (int d = 0; d < box.dim; ++d)
        if (!(box.hi[d] > box.lo[d])) throw Error("mesh: box extents must be positive");

    Mesh m;
    m.dim = box.dim;
    m.box = box;
    const int n = divisions + 1;

    if (box.dim == 2) {
        m.coords.reserve(static_cast<std::size_t>(n) * n * 2);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                m.coords.push_back(box.lo[0] + i * box.extent(0) / divisions);
                m.coords.push_back(box.lo[1] + j * box.extent(1) / divisions);
            }
        auto vid = [n](int i, int j) { return j * n + i; };
        for (int j = 0; j < divisions; ++j)
            for (int i = 0; i < divisions; ++i) {
                const int v00 = vid(i, j), v10 = vid(i + 1, j);
                const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
                m.cells.insert(m.cells.end(), {v00, v10, v11});
                m.cells.insert(m.cells.end(), {v00, v11, v01});
            }
    } else {
        m.coords.reserve(static_cast<std::size_t>(n) * n * n * 3);
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    m.coords.push_back(box.lo[0] + i * box.extent(0) / divisions);
                    m.coords.push_back(box.lo[1] + j * box.extent(1) / divisions);
                    m.coords.push_back(box.lo[2] + k * box.extent(2) / divisions);
                }
        auto vid = [n](int i, int j, int k) { return (k * n + j) * n + i; };
        for (int k = 0; k < divisions; ++k)
            for (int j = 0; j < divisions; ++j)
                for (int i = 0; i < divisions; ++i) {
                    int corner[3] = {i, j, k};
                    for (const auto& perm : kAxisPerms) {
                        int p[4][3];
                        for (int d = 0; d < 3; ++d) p[0][d] = corner[d];
                        for (int step = 0; step < 3; ++step) {
                            for (int d = 0; d < 3; ++d) p[step + 1][d] = p[step][d];
                            p[step + 1][perm[step]] += 1;
                        }
                        for (int v = 0; v < 4; ++v)
                            m.cells.push_back(vid(p[v][0], p[v][1], p[v][2]));
                    }
                }
    }
    orient_positive(m);
    flag_boundary(m);
    return m;
}

RefinedMesh refine_uniform(const Mesh& coarse) {
    const int dim = coarse.dim;
    const int nv = coarse.num_vertices();

    RefinedMesh out;
    Mesh& fine = out.mesh;
    fine.dim = dim;
    fine.box = coarse.box;
    fine.coords = coarse.coords;
    out.parent_edges.reserve(static_cast<std::size_t>(nv) * 2);
    for (int v = 0; v < nv; ++v) out.parent_edges.push_back({v, v});

    std::unordered_map<std::int64_t, int> midpoint;
    auto mid = [&](int a, int b) {
        const int lo = std::min(a, b), hi = std::max(a, b);
        const std::int64_t key = static_cast<std::int64_t>(lo) * nv + hi;
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        const int idx = static_cast<int>(out.parent_edges.size());
        midpoint.emplace(key, idx);
        out.parent_edges.push_back({lo, hi});
        for (int d = 0; d < dim; ++d)
            fine.coords.push_back(0.5 * (coarse.vertex(lo)[d] + coarse.vertex(hi)[d]));
        return idx;
    };

    if (dim == 2) {
        fine.cells.reserve(coarse.cells.size() * 4);
        for (int c = 0; c < coarse.num_cells(); ++c) {
            const int* t = coarse.cell(c);
            const int m01 = mid(t[0], t[1]);
            const int m12 = mid(t[1], t[2]);
            const int m02 = mid(t[0], t[2]);
            const int children[4][3] = {{t[0], m01, m02},
                                        {t[1], m12, m01},
                                        {t[2], m02, m12},
                                        {m01, m12, m02}};
            for (const auto& ch : children) fine.cells.insert(fine.cells.end(), ch, ch + 3);
        }
    } else {
        // The octahedron diagonal below is chosen positionally, so the
        // pattern must see each tetrahedron in a storage-order-independent
        // ordering. Sorting by coordinate sum recovers the lattice-path
        // order of the Kuhn tetrahedra this mesh is built from, and that
        // order is reproduced by the children, keeping every level's cells
        // within the same similarity classes.
        auto canonical = [&coarse](const int* cell) {
            std::array<int, 4> t{cell[0], cell[1], cell[2], cell[3]};
            auto key = [&coarse](int v) {
                const double* x = coarse.vertex(v);
                return x[0] + x[1] + x[2];
            };
            std::sort(t.begin(), t.end(), [&](int a, int b) {
                const double ka = key(a), kb = key(b);
                if (ka != kb) return ka < kb;
                const double* xa = coarse.vertex(a);
                const double* xb = coarse.vertex(b);
                for (int d = 0; d < 3; ++d)
                    if (xa[d] != xb[d]) return xa[d] < xb[d];
                return a < b;
            });
            return t;
        };
        fine.cells.reserve(coarse.cells.size() * 8);
        for (int c = 0; c < coarse.num_cells(); ++c) {
            const std::array<int, 4> tc = canonical(coarse.cell(c));
            const int* t = tc.data();
            const int m01 = mid(t[0], t[1]), m02 = mid(t[0], t[2]), m03 = mid(t[0], t[3]);
            const int m12 = mid(t[1], t[2]), m13 = mid(t[1], t[3]), m23 = mid(t[2], t[3]);
            // corner children, then the octahedron cut along the (m02, m13)
            // diagonal; this choice keeps the refinement self-similar.
            const int children[8][4] = {{t[0], m01, m02, m03}, {m01, t[1], m12, m13},
                                        {m02, m12, t[2], m23}, {m03, m13, m23, t[3]},
                                        {m01, m02, m03, m13},  {m01, m02, m12, m13},
                                        {m02, m03, m13, m23},  {m02, m12, m13, m23}};
            for (const auto& ch : children) fine.cells.insert(fine.cells.end(), ch, ch + 4);
        }
    }
    orient_positive(fine);
    flag_boundary(fine);
    return out;
}

MeshHierarchy build_hierarchy(const Box& box, int divisions, int num_levels,
                              std::int64_t max_interior_dofs) {
    if (num_levels < 1) throw Error("mesh: hierarchy needs at least one level");
    if (divisions < 1) throw Error("mesh: divisions must be >= 1");
    if (num_levels > 32) throw MemoryCapError("mesh: hierarchy depth is implausible");

    // Structured box mesh: the finest interior DOF count is predictable, so
    // reject oversized hierarchies before allocating anything.
    const long double finest_div = static_cast<long double>(divisions) *
                                   std::pow(2.0L, static_cast<long double>(num_levels - 1));
    const long double finest_dofs = std::pow(finest_div - 1.0L, static_cast<long double>(box.dim));
    if (finest_dofs > static_cast<long double>(max_interior_dofs)) {
        char buf[256];
        std::snprintf(buf, sizeof(buf),
                      "mesh: finest level would have %.0Lf interior DOFs, exceeding the cap of "
                      "%lld (divisions=%d, levels=%d, dim=%d)",
                      finest_dofs, static_cast<long long>(max_interior_dofs), divisions,
                      num_levels, box.dim);
        throw MemoryCapError(buf);
    }

    MeshHierarchy h;
    h.levels.push_back(build_coarse_mesh(box, divisions));
    h.parent_edges.emplace_back();
    for (int k = 1; k < num_levels; ++k) {
        RefinedMesh r = refine_uniform(h.levels.back());
        h.levels.push_back(std::move(r.mesh));
        h.parent_edges.push_back(std::move(r.parent_edges));
    }
    return h;
}

void write_mesh_text(const Mesh& mesh, std::ostream& os) {
    char buf[64];
    os << mesh.dim << ' ' << mesh.num_vertices() << ' ' << mesh.num_cells() << '\n';
    for (int v = 0; v < mesh.num_vertices(); ++v) {
        for (int d = 0; d < mesh.dim; ++d) {
            std::snprintf(buf, sizeof(buf), "%.17g", mesh.vertex(v)[d]);
            os << (d ? " " : "") << buf;
        }
        os << '\n';
    }
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const int* cell = mesh.cell(c);
        for (int i = 0; i < mesh.verts_per_cell(); ++i) os << (i ? " " : "") << cell[i];
        os << '\n';
    }
}

} // namespace paseig
