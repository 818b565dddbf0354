#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace paseig {

struct Box {
    int dim = 2;
    std::array<double, 3> lo{0.0, 0.0, 0.0};
    std::array<double, 3> hi{1.0, 1.0, 1.0};

    double extent(int axis) const { return hi[axis] - lo[axis]; }
};

// Simplicial mesh with positively oriented cells. Vertices carry a boundary
// flag and a compacted interior index (-1 on the boundary); all linear
// algebra lives on the interior indices.
struct Mesh {
    int dim = 0;
    Box box;
    std::vector<double> coords;      // num_vertices * dim
    std::vector<int> cells;          // num_cells * (dim + 1)
    std::vector<char> boundary;      // per vertex
    std::vector<int> interior_index; // per vertex, -1 on boundary
    int num_interior = 0;

    int verts_per_cell() const { return dim + 1; }
    int num_vertices() const { return static_cast<int>(coords.size()) / dim; }
    int num_cells() const { return static_cast<int>(cells.size()) / verts_per_cell(); }

    const double* vertex(int v) const { return coords.data() + static_cast<std::size_t>(v) * dim; }
    const int* cell(int c) const { return cells.data() + static_cast<std::size_t>(c) * verts_per_cell(); }

    double cell_volume(int c) const; // unsigned
    double cell_volume_signed(int c) const;
};

// Fine vertex v came from coarse vertex parents (v0 == v1) or is the
// midpoint of the coarse edge (v0, v1), v0 < v1. Identity across levels is
// pure index bookkeeping; coordinates are never matched.
struct ParentEdge {
    int v0 = -1;
    int v1 = -1;
    bool is_copy() const { return v0 == v1; }
};

struct RefinedMesh {
    Mesh mesh;
    std::vector<ParentEdge> parent_edges; // per fine vertex
};

// Levels ordered coarse to fine; level 0 is the coarse space the eigenpair
// corrections project onto. parent_edges[k] maps level-k vertices to
// level-(k-1) parents; entry 0 is empty.
struct MeshHierarchy {
    std::vector<Mesh> levels;
    std::vector<std::vector<ParentEdge>> parent_edges;
    int refinement_factor = 2;

    int num_levels() const { return static_cast<int>(levels.size()); }
    const Mesh& finest() const { return levels.back(); }
};

inline constexpr std::int64_t kDefaultMaxInteriorDofs = 2'000'000;

// Uniform simplicial mesh of the box with `divisions` segments per axis.
// 2D: two triangles per grid square. 3D: six tetrahedra per grid cube
// (Kuhn split), which red refinement reproduces on every level.
Mesh build_coarse_mesh(const Box& box, int divisions);

// One uniform red refinement: every edge is bisected, each triangle splits
// into 4 children, each tetrahedron into 8 (octahedron cut along a fixed
// diagonal). Nested vertices keep their coarse index.
RefinedMesh refine_uniform(const Mesh& coarse);

// num_levels meshes, level k obtained by k refinements of the coarse mesh.
// Rejects num_levels < 1 and any configuration whose finest interior DOF
// count would exceed max_interior_dofs.
MeshHierarchy build_hierarchy(const Box& box, int divisions, int num_levels,
                              std::int64_t max_interior_dofs = kDefaultMaxInteriorDofs);

// Plain-text dump: "dim num_vertices num_cells", coordinate lines, cell
// lines. Round-trips through 17 significant digits.
void write_mesh_text(const Mesh& mesh, std::ostream& os);

} // namespace paseig
