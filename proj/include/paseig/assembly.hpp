#pragma once

#include <array>
#include <functional>

#include "paseig/mesh.hpp"
#include "paseig/sparse.hpp"

namespace paseig {

// Coefficients of the bilinear form
//   a(u,v) = laplace_scale * (A grad u, grad v) + (potential u, v),
// paired with the mass form b(u,v) = (u,v). The diffusion tensor must be
// symmetric at every quadrature point (checked to 1e-12 relative during
// assembly) and SPD; the potential must be nonnegative.
struct ProblemCoefficients {
    // row-major 3x3 tensor; 2D problems read only the upper-left 2x2 block
    std::function<std::array<double, 9>(const std::array<double, 3>&)> diffusion;
    std::function<double(const std::array<double, 3>&)> potential;
    double laplace_scale = 1.0;
};

ProblemCoefficients constant_coefficients(); // A = I, potential = 0

struct AssembledPair {
    SparseMatrix stiffness;
    SparseMatrix mass;
};

// Element matrices of cell c, one row/column per cell vertex. Quadrature is
// the edge-midpoint rule (2D) or the 4-point interior rule (3D); both are
// exact for quadratic integrands, so the mass matrix is exact and the
// stiffness is exact for affine coefficients.
void element_matrices(const Mesh& mesh, int c, const ProblemCoefficients& coeffs,
                      std::array<double, 16>& a_loc, std::array<double, 16>& m_loc);

// Stiffness and mass on the interior DOFs of a level (homogeneous Dirichlet
// boundary eliminated). Both matrices come out symmetric and the stiffness
// SPD for admissible coefficients.
AssembledPair assemble_level(const Mesh& mesh, const ProblemCoefficients& coeffs);

// Interpolation from level-(k-1) interior DOFs to level-k interior DOFs.
// Copied vertices get weight 1, edge midpoints 1/2 per parent; boundary
// parents contribute nothing.
SparseMatrix build_prolongation(const MeshHierarchy& hierarchy, int level);

// Everything the solver needs per level, assembled once and shared
// read-only across workers.
struct LevelOperators {
    std::vector<SparseMatrix> stiffness;     // per level
    std::vector<SparseMatrix> mass;          // per level
    std::vector<SparseMatrix> prolongation;  // [k]: level k-1 -> level k, [0] empty

    int num_levels() const { return static_cast<int>(stiffness.size()); }
    int dofs(int level) const { return stiffness[level].rows(); }
};

LevelOperators build_level_operators(const MeshHierarchy& hierarchy,
                                     const ProblemCoefficients& coeffs);

// x on level `from` interpolated up to level `to` (from <= to; equal levels
// return x unchanged).
Vec prolongate(const LevelOperators& ops, int from, int to, const Vec& x,
               WorkCounters* counters = nullptr);

// Adjoint of prolongate: y = P^T x from level `from` down to level `to`.
Vec restrict_to(const LevelOperators& ops, int from, int to, const Vec& x,
                WorkCounters* counters = nullptr);

} // namespace paseig
