#pragma once

#include <string>
#include <vector>

#include "paseig/assembly.hpp"

namespace paseig {

enum class ProblemId { laplace2d, laplace3d, variable_coeff, harmonic_box };

const char* problem_name(ProblemId id);
ProblemId parse_problem(const std::string& name); // throws ConfigError on unknown names

// Natural dimension of the problem; harmonic_box supports both 2 and 3.
int default_dimension(ProblemId id);
bool dimension_allowed(ProblemId id, int dim);
Box default_box(ProblemId id, int dim);

// laplace2d / laplace3d: -div(grad u) = lambda u on the box.
// variable_coeff: diffusion I + (x-c)(x-c)^T around the box center and a
//   smooth positive potential, 3D.
// harmonic_box: -(1/2) laplacian + (1/2)|x|^2, truncated to the box.
ProblemCoefficients make_coefficients(ProblemId id, int dim);

bool has_analytic_spectrum(ProblemId id);

// First `count` exact eigenvalues (with multiplicity) of the continuous
// operator: Dirichlet box modes for the Laplacians, ladder values
// sum(n_i) + dim/2 for the oscillator (the box truncation error is not
// included and is negligible for boxes reaching several decay widths).
std::vector<double> analytic_spectrum(ProblemId id, int dim, const Box& box, int count);

} // namespace paseig
