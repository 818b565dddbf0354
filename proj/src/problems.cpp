#include "paseig/problems.hpp"

#include <algorithm>
#include <cmath>

#include "paseig/errors.hpp"

namespace paseig {

const char* problem_name(ProblemId id) {
    switch (id) {
    case ProblemId::laplace2d: return "laplace2d";
    case ProblemId::laplace3d: return "laplace3d";
    case ProblemId::variable_coeff: return "variable_coeff";
    case ProblemId::harmonic_box: return "harmonic_box";
    }
    return "?";
}

ProblemId parse_problem(const std::string& name) {
    if (name == "laplace2d") return ProblemId::laplace2d;
    if (name == "laplace3d") return ProblemId::laplace3d;
    if (name == "variable_coeff") return ProblemId::variable_coeff;
    if (name == "harmonic_box") return ProblemId::harmonic_box;
    throw ConfigError("unknown problem '" + name +
                      "' (expected laplace2d, laplace3d, variable_coeff or harmonic_box)");
}

int default_dimension(ProblemId id) {
    switch (id) {
    case ProblemId::laplace2d: return 2;
    case ProblemId::laplace3d: return 3;
    case ProblemId::variable_coeff: return 3;
    case ProblemId::harmonic_box: return 2;
    }
    return 2;
}

bool dimension_allowed(ProblemId id, int dim) {
    if (id == ProblemId::harmonic_box) return dim == 2 || dim == 3;
    return dim == default_dimension(id);
}

Box default_box(ProblemId id, int dim) {
    Box b;
    b.dim = dim;
    if (id == ProblemId::harmonic_box) {
        for (int d = 0; d < dim; ++d) {
            b.lo[d] = -4.0;
            b.hi[d] = 4.0;
        }
    } else {
        for (int d = 0; d < dim; ++d) {
            b.lo[d] = 0.0;
            b.hi[d] = 1.0;
        }
    }
    return b;
}

ProblemCoefficients make_coefficients(ProblemId id, int dim) {
    if (!dimension_allowed(id, dim)) throw ConfigError("problem does not support this dimension");
    ProblemCoefficients c = constant_coefficients();
    switch (id) {
    case ProblemId::laplace2d:
    case ProblemId::laplace3d:
        break;
    case ProblemId::variable_coeff:
        c.diffusion = [](const std::array<double, 3>& x) {
            std::array<double, 9> d{};
            const double v[3] = {x[0] - 0.5, x[1] - 0.5, x[2] - 0.5};
            for (int r = 0; r < 3; ++r)
                for (int s = 0; s < 3; ++s) d[r * 3 + s] = (r == s ? 1.0 : 0.0) + v[r] * v[s];
            return d;
        };
        c.potential = [](const std::array<double, 3>& x) {
            return std::exp((x[0] - 0.5) * (x[1] - 0.5) * (x[2] - 0.5));
        };
        break;
    case ProblemId::harmonic_box:
        c.laplace_scale = 0.5;
        c.potential = [dim](const std::array<double, 3>& x) {
            double s = 0.0;
            for (int d = 0; d < dim; ++d) s += x[d] * x[d];
            return 0.5 * s;
        };
        break;
    }
    return c;
}

bool has_analytic_spectrum(ProblemId id) { return id != ProblemId::variable_coeff; }

std::vector<double> analytic_spectrum(ProblemId id, int dim, const Box& box, int count) {
    if (!has_analytic_spectrum(id)) throw Error("problem has no closed-form spectrum");
    if (count < 1) return {};

    const bool harmonic = id == ProblemId::harmonic_box;
    const double pi = 3.14159265358979323846;

    // enlarge the per-axis index range until adding one more index cannot
    // produce anything below the current count-th value
    int range = 8;
    std::vector<double> vals;
    for (;;) {
        vals.clear();
        if (dim == 2) {
            for (int p = 1; p <= range; ++p)
                for (int q = 1; q <= range; ++q)
                    vals.push_back(harmonic
                                       ? (p - 1) + (q - 1) + 1.0
                                       : pi * pi * (p * p / (box.extent(0) * box.extent(0)) +
                                                    q * q / (box.extent(1) * box.extent(1))));
        } else {
            for (int p = 1; p <= range; ++p)
                for (int q = 1; q <= range; ++q)
                    for (int r = 1; r <= range; ++r)
                        vals.push_back(harmonic
                                           ? (p - 1) + (q - 1) + (r - 1) + 1.5
                                           : pi * pi *
                                                 (p * p / (box.extent(0) * box.extent(0)) +
                                                  q * q / (box.extent(1) * box.extent(1)) +
                                                  r * r / (box.extent(2) * box.extent(2))));
        }
        std::sort(vals.begin(), vals.end());
        if (static_cast<int>(vals.size()) < count) {
            range *= 2;
            continue;
        }
        // smallest value only reachable with an index beyond `range`
        double next_axis;
        if (harmonic) {
            next_axis = static_cast<double>(range) + (dim == 2 ? 1.0 : 1.5);
        } else {
            double emax = 0.0;
            for (int d = 0; d < dim; ++d) emax = std::max(emax, box.extent(d));
            next_axis = pi * pi * (static_cast<double>(range) + 1.0) *
                        (static_cast<double>(range) + 1.0) / (emax * emax);
        }
        if (vals[static_cast<std::size_t>(count) - 1] < next_axis) break;
        range *= 2;
    }
    vals.resize(static_cast<std::size_t>(count));
    return vals;
}

} // namespace paseig
