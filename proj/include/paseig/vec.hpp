#pragma once

#include <cstddef>
#include <vector>

namespace paseig {

using Vec = std::vector<double>;

// All reductions run in fixed left-to-right order; results are reproducible
// bit for bit on the same binary regardless of thread count.
double dot(const Vec& x, const Vec& y);
double norm2(const Vec& x);

void axpy(double alpha, const Vec& x, Vec& y); // y += alpha*x
void scal(double alpha, Vec& x);

Vec zeros(std::size_t n);
bool all_finite(const Vec& x);

} // namespace paseig
