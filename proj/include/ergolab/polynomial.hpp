#pragma once

#include <span>
#include <vector>

// Dense real polynomials stored as ascending coefficient lists c[0] + c[1] u + ...
namespace ergolab::poly {

double eval(std::span<const double> c, double u);

/// Coefficients of v -> p(v + delta).
std::vector<double> taylor_shift(std::span<const double> c, double delta);

std::vector<double> derivative(std::span<const double> c);

std::vector<double> multiply(std::span<const double> a, std::span<const double> b);

/// Exact integral of p over [u0, u1].
double integral(std::span<const double> c, double u0, double u1);

/// All real roots in [a, b], sorted. Isolation recurses through derivatives so
/// every sign change is bracketed by monotone segments; tangential (even
/// multiplicity) roots are reported only when hit exactly.
std::vector<double> roots_in(std::span<const double> c, double a, double b);

/// max of p over the closed interval [a, b].
double max_on(std::span<const double> c, double a, double b);

}  // namespace ergolab::poly
