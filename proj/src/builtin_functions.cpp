#include "ergolab/builtin_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ergolab::builtin {

namespace {

std::vector<double> with_default(std::vector<double> given, std::size_t dim, const char* name,
                                 double (*fallback)(std::size_t)) {
  if (given.empty()) {
    given.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) given[j] = fallback(j);
  }
  if (given.size() != dim) {
    throw std::invalid_argument(std::string(name) + " needs one entry per component");
  }
  return given;
}

}  // namespace

VectorFunction sawtooth(std::size_t dim, std::vector<double> slopes, std::vector<double> offsets) {
  slopes = with_default(std::move(slopes), dim, "slopes", [](std::size_t j) { return j % 2 == 0 ? 1.0 : -1.0; });
  offsets = with_default(std::move(offsets), dim, "offsets", [](std::size_t j) { return j % 2 == 0 ? 0.0 : 1.0; });
  std::vector<double> coeffs(2 * dim);
  for (std::size_t j = 0; j < dim; ++j) {
    coeffs[j] = offsets[j];
    coeffs[dim + j] = slopes[j];
  }
  return VectorFunction::piecewise({0.0, 1.0}, 1, dim, std::move(coeffs));
}

VectorFunction hat(std::size_t dim, std::vector<double> amplitudes) {
  amplitudes = with_default(std::move(amplitudes), dim, "amplitudes", [](std::size_t j) {
    return (j % 2 == 0 ? 1.0 : -1.0) / static_cast<double>(j + 1);
  });
  std::vector<double> coeffs(4 * dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const double a = amplitudes[j];
    coeffs[j] = 0.0;              // piece [0, 1/2): 2a u
    coeffs[dim + j] = 2.0 * a;
    coeffs[2 * dim + j] = a;      // piece [1/2, 1): a - 2a u
    coeffs[3 * dim + j] = -2.0 * a;
  }
  return VectorFunction::piecewise({0.0, 0.5, 1.0}, 1, dim, std::move(coeffs));
}

VectorFunction smooth(std::size_t dim, std::vector<double> amplitudes, std::vector<double> frequencies,
                      std::vector<double> phases) {
  amplitudes = with_default(std::move(amplitudes), dim, "amplitudes", [](std::size_t) { return 1.0; });
  frequencies = with_default(std::move(frequencies), dim, "frequencies",
                             [](std::size_t j) { return static_cast<double>(j + 1); });
  phases = with_default(std::move(phases), dim, "phases", [](std::size_t) { return 0.0; });
  return VectorFunction::sample(dim, [&](double x) {
    Vec v(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      v[j] = amplitudes[j] * std::sin(2.0 * std::numbers::pi * (frequencies[j] * x + phases[j]));
    }
    return v;
  });
}

VectorFunction random_piecewise(Rng& rng, std::size_t dim, std::size_t pieces, int degree) {
  if (pieces == 0) throw std::invalid_argument("random function needs at least one piece");
  std::vector<double> breaks{0.0, 1.0};
  while (breaks.size() < pieces + 1) {
    const double b = rng.uniform();
    if (b > 0.0 && std::find(breaks.begin(), breaks.end(), b) == breaks.end()) breaks.push_back(b);
  }
  std::sort(breaks.begin(), breaks.end());
  std::vector<double> coeffs(pieces * static_cast<std::size_t>(degree + 1) * dim);
  for (double& c : coeffs) c = rng.uniform(-1.0, 1.0);
  return VectorFunction::piecewise(std::move(breaks), degree, dim, std::move(coeffs));
}

VectorFunction random_atoms(Rng& rng, const SpacePtr& space, std::size_t dim) {
  std::vector<double> values(space->atoms() * dim);
  for (double& v : values) v = rng.uniform(-1.0, 1.0);
  return VectorFunction::atoms(space, dim, std::move(values));
}

VectorFunction random_function(Rng& rng, const SpacePtr& space, std::size_t dim, std::size_t pieces, int degree) {
  if (space->is_circle()) return random_piecewise(rng, dim, pieces, degree);
  return random_atoms(rng, space, dim);
}

}  // namespace ergolab::builtin
