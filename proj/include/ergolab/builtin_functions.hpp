#pragma once

#include <cstddef>
#include <vector>

#include "ergolab/rng.hpp"
#include "ergolab/vector_function.hpp"

namespace ergolab::builtin {

/// f_j(x) = offsets[j] + slopes[j] * x on [0,1). Empty lists pick the
/// defaults slopes (1, -1, 1, ...) and offsets (0, 1, 0, ...), so d = 2 gives (x, 1 - x).
VectorFunction sawtooth(std::size_t dim, std::vector<double> slopes = {}, std::vector<double> offsets = {});

/// f_j(x) = amplitudes[j] * (1 - |2x - 1|); default amplitudes 1, -1/2, 1/3, ...
VectorFunction hat(std::size_t dim, std::vector<double> amplitudes = {});

/// f_j(x) = amplitudes[j] * sin(2 pi (frequencies[j] x + phases[j])), sampled
/// to a piecewise cubic within 1e-8. Defaults: amplitude 1, frequency j+1, phase 0.
VectorFunction smooth(std::size_t dim, std::vector<double> amplitudes = {},
                      std::vector<double> frequencies = {}, std::vector<double> phases = {});

/// Random piecewise polynomial on the circle: `pieces` pieces with uniform
/// random breakpoints and local coefficients uniform in [-1, 1].
VectorFunction random_piecewise(Rng& rng, std::size_t dim, std::size_t pieces, int degree);

/// Random atom table with entries uniform in [-1, 1].
VectorFunction random_atoms(Rng& rng, const SpacePtr& space, std::size_t dim);

/// random_piecewise on the circle, random_atoms elsewhere.
VectorFunction random_function(Rng& rng, const SpacePtr& space, std::size_t dim, std::size_t pieces, int degree);

}  // namespace ergolab::builtin
