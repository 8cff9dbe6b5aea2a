#pragma once

#include <cstdint>
#include <functional>

#include "mswr/block_matrix.hpp"

namespace mswr {

// Power iteration on an arbitrary linear map. Returns the norm of the last
// image of the normalized iterate, so for a dominant eigenvalue lambda the
// result converges to |lambda|. A zero map yields 0, an overflowing one inf.
double spectral_radius_estimate(const std::function<Vector(const Vector&)>& apply, int m,
                                int iterations, std::uint64_t seed);

}  // namespace mswr
