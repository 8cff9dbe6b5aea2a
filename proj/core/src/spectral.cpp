#include "mswr/spectral.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "mswr/errors.hpp"

namespace mswr {

double spectral_radius_estimate(const std::function<Vector(const Vector&)>& apply, int m,
                                int iterations, std::uint64_t seed) {
    if (m < 1) throw ConfigError("spectral radius needs a positive dimension");
    std::mt19937_64 gen(seed);
    // map the top 53 bits to [-1, 1) so start vectors do not depend on the
    // library's distribution implementation
    auto uniform = [&gen]() { return static_cast<double>(gen() >> 11) * 0x1p-52 - 1.0; };
    Vector v(m);
    for (double& x : v) x = uniform();
    double nv = norm2(v);
    if (nv == 0.0) v[0] = nv = 1.0;
    for (double& x : v) x /= nv;

    double radius = 0.0;
    for (int it = 0; it < iterations; ++it) {
        Vector w = apply(v);
        double nw = norm2(w);
        if (!std::isfinite(nw)) return std::numeric_limits<double>::infinity();
        if (nw == 0.0) return 0.0;
        radius = nw;
        for (double& x : w) x /= nw;
        v = std::move(w);
    }
    return radius;
}

}  // namespace mswr
