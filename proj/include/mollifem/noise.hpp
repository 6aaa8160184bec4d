#ifndef MOLLIFEM_NOISE_HPP
#define MOLLIFEM_NOISE_HPP

#include <Eigen/Core>

#include <cstdint>

namespace mollifem {

/// Additive measurement noise: independent N(0,1) draws scaled by sigma.
struct NoiseModel {
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

/// Splittable substream derivation; results do not depend on the order in
/// which substreams are consumed.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t k);
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);

/// n i.i.d. standard normal values, a pure function of (seed, draw_index, n).
Eigen::VectorXd gaussian_vector(const NoiseModel& model, int n, std::uint64_t draw_index);

} // namespace mollifem

#endif
