#include "mollifem/noise.hpp"

#include "mollifem/errors.hpp"

#include <random>

namespace mollifem {

namespace {

// splitmix64 finaliser
std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t k)
{
    return mix64(master ^ mix64(k + 1));
}

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b)
{
    return substream_seed(substream_seed(master, a), b);
}

Eigen::VectorXd gaussian_vector(const NoiseModel& model, int n, std::uint64_t draw_index)
{
    if (n < 1)
        throw ValidationError("gaussian_vector: n must be positive");
    std::mt19937_64 engine(substream_seed(model.seed, draw_index));
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i)
        out[i] = normal(engine);
    return out;
}

} // namespace mollifem
