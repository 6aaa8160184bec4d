#include "mollifem/noise.hpp"

#include "mollifem/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace mollifem;

TEST_CASE("gaussian vectors are a pure function of seed and draw index")
{
    const NoiseModel model{1.0, 42};
    const Eigen::VectorXd a = gaussian_vector(model, 1000, 7);
    const Eigen::VectorXd b = gaussian_vector(model, 1000, 7);
    CHECK(a == b);

    const Eigen::VectorXd c = gaussian_vector(model, 1000, 8);
    CHECK(a != c);
    const Eigen::VectorXd d = gaussian_vector(NoiseModel{1.0, 43}, 1000, 7);
    CHECK(a != d);

    CHECK_THROWS_AS(gaussian_vector(model, 0, 0), ValidationError);
}

TEST_CASE("sample moments look standard normal")
{
    const NoiseModel model{1.0, 2024};
    double sum = 0.0, sum_sq = 0.0;
    const int chunks = 100, per_chunk = 10000;
    for (int k = 0; k < chunks; ++k) {
        const Eigen::VectorXd v = gaussian_vector(model, per_chunk, static_cast<std::uint64_t>(k));
        sum += v.sum();
        sum_sq += v.squaredNorm();
    }
    const double count = static_cast<double>(chunks) * per_chunk;
    const double mean = sum / count;
    const double var = sum_sq / count - mean * mean;
    CHECK(std::abs(mean) <= 0.005);
    CHECK(std::abs(var - 1.0) <= 0.01);
}

TEST_CASE("distinct substreams are nearly uncorrelated")
{
    const NoiseModel model{1.0, 5};
    const int n = 10000;
    const Eigen::VectorXd a = gaussian_vector(model, n, 0);
    const Eigen::VectorXd b = gaussian_vector(model, n, 1);
    const double corr = a.dot(b) / (a.norm() * b.norm());
    CHECK(std::abs(corr) < 0.05);
}

TEST_CASE("substream derivation is order independent")
{
    CHECK(substream_seed(1, 2, 3) == substream_seed(substream_seed(1, 2), 3));
    CHECK(substream_seed(1, 2) != substream_seed(2, 1));
    CHECK(substream_seed(1, 2, 3) != substream_seed(1, 3, 2));
}
