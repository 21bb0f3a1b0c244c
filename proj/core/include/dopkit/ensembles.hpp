#ifndef DOPKIT_ENSEMBLES_HPP
#define DOPKIT_ENSEMBLES_HPP

#include "dopkit/kernels.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace dopkit {

struct Configuration {
    std::vector<int> indices;   // sorted, distinct, size = kernel rank
};

// Draws one configuration of the determinantal ensemble defined by the
// rank-k projection kernel: sequential conditional sampling, picking each
// next point from the current diagonal and deflating by the Schur
// complement.  A diagonal entry below -1e-10 means the kernel is not a
// projection and raises numeric_error.
Configuration sample(const KernelMatrix& km, std::mt19937_64& rng);

// Seeded batch; identical seed gives an identical batch.
std::vector<Configuration> sample_many(const KernelMatrix& km, int count, std::uint64_t seed);

// Expected number of particles in B: sum of K_ii over B.
double expected_count(const KernelMatrix& km, const std::vector<int>& B);

} // namespace dopkit

#endif
