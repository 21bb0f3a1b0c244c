#include "dopkit/ensembles.hpp"

#include "dopkit/errors.hpp"

#include <algorithm>
#include <cmath>

namespace dopkit {

namespace {

// Uniform deviate in [0,1) built from the top 53 bits: keeps the sampler's
// output independent of library distribution internals.
double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

Configuration sample(const KernelMatrix& km, std::mt19937_64& rng) {
    const int N = km.N, k = km.k;
    Eigen::MatrixXd A = km.K;
    std::vector<char> taken(N, 0);
    Configuration cfg;
    cfg.indices.reserve(k);
    for (int t = 0; t < k; ++t) {
        double total = 0;
        for (int i = 0; i < N; ++i) {
            if (taken[i]) continue;
            const double d = A(i, i);
            if (d < -1e-10) throw numeric_error("negative conditional probability in sampler");
            total += std::max(d, 0.0);
        }
        if (!(total > 0)) throw numeric_error("sampler ran out of probability mass");
        const double u = unit_uniform(rng) * total;
        int pick = -1;
        double acc = 0;
        for (int i = 0; i < N; ++i) {
            if (taken[i]) continue;
            acc += std::max(A(i, i), 0.0);
            if (acc >= u) {
                pick = i;
                break;
            }
        }
        if (pick < 0)
            for (int i = N - 1; i >= 0; --i)
                if (!taken[i]) {
                    pick = i;
                    break;
                }
        const double d = A(pick, pick);
        if (!(d > 0)) throw numeric_error("degenerate pivot in sampler");
        A -= (A.col(pick) * A.row(pick)) / d;
        taken[pick] = 1;
        cfg.indices.push_back(pick);
    }
    std::sort(cfg.indices.begin(), cfg.indices.end());
    return cfg;
}

std::vector<Configuration> sample_many(const KernelMatrix& km, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Configuration> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.push_back(sample(km, rng));
    return out;
}

double expected_count(const KernelMatrix& km, const std::vector<int>& B) {
    double s = 0;
    for (int i : B) {
        if (i < 0 || i >= km.N) throw config_error("node index out of range");
        s += km.K(i, i);
    }
    return s;
}

} // namespace dopkit
