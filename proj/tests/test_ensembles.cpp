#include "dopkit/ensembles.hpp"

#include "dopkit/errors.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <vector>

using namespace dopkit;

namespace {

KernelMatrix small_kernel(int N, int k, double p) {
    auto ns = std::make_shared<const NodeSet>(build_nodes(NodeDensity::uniform(0.0, 1.0), N));
    auto lw = log_weight(WeightSpec::krawtchouk(p), ns);
    OrthoBasis b = build_basis_auto(lw, k);
    return cd_kernel(b, k);
}

} // namespace

TEST_CASE("sampled two-particle frequencies match the exact law") {
    auto ns = std::make_shared<const NodeSet>(build_nodes(NodeDensity::uniform(0.0, 1.0), 4));
    auto lw = log_weight(WeightSpec::krawtchouk(0.6), ns);
    OrthoBasis b = build_basis(lw, 3, 256);
    KernelMatrix km = cd_kernel(b, 2);

    // exact law: squared spacing times weights, normalized
    std::map<std::pair<int, int>, double> exact;
    double Z = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            double d = ns->nodes[i] - ns->nodes[j];
            exact[{i, j}] = d * d * std::exp(lw.logw[i] + lw.logw[j]);
            Z += exact[{i, j}];
        }
    for (auto& [key, v] : exact) v /= Z;

    const int n = 40000;
    auto batch = sample_many(km, n, 20260814);
    std::map<std::pair<int, int>, int> counts;
    for (const auto& cfg : batch) {
        REQUIRE(cfg.indices.size() == 2);
        REQUIRE(cfg.indices[0] < cfg.indices[1]);
        ++counts[{cfg.indices[0], cfg.indices[1]}];
    }
    for (auto& [key, p] : exact) {
        double freq = counts[key] / double(n);
        double sigma = std::sqrt(p * (1.0 - p) / n);
        CHECK(std::fabs(freq - p) < 4.0 * sigma + 1e-12);
    }
}

TEST_CASE("sampled marginals match the kernel diagonal and minors") {
    KernelMatrix km = small_kernel(30, 12, 0.5);
    const int n = 20000;
    auto batch = sample_many(km, n, 7);

    std::vector<int> hits(30, 0);
    std::map<std::pair<int, int>, int> pair_hits;
    for (const auto& cfg : batch) {
        REQUIRE(static_cast<int>(cfg.indices.size()) == 12);
        for (std::size_t t = 0; t + 1 < cfg.indices.size(); ++t)
            REQUIRE(cfg.indices[t] < cfg.indices[t + 1]);
        for (int i : cfg.indices) ++hits[i];
        auto has = [&](int i) {
            return std::binary_search(cfg.indices.begin(), cfg.indices.end(), i);
        };
        for (auto pr : {std::pair<int, int>{14, 15}, {8, 20}, {3, 4}})
            if (has(pr.first) && has(pr.second)) ++pair_hits[pr];
    }

    for (int i : {2, 10, 15, 22, 28}) {
        double p = km.K(i, i);
        double sigma = std::sqrt(std::max(p * (1.0 - p), 1e-12) / n);
        CHECK(std::fabs(hits[i] / double(n) - p) < 4.0 * sigma + 1e-9);
    }
    for (auto pr : {std::pair<int, int>{14, 15}, {8, 20}, {3, 4}}) {
        double p = correlation(km, {pr.first, pr.second});
        double sigma = std::sqrt(std::max(p * (1.0 - p), 1e-12) / n);
        CHECK(std::fabs(pair_hits[pr] / double(n) - p) < 4.0 * sigma + 1e-9);
    }
}

TEST_CASE("sampling is reproducible by seed") {
    KernelMatrix km = small_kernel(12, 5, 0.4);
    auto a = sample_many(km, 50, 99);
    auto b = sample_many(km, 50, 99);
    auto c = sample_many(km, 50, 100);
    REQUIRE(a.size() == b.size());
    bool all_same = true, any_diff_seed = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].indices != b[i].indices) all_same = false;
        if (a[i].indices != c[i].indices) any_diff_seed = true;
    }
    CHECK(all_same);
    CHECK(any_diff_seed);
}

TEST_CASE("a non-projection kernel is rejected while sampling") {
    KernelMatrix km;
    km.N = 2;
    km.k = 1;
    km.nodes = {0.25, 0.75};
    km.K = Eigen::MatrixXd::Zero(2, 2);
    km.K(0, 0) = -1e-3;
    km.K(1, 1) = 1.0;
    std::mt19937_64 rng(1);
    CHECK_THROWS_AS(sample(km, rng), numeric_error);
    CHECK_THROWS_AS(expected_count(km, {5}), config_error);
}
