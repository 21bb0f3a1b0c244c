#include "dopkit/nodes_weights.hpp"

#include "dopkit/errors.hpp"

#include "doctest.h"

#include <cmath>
#include <memory>

using namespace dopkit;

namespace {

double binom(double n, double k) {
    return std::exp(std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1));
}

std::shared_ptr<const NodeSet> unit_nodes(int N) {
    return std::make_shared<const NodeSet>(build_nodes(NodeDensity::uniform(0.0, 1.0), N));
}

} // namespace

TEST_CASE("uniform density quantizes to cell midpoints") {
    NodeSet ns = build_nodes(NodeDensity::uniform(0.0, 1.0), 4);
    const double expect[] = {0.125, 0.375, 0.625, 0.875};
    for (int j = 0; j < 4; ++j) CHECK(ns.nodes[j] == doctest::Approx(expect[j]).epsilon(1e-14));
    CHECK(ns.quantization_residual() < 1e-14);
}

TEST_CASE("linear density quantizes to sqrt of the targets") {
    // rho0 = 2x on [0,1], cdf = x^2, so x_j = sqrt((2j+1)/(2N))
    NodeSet ns = build_nodes(NodeDensity::polynomial(0.0, 1.0, {0.0, 2.0}), 2);
    CHECK(ns.nodes[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ns.nodes[1] == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-12));
}

TEST_CASE("node spacing product matches the factorial identity") {
    // For uniform nodes, prod_{n != j} |x_j - x_n|^(-1) = N^(N-1) / (j! (N-1-j)!)
    const int N = 6;
    NodeSet ns = build_nodes(NodeDensity::uniform(0.0, 1.0), N);
    for (int j = 0; j < N; ++j) {
        const double lhs = -ns.sum_log_gaps[j];
        const double rhs = (N - 1) * std::log(double(N)) - std::lgamma(j + 1.0) -
                           std::lgamma(N - j + 0.0);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("two-node symmetric weights evaluate to 2") {
    auto lw = log_weight(WeightSpec::krawtchouk(0.5), unit_nodes(2));
    CHECK(std::exp(lw.logw[0]) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::exp(lw.logw[1]) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("binomial-family weights match the closed form") {
    // w_j = N^(N-1) sqrt(pq) / (q^N Gamma(N)) * C(N-1,j) p^j q^(N-1-j)
    const int N = 7;
    const double p = 0.3, q = 0.7;
    auto lw = log_weight(WeightSpec::krawtchouk(p), unit_nodes(N));
    const double front = std::pow(double(N), N - 1) * std::sqrt(p * q) /
                         (std::pow(q, N) * std::tgamma(double(N)));
    for (int j = 0; j < N; ++j) {
        const double direct = front * binom(N - 1, j) * std::pow(p, j) * std::pow(q, N - 1 - j);
        CHECK(std::exp(lw.logw[j]) == doctest::Approx(direct).epsilon(1e-10));
    }
}

TEST_CASE("gamma-ratio family weights match the closed form") {
    // w_j = N^(N-1)/Gamma(N) * C(j+alpha-1, j) C(N+beta-2-j, N-1-j) / C(N+beta-2, beta-1)
    const int N = 5;
    const double al = 2.5, be = 1.5;
    auto lw = log_weight(WeightSpec::hahn(al, be), unit_nodes(N));
    const double front = std::pow(double(N), N - 1) / std::tgamma(double(N)) /
                         binom(N + be - 2, be - 1);
    for (int j = 0; j < N; ++j) {
        const double direct = front * binom(j + al - 1, j) * binom(N + be - 2 - j, N - 1 - j);
        CHECK(std::exp(lw.logw[j]) == doctest::Approx(direct).epsilon(1e-10));
    }
}

TEST_CASE("dual of unit weights on two nodes is 4") {
    // gap 1/2, so wbar = 1 / (w * (1/2)^2) = 4
    auto ns = unit_nodes(2);
    LogWeights lw{ns, {0.0, 0.0}};
    LogWeights dual = dual_weights(lw);
    CHECK(std::exp(dual.logw[0]) == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(std::exp(dual.logw[1]) == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("dual map is a bit-for-bit involution") {
    auto lw = log_weight(WeightSpec::krawtchouk(0.7), unit_nodes(30));
    LogWeights twice = dual_weights(dual_weights(lw));
    for (int j = 0; j < 30; ++j) CHECK(twice.logw[j] == lw.logw[j]);
}

TEST_CASE("weight potential of the binomial family is linear") {
    auto spec = WeightSpec::krawtchouk(0.7);
    auto V = weight_potential(spec);
    CHECK(V(0.3) == doctest::Approx(0.3 * std::log(0.3 / 0.7)).epsilon(1e-14));
    CHECK(V(0.0) == doctest::Approx(0.0));
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(WeightSpec::krawtchouk(0.0).validate(), config_error);
    CHECK_THROWS_AS(WeightSpec::krawtchouk(1.0).validate(), config_error);
    CHECK_THROWS_AS(WeightSpec::hahn(0.0, 1.0).validate(), config_error);
    CHECK_THROWS_AS(NodeDensity::uniform(1.0, 0.0).validate(), config_error);
    // density must integrate to one
    CHECK_THROWS_AS(NodeDensity::polynomial(0.0, 1.0, {2.0}).validate(), config_error);
    CHECK_THROWS_AS(build_nodes(NodeDensity::uniform(0.0, 1.0), 0), config_error);
}

TEST_CASE("log potential of the uniform density has the closed form") {
    NodeDensity d = NodeDensity::uniform(0.0, 1.0);
    // integral of log|x-y| dy over [0,1] at x=1/2 is -log 2 - 1
    CHECK(d.log_potential(0.5) == doctest::Approx(-std::log(2.0) - 1.0).epsilon(1e-12));
    // at x = 2: 2 log 2 - 1
    CHECK(d.log_potential(2.0) == doctest::Approx(2 * std::log(2.0) - 1.0).epsilon(1e-12));
}
