#ifndef DOPKIT_NODES_WEIGHTS_HPP
#define DOPKIT_NODES_WEIGHTS_HPP

#include "dopkit/errors.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dopkit {

// Node density on an interval [a,b].  Must integrate to 1.  Uniform and
// polynomial densities use closed-form cdf and log-potential; arbitrary
// callables fall back to adaptive quadrature.
class NodeDensity {
public:
    static NodeDensity uniform(double a, double b);
    // rho0(x) = sum_k coeffs[k] * x^k on [a,b]; must integrate to 1.
    static NodeDensity polynomial(double a, double b, std::vector<double> coeffs);
    static NodeDensity callable(double a, double b, std::function<double(double)> rho0);

    double a() const { return a_; }
    double b() const { return b_; }
    double rho0(double x) const;
    double cdf(double x) const;              // integral of rho0 from a to x
    double log_potential(double x) const;    // integral of log|x-y| rho0(y) dy over [a,b]

    // |cdf(b) - 1| must stay below this for the density to be accepted.
    static constexpr double kNormTol = 1e-10;
    void validate() const;

private:
    enum class Kind { Uniform, Polynomial, Callable };
    Kind kind_;
    double a_, b_;
    std::vector<double> coeffs_;
    std::function<double(double)> fn_;
};

struct NodeSet {
    NodeDensity density;
    int N = 0;
    std::vector<double> nodes;          // strictly increasing, inside (a,b)
    std::vector<double> sum_log_gaps;   // s_j = sum_{n != j} log|x_j - x_n|

    double quantization_residual() const;  // max_j |cdf(x_j) - (2j+1)/(2N)|
};

// Solves cdf(x_j) = (2j+1)/(2N) for every j by bisection refined with Newton
// steps; 200 iterations per node before giving up.
NodeSet build_nodes(const NodeDensity& density, int N);

struct WeightSpec {
    enum class Kind { Krawtchouk, Hahn, AssociatedHahn, GenericField };
    Kind kind = Kind::Krawtchouk;

    // Krawtchouk
    double p = 0.5, q = 0.5;
    // Hahn / AssociatedHahn
    double alpha = 1.0, beta = 1.0;
    // GenericField: exponent N*V_N with V_N = V + gamma/N + eta_N/N^2
    std::function<double(double)> V;
    double gamma = 0.0;
    std::function<double(double)> eta_N;   // optional, defaults to zero

    static WeightSpec krawtchouk(double p);
    static WeightSpec hahn(double alpha, double beta);
    static WeightSpec associated_hahn(double alpha, double beta);
    static WeightSpec generic_field(std::function<double(double)> V, double gamma = 0.0,
                                    std::function<double(double)> eta_N = nullptr);
    void validate() const;
    std::string name() const;
};

struct LogWeights {
    std::shared_ptr<const NodeSet> nodeset;
    std::vector<double> logw;

    int N() const { return nodeset->N; }
    const std::vector<double>& nodes() const { return nodeset->nodes; }
};

// Evaluates the weight family on the node set, entirely in log space.
LogWeights log_weight(const WeightSpec& spec, std::shared_ptr<const NodeSet> nodeset);

// Dual weights: log wbar_j = -log w_j - 2 s_j, so that
// w_j * wbar_j * prod_{n!=j} (x_j - x_n)^2 = 1.  The sum is evaluated in
// extended precision so that applying the map twice returns the input
// bit-for-bit in double precision.
LogWeights dual_weights(const LogWeights& w);

// Continuum potential of a weight family, used by the equilibrium module:
// V(x) such that w ~ e^{-N V_N} times the node-spacing product.
// Krawtchouk: V(x) = x log(q/p).  Hahn column ensembles get their own field
// builders in the tiling module.
std::function<double(double)> weight_potential(const WeightSpec& spec);

} // namespace dopkit

#endif
