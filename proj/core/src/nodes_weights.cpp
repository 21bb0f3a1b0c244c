#include "dopkit/nodes_weights.hpp"
#include "dopkit/real.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

namespace dopkit {

namespace {

// Antiderivative of log|u|: G(u) = u log|u| - u, G(0) = 0.
double G_log(double u) {
    if (u == 0.0) return 0.0;
    return u * std::log(std::fabs(u)) - u;
}

// Antiderivative of u^i log|u|: u^{i+1}/(i+1) * (log|u| - 1/(i+1)), 0 at 0.
double I_pow_log(int i, double u) {
    if (u == 0.0) return 0.0;
    double ip1 = i + 1.0;
    return std::pow(u, i + 1) / ip1 * (std::log(std::fabs(u)) - 1.0 / ip1);
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

} // namespace

NodeDensity NodeDensity::uniform(double a, double b) {
    NodeDensity d;
    d.kind_ = Kind::Uniform;
    d.a_ = a;
    d.b_ = b;
    if (!(b > a)) throw config_error("density interval requires b > a");
    return d;
}

NodeDensity NodeDensity::polynomial(double a, double b, std::vector<double> coeffs) {
    NodeDensity d;
    d.kind_ = Kind::Polynomial;
    d.a_ = a;
    d.b_ = b;
    d.coeffs_ = std::move(coeffs);
    if (!(b > a)) throw config_error("density interval requires b > a");
    if (d.coeffs_.empty()) throw config_error("polynomial density needs coefficients");
    d.validate();
    return d;
}

NodeDensity NodeDensity::callable(double a, double b, std::function<double(double)> rho0) {
    NodeDensity d;
    d.kind_ = Kind::Callable;
    d.a_ = a;
    d.b_ = b;
    d.fn_ = std::move(rho0);
    if (!(b > a)) throw config_error("density interval requires b > a");
    d.validate();
    return d;
}

double NodeDensity::rho0(double x) const {
    switch (kind_) {
        case Kind::Uniform: return 1.0 / (b_ - a_);
        case Kind::Polynomial: {
            double r = 0.0;
            for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * x + *it;
            return r;
        }
        case Kind::Callable: return fn_(x);
    }
    return 0.0;
}

double NodeDensity::cdf(double x) const {
    switch (kind_) {
        case Kind::Uniform: return (x - a_) / (b_ - a_);
        case Kind::Polynomial: {
            // integral of sum c_k y^k from a to x
            double rx = 0.0, ra = 0.0;
            for (int k = static_cast<int>(coeffs_.size()) - 1; k >= 0; --k) {
                rx = rx * x + coeffs_[k] / (k + 1.0);
                ra = ra * a_ + coeffs_[k] / (k + 1.0);
            }
            return rx * x - ra * a_;
        }
        case Kind::Callable: {
            if (x <= a_) return 0.0;
            using boost::math::quadrature::gauss_kronrod;
            return gauss_kronrod<double, 31>::integrate(fn_, a_, x, 12, 1e-15);
        }
    }
    return 0.0;
}

double NodeDensity::log_potential(double x) const {
    switch (kind_) {
        case Kind::Uniform:
            return (G_log(x - a_) - G_log(x - b_)) / (b_ - a_);
        case Kind::Polynomial: {
            // integral of y^k log|x-y| dy rewritten with u = y - x:
            // sum_i C(k,i) x^{k-i} [I_i(b-x) - I_i(a-x)]
            double total = 0.0;
            for (int k = 0; k < static_cast<int>(coeffs_.size()); ++k) {
                if (coeffs_[k] == 0.0) continue;
                double term = 0.0;
                for (int i = 0; i <= k; ++i)
                    term += binom(k, i) * std::pow(x, k - i) *
                            (I_pow_log(i, b_ - x) - I_pow_log(i, a_ - x));
                total += coeffs_[k] * term;
            }
            return total;
        }
        case Kind::Callable: {
            // subtract the value at the singular point; the remainder is
            // continuous, the split-off piece integrates in closed form
            double rx = fn_(x);
            auto g = [&](double y) {
                if (y == x) return 0.0;
                return (fn_(y) - rx) * std::log(std::fabs(x - y));
            };
            using boost::math::quadrature::gauss_kronrod;
            double smooth = 0.0;
            if (x > a_ && x < b_) {
                smooth = gauss_kronrod<double, 31>::integrate(g, a_, x, 12, 1e-13) +
                         gauss_kronrod<double, 31>::integrate(g, x, b_, 12, 1e-13);
            } else {
                smooth = gauss_kronrod<double, 31>::integrate(g, a_, b_, 12, 1e-13);
            }
            return smooth + rx * (G_log(x - a_) - G_log(x - b_));
        }
    }
    return 0.0;
}

void NodeDensity::validate() const {
    double mass = cdf(b_);
    if (std::fabs(mass - 1.0) > kNormTol)
        throw config_error("node density is not normalized: integral = " + std::to_string(mass));
}

double NodeSet::quantization_residual() const {
    double worst = 0.0;
    for (int j = 0; j < N; ++j) {
        double target = (2.0 * j + 1.0) / (2.0 * N);
        worst = std::max(worst, std::fabs(density.cdf(nodes[j]) - target));
    }
    return worst;
}

NodeSet build_nodes(const NodeDensity& density, int N) {
    if (N < 1) throw config_error("node count must be at least 1");
    density.validate();

    NodeSet ns{density, N, {}, {}};
    ns.nodes.resize(N);
    const double a = density.a(), b = density.b();

    for (int j = 0; j < N; ++j) {
        const double target = (2.0 * j + 1.0) / (2.0 * N);
        double lo = a, hi = b;
        double x = 0.5 * (lo + hi);
        bool done = false;
        for (int iter = 0; iter < 200; ++iter) {
            double f = density.cdf(x) - target;
            if (f > 0) hi = x; else lo = x;
            double d = density.rho0(x);
            double xn = (d > 0) ? x - f / d : x;
            if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);   // Newton left the bracket
            if (std::fabs(density.cdf(xn) - target) <= 1e-15 || hi - lo <= 1e-17 * (b - a)) {
                x = xn;
                done = true;
                break;
            }
            x = xn;
        }
        if (!done && std::fabs(density.cdf(x) - target) > 1e-14)
            throw numeric_error("node solve did not converge at j = " + std::to_string(j));
        ns.nodes[j] = x;
    }
    for (int j = 1; j < N; ++j)
        if (!(ns.nodes[j] > ns.nodes[j - 1]))
            throw numeric_error("nodes are not strictly increasing at j = " + std::to_string(j));

    // Internode log sums, evaluated in extended precision and rounded once.
    ns.sum_log_gaps.resize(N);
    std::vector<Real256> xs(N);
    for (int j = 0; j < N; ++j) xs[j] = Real256(ns.nodes[j]);
    for (int j = 0; j < N; ++j) {
        Real256 s = 0;
        for (int n = 0; n < N; ++n) {
            if (n == j) continue;
            s += log(abs(xs[j] - xs[n]));
        }
        ns.sum_log_gaps[j] = static_cast<double>(s);
    }
    return ns;
}

WeightSpec WeightSpec::krawtchouk(double p) {
    WeightSpec s;
    s.kind = Kind::Krawtchouk;
    s.p = p;
    s.q = 1.0 - p;
    s.validate();
    return s;
}

WeightSpec WeightSpec::hahn(double alpha, double beta) {
    WeightSpec s;
    s.kind = Kind::Hahn;
    s.alpha = alpha;
    s.beta = beta;
    s.validate();
    return s;
}

WeightSpec WeightSpec::associated_hahn(double alpha, double beta) {
    WeightSpec s;
    s.kind = Kind::AssociatedHahn;
    s.alpha = alpha;
    s.beta = beta;
    s.validate();
    return s;
}

WeightSpec WeightSpec::generic_field(std::function<double(double)> V, double gamma,
                                     std::function<double(double)> eta_N) {
    WeightSpec s;
    s.kind = Kind::GenericField;
    s.V = std::move(V);
    s.gamma = gamma;
    s.eta_N = std::move(eta_N);
    s.validate();
    return s;
}

void WeightSpec::validate() const {
    switch (kind) {
        case Kind::Krawtchouk:
            if (!(p > 0.0 && q > 0.0) || std::fabs(p + q - 1.0) > 1e-12)
                throw config_error("krawtchouk requires p > 0, q > 0, p + q = 1");
            break;
        case Kind::Hahn:
        case Kind::AssociatedHahn:
            if (!(alpha > 0.0 && beta > 0.0))
                throw config_error("hahn weights require alpha > 0 and beta > 0");
            break;
        case Kind::GenericField:
            if (!V) throw config_error("generic field weight requires a potential V");
            break;
    }
}

std::string WeightSpec::name() const {
    switch (kind) {
        case Kind::Krawtchouk: return "krawtchouk";
        case Kind::Hahn: return "hahn";
        case Kind::AssociatedHahn: return "associated_hahn";
        case Kind::GenericField: return "generic_field";
    }
    return "?";
}

LogWeights log_weight(const WeightSpec& spec, std::shared_ptr<const NodeSet> nodeset) {
    spec.validate();
    const NodeSet& ns = *nodeset;
    const int N = ns.N;
    std::vector<double> lw(N);

    auto lg = [](double x) { return std::lgamma(x); };

    switch (spec.kind) {
        case WeightSpec::Kind::Krawtchouk: {
            const double logp = std::log(spec.p), logq = std::log(spec.q);
            const double pref = (N - 1.0) * std::log(double(N)) + 0.5 * (logp + logq) -
                                N * logq - lg(N);
            for (int j = 0; j < N; ++j)
                lw[j] = pref + lg(N) - lg(j + 1.0) - lg(N - double(j)) + j * logp +
                        (N - 1.0 - j) * logq;
            break;
        }
        case WeightSpec::Kind::Hahn: {
            const double al = spec.alpha, be = spec.beta;
            // binomials generalized through Gamma; the j-independent pieces are
            // collected once
            const double pref = (N - 1.0) * std::log(double(N)) - lg(N) - lg(al) - lg(be) -
                                (lg(N + be - 1.0) - lg(be) - lg(double(N)));
            for (int j = 0; j < N; ++j)
                lw[j] = pref + lg(j + al) - lg(j + 1.0) + lg(N + be - 1.0 - j) -
                        lg(N - double(j));
            break;
        }
        case WeightSpec::Kind::AssociatedHahn: {
            const double al = spec.alpha, be = spec.beta;
            const double pref = (N - 1.0) * std::log(double(N)) - lg(N) + lg(N) +
                                lg(N + be - 1.0) + lg(al);
            for (int j = 0; j < N; ++j)
                lw[j] = pref - lg(j + 1.0) - lg(al + j) - lg(N - double(j)) -
                        lg(N + be - 1.0 - j);
            break;
        }
        case WeightSpec::Kind::GenericField: {
            for (int j = 0; j < N; ++j) {
                double x = ns.nodes[j];
                double VN = spec.V(x) + spec.gamma / N;
                if (spec.eta_N) VN += spec.eta_N(x) / (double(N) * N);
                lw[j] = -N * VN - ns.sum_log_gaps[j];
            }
            break;
        }
    }
    for (double v : lw)
        if (!std::isfinite(v)) throw numeric_error("non-finite log weight");
    return LogWeights{std::move(nodeset), std::move(lw)};
}

LogWeights dual_weights(const LogWeights& w) {
    const NodeSet& ns = *w.nodeset;
    const int N = ns.N;
    std::vector<double> lw(N);
    // One rounding at the end keeps the involution exact in double precision.
    for (int j = 0; j < N; ++j) {
        Real256 s = -(Real256(w.logw[j]) + 2 * Real256(ns.sum_log_gaps[j]));
        lw[j] = static_cast<double>(s);
    }
    return LogWeights{w.nodeset, std::move(lw)};
}

std::function<double(double)> weight_potential(const WeightSpec& spec) {
    switch (spec.kind) {
        case WeightSpec::Kind::Krawtchouk: {
            double slope = std::log(spec.q / spec.p);
            return [slope](double x) { return x * slope; };
        }
        case WeightSpec::Kind::Hahn:
            return [](double x) {
                auto xlx = [](double t) { return t > 0 ? t * std::log(t) : 0.0; };
                return -xlx(x) - xlx(1.0 - x);
            };
        case WeightSpec::Kind::AssociatedHahn:
            return [](double x) {
                auto xlx = [](double t) { return t > 0 ? t * std::log(t) : 0.0; };
                return xlx(x) + xlx(1.0 - x);
            };
        case WeightSpec::Kind::GenericField:
            return spec.V;
    }
    return {};
}

} // namespace dopkit
