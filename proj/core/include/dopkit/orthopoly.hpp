#ifndef DOPKIT_ORTHOPOLY_HPP
#define DOPKIT_ORTHOPOLY_HPP

#include "dopkit/errors.hpp"
#include "dopkit/nodes_weights.hpp"
#include "dopkit/real.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace dopkit {

// Full-precision basis data.  Q[n][j] holds p_n(x_j) sqrt(w_j); these vectors
// are orthonormal in the plain Euclidean sense and are what the kernel module
// consumes.  alpha/beta follow the monic recurrence
//   pi_{k+1}(x) = (x - alpha_k) pi_k(x) - beta_k pi_{k-1}(x),
// with beta_0 = sum_j w_j and ||pi_k||^2 = beta_0 ... beta_k.
template <class Real>
struct BasisMP {
    using real_type = Real;
    int N = 0, kmax = 0;
    std::vector<Real> nodes, w, sqrtw;
    std::vector<Real> alpha, beta, lognorm;   // lognorm[k] = log ||pi_k||
    std::vector<std::vector<Real>> Q;
};

template <class Real>
std::shared_ptr<const BasisMP<Real>> build_basis_mp(const LogWeights& lw, int kmax);

// Monic value and derivative by forward recurrence.
template <class Real>
void eval_monic_pair(const BasisMP<Real>& B, int k, const Real& z, Real& val, Real& dval);

template <class Real>
Cplx<Real> eval_monic_cplx(const BasisMP<Real>& B, int k, const Cplx<Real>& z);

// Type-erased basis: double-precision views for downstream numerics plus the
// retained full-precision data for operations that need it.
class OrthoBasis {
public:
    int N = 0, kmax = 0, precision_bits = 0;
    std::shared_ptr<const NodeSet> nodeset;
    std::vector<double> nodes, logw;
    std::vector<double> alpha, beta, lognorm;
    Eigen::MatrixXd Q;   // N rows, kmax+1 columns of p_n(x_j) sqrt(w_j)

    using MpVariant = std::variant<std::shared_ptr<const BasisMP<Real128>>,
                                   std::shared_ptr<const BasisMP<Real256>>,
                                   std::shared_ptr<const BasisMP<Real512>>,
                                   std::shared_ptr<const BasisMP<Real1024>>>;
    MpVariant mp;

    template <class F>
    decltype(auto) visit(F&& f) const {
        return std::visit([&](const auto& ptr) -> decltype(auto) { return f(*ptr); }, mp);
    }

    // log of the leading coefficient of the orthonormal p_k (sign is always +).
    double log_lead(int k) const { return -lognorm[k]; }

    // Largest |sum_j p_k p_l w_j - delta_kl| over k,l <= kmax, computed in the
    // basis precision.
    double orthonormality_residual() const;
};

// Stieltjes procedure with full reorthogonalization at the requested
// precision (canonical rungs 128/256/512/1024).  Throws precision_error with
// the failing degree when a squared norm is not strictly positive.
OrthoBasis build_basis(const LogWeights& lw, int kmax, int precision_bits);

// Retry ladder: starts at 128 bits and doubles until the build succeeds or
// 1024 bits fail.
OrthoBasis build_basis_auto(const LogWeights& lw, int kmax);

// Evaluation at a complex point in double precision (monic or orthonormal).
std::complex<double> evaluate(const OrthoBasis& b, int k, std::complex<double> z, bool monic);

// Log-magnitude evaluation at a real point: returns log|.| and the sign.
// Computed at basis precision, so it never overflows for any polynomial the
// basis can represent.
struct LogValue {
    double log_abs;
    int sign;     // -1, 0, +1
};
LogValue evaluate_log(const OrthoBasis& b, int k, double z, bool monic);

struct ZeroSet {
    int N = 0, k = 0;
    std::vector<double> zeros;     // sorted ascending
    std::vector<int> nearest;      // index of the node closest to each zero
    std::vector<double> offset;    // zero - node, computed at basis precision
};

// Jacobi-matrix eigenvalues polished by safeguarded Newton at basis
// precision.  Verifies: all zeros inside (x_0, x_{N-1}), at most one zero in
// any closed internode interval, k simple zeros.
ZeroSet zeros(const OrthoBasis& b, int k);

// Strict interlacing between zeros of degrees k and k-1, decided at basis
// precision.  Returns the smallest separation scaled by the local node gap.
bool interlace_ok(const OrthoBasis& b, int k, double* worst_margin = nullptr);

struct RhpMatrix {
    std::complex<double> z;
    std::complex<double> entry[2][2];
    std::complex<double> det() const {
        return entry[0][0] * entry[1][1] - entry[0][1] * entry[1][0];
    }
};

// Explicit solution matrix at a point off the nodes:
//   [ pi_k(z)                     sum_j w_j pi_k(x_j)/(z-x_j)            ]
//   [ c_{k-1} p_{k-1}(z)          sum_j w_j c_{k-1} p_{k-1}(x_j)/(z-x_j) ]
// where c_{k-1} is the leading coefficient of p_{k-1}; k = 0 gives the
// unit-diagonal matrix with only the upper-right sum.
RhpMatrix rhp_matrix(const OrthoBasis& b, int k, std::complex<double> z);

// Both sides of the degree-duality identity
//   dual_pi_{N-k}(x_l) = c_{k-1}^2 w_l prod_{n != l}(x_l - x_n) pi_{k-1}(x_l)
// evaluated at basis precision; the dual-weight basis is rebuilt internally
// at the same precision so the comparison is not limited by double rounding.
// Returns the maximum relative residual over all nodes.
double borodin_residual(const OrthoBasis& b, int k, std::vector<double>* per_node = nullptr);

struct IntervalClassification;  // defined in equilibrium.hpp

struct ZeroClassification {
    struct Match {
        int zero_index;
        int node_index;
        double offset;    // zero - node
    };
    std::vector<Match> hurwitz;
    std::vector<int> spurious;                       // zero indices
    std::vector<std::pair<int, int>> dislocations;   // node-gap endpoints
    int worst_dislocations_in_region = 0;
    int worst_spurious_in_region = 0;
    bool within_bounds = true;   // <=1 of each per saturated region
};

// Matches zeros inside each saturated region to their nearest nodes and
// reports dislocated internode gaps; findings, not exceptions.
ZeroClassification classify_zeros(const ZeroSet& zs, const OrthoBasis& b,
                                  const IntervalClassification& segments);

// ------------------------------------------------------------------------
// Template bodies.

namespace detail {

// Stieltjes procedure on explicit node/weight vectors.  Two rounds of
// modified Gram-Schmidt per step keep the q-vectors numerically orthonormal
// even when the weights span thousands of orders of magnitude.  A step fails
// when the projected residual falls below eps^(2/3) of its pre-projection
// size: past that point the new direction is numerically dependent and the
// computed basis would quietly lose orthogonality.
template <class Real>
std::shared_ptr<BasisMP<Real>> stieltjes(std::vector<Real> nodes, std::vector<Real> w,
                                         int kmax) {
    using std::isfinite;
    const int N = static_cast<int>(nodes.size());
    auto Bp = std::make_shared<BasisMP<Real>>();
    BasisMP<Real>& B = *Bp;
    B.N = N;
    B.kmax = kmax;
    B.nodes = std::move(nodes);
    B.w = std::move(w);
    B.sqrtw.resize(N);
    for (int j = 0; j < N; ++j) B.sqrtw[j] = sqrt(B.w[j]);
    B.alpha.assign(kmax + 1, Real(0));
    B.beta.assign(kmax + 1, Real(0));
    B.lognorm.assign(kmax + 1, Real(0));
    B.Q.assign(kmax + 1, std::vector<Real>(N, Real(0)));

    Real s0(0);
    for (int j = 0; j < N; ++j) s0 += B.w[j];
    if (!(s0 > 0) || !isfinite(s0))
        throw precision_error("total weight is not positive and finite", 0);
    B.beta[0] = s0;
    B.lognorm[0] = log(s0) / 2;
    {
        Real inv = 1 / sqrt(s0);
        Real a(0);
        for (int j = 0; j < N; ++j) {
            B.Q[0][j] = B.sqrtw[j] * inv;
            a += B.nodes[j] * B.Q[0][j] * B.Q[0][j];
        }
        B.alpha[0] = a;
    }

    const Real eps = std::numeric_limits<Real>::epsilon();
    const Real cut2 = exp(log(eps) * 4 / 3);   // (eps^(2/3))^2
    std::vector<Real> r(N);
    Real b_prev(0);
    for (int k = 0; k < kmax; ++k) {
        for (int j = 0; j < N; ++j) {
            r[j] = (B.nodes[j] - B.alpha[k]) * B.Q[k][j];
            if (k > 0) r[j] -= b_prev * B.Q[k - 1][j];
        }
        Real pre2(0);
        for (int j = 0; j < N; ++j) pre2 += r[j] * r[j];
        for (int pass = 0; pass < 2; ++pass) {
            for (int n = 0; n <= k; ++n) {
                Real cn(0);
                for (int j = 0; j < N; ++j) cn += B.Q[n][j] * r[j];
                for (int j = 0; j < N; ++j) r[j] -= cn * B.Q[n][j];
            }
        }
        Real b2(0);
        for (int j = 0; j < N; ++j) b2 += r[j] * r[j];
        if (!(b2 > cut2 * pre2) || !isfinite(b2))
            throw precision_error("recurrence residual lost to cancellation at degree " +
                                      std::to_string(k + 1),
                                  k + 1);
        Real b = sqrt(b2);
        B.beta[k + 1] = b2;
        B.lognorm[k + 1] = B.lognorm[k] + log(b);
        Real ib = 1 / b;
        Real a(0);
        for (int j = 0; j < N; ++j) {
            B.Q[k + 1][j] = r[j] * ib;
            a += B.nodes[j] * B.Q[k + 1][j] * B.Q[k + 1][j];
        }
        B.alpha[k + 1] = a;
        b_prev = b;
    }
    return Bp;
}

} // namespace detail

template <class Real>
std::shared_ptr<const BasisMP<Real>> build_basis_mp(const LogWeights& lw, int kmax) {
    const int N = lw.N();
    if (N < 1) throw config_error("empty weight set");
    if (kmax < 0 || kmax > N - 1) throw config_error("kmax must lie in [0, N-1]");
    std::vector<Real> xs(N), ws(N);
    for (int j = 0; j < N; ++j) {
        xs[j] = Real(lw.nodes()[j]);
        ws[j] = exp(Real(lw.logw[j]));
    }
    return detail::stieltjes<Real>(std::move(xs), std::move(ws), kmax);
}

template <class Real>
void eval_monic_pair(const BasisMP<Real>& B, int k, const Real& z, Real& val, Real& dval) {
    Real pm1(0), p0(1), dm1(0), d0(0);
    for (int n = 0; n < k; ++n) {
        Real p1 = (z - B.alpha[n]) * p0;
        Real d1 = p0 + (z - B.alpha[n]) * d0;
        if (n > 0) {
            p1 -= B.beta[n] * pm1;
            d1 -= B.beta[n] * dm1;
        }
        pm1 = p0;
        p0 = p1;
        dm1 = d0;
        d0 = d1;
    }
    val = p0;
    dval = d0;
}

template <class Real>
Cplx<Real> eval_monic_cplx(const BasisMP<Real>& B, int k, const Cplx<Real>& z) {
    Cplx<Real> pm1(Real(0)), p0(Real(1));
    for (int n = 0; n < k; ++n) {
        Cplx<Real> p1 = (z - Cplx<Real>(B.alpha[n])) * p0;
        if (n > 0) p1 = p1 - B.beta[n] * pm1;
        pm1 = p0;
        p0 = p1;
    }
    return p0;
}

} // namespace dopkit

#endif
