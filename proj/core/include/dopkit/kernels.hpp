#ifndef DOPKIT_KERNELS_HPP
#define DOPKIT_KERNELS_HPP

#include "dopkit/equilibrium.hpp"
#include "dopkit/orthopoly.hpp"

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace dopkit {

// Reproducing kernel on the nodes, K_ij = sum_{n<k} p_n(x_i) p_n(x_j)
// sqrt(w_i w_j): a rank-k orthogonal projection, so K^2 = K, trace K = k,
// and 0 <= K_ii <= 1.
struct KernelMatrix {
    int N = 0, k = 0;
    std::vector<double> nodes;
    Eigen::MatrixXd K;

    double projection_residual() const;   // max |(K^2 - K)_ij|
    double trace_error() const;           // |trace K - k|
};

// Assembles the kernel by the direct sum over q-vector columns and
// cross-validates sampled off-diagonal entries against the two-term
// Christoffel-Darboux form b_k (q_k(i) q_{k-1}(j) - q_{k-1}(i) q_k(j)) /
// (x_i - x_j); disagreement throws precision_error.
KernelMatrix cd_kernel(const OrthoBasis& b, int k);

// Determinant of K restricted to the given indices: the m-point correlation.
// Repeated indices give exactly 0.
double correlation(const KernelMatrix& km, const std::vector<int>& points);

// Coefficients of det(1 - t K|_B) in ascending powers of t; |B| <= 30.
std::vector<double> occupancy_polynomial(const KernelMatrix& km, const std::vector<int>& B);

// P(exactly m particles in B) = (1/m!) (-d/dt)^m det(1 - t K|_B) at t = 1,
// applied exactly on the coefficient vector.
double occupancy(const KernelMatrix& km, const std::vector<int>& B, int m);
std::vector<double> occupancy_distribution(const KernelMatrix& km, const std::vector<int>& B);

double eval_polynomial(const std::vector<double>& coeffs, double t);

struct SineComparison {
    double density_ratio = 0;   // d = c psi / rho0 at the center node
    double diag_rel_err = 0;    // |K_cc / d - 1|
    double offdiag_max_dev = 0; // max |K(c+i,c+j) - sin(pi d (i-j)) / (pi (i-j))|
    int radius = 0;
};

// Compares kernel entries in a window of nodes around a band-interior center
// with the discrete sine kernel at density d = c psi / rho0.
SineComparison sine_compare(const KernelMatrix& km, const EquilibriumMeasure& eqm,
                            const IntervalClassification& cls, int center, int radius);

// det(1 - t K|_B) for B = {j0 + offsets} next to det(1 - t S|_offsets) for
// the discrete sine kernel at the local density; both as coefficient
// vectors in t.
std::pair<std::vector<double>, std::vector<double>> occupancy_sine_limit(
    const KernelMatrix& km, const EquilibriumMeasure& eqm, const IntervalClassification& cls,
    int j0, const std::vector<int>& offsets);

struct GapDiagnostics {
    struct Entry {
        SegmentKind kind;
        double left = 0, right = 0;
        int interior_nodes = 0;
        double max_diag = 0;            // max K_ii in voids, max |1 - K_ii| saturated
        double max_scaled_offdiag = 0;  // max |(x_i - x_j) K_ij| within the interior
    };
    std::vector<Entry> entries;
};

// Extremal one-point and scaled two-point values over the interior of each
// void and saturated segment; `trim` is the fraction of the segment length
// excluded at each end.
GapDiagnostics gap_diagnostics(const KernelMatrix& km, const IntervalClassification& cls,
                               double trim = 0.2);

} // namespace dopkit

#endif
