#include "dopkit/kernels.hpp"

#include "dopkit/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <set>

namespace dopkit {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& K, const std::vector<int>& idx) {
    const int n = static_cast<int>(idx.size());
    Eigen::MatrixXd S(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) S(a, b) = K(idx[a], idx[b]);
    return S;
}

void check_indices(const KernelMatrix& km, const std::vector<int>& idx) {
    for (int i : idx)
        if (i < 0 || i >= km.N) throw config_error("node index out of range");
}

// det(1 - t A) for symmetric A, as coefficients in t, via the eigenvalues.
std::vector<double> char_coeffs(const Eigen::MatrixXd& A) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    std::vector<double> c{1.0};
    for (int i = 0; i < A.rows(); ++i) {
        const double lam = es.eigenvalues()[i];
        c.push_back(0.0);
        for (int j = static_cast<int>(c.size()) - 1; j >= 1; --j) c[j] -= lam * c[j - 1];
    }
    return c;
}

double binom_d(int n, int k) {
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double sine_entry(double d, int delta) {
    if (delta == 0) return d;
    return std::sin(kPi * d * delta) / (kPi * delta);
}

// Cell index of x in the equilibrium grid.
int cell_of(const EquilibriumMeasure& eqm, double x) {
    const auto& e = eqm.edges;
    if (x <= e.front()) return 0;
    if (x >= e.back()) return static_cast<int>(eqm.mass.size()) - 1;
    const int i = static_cast<int>(std::upper_bound(e.begin(), e.end(), x) - e.begin()) - 1;
    return std::clamp(i, 0, static_cast<int>(eqm.mass.size()) - 1);
}

double density_ratio_at(const EquilibriumMeasure& eqm, double x) {
    const int i = cell_of(eqm, x);
    const double rho0 = (1.0 / eqm.mass.size()) / eqm.cellw[i];   // equal-mass cells
    return eqm.c * eqm.psi[i] / rho0;
}

} // namespace

double KernelMatrix::projection_residual() const {
    return (K * K - K).cwiseAbs().maxCoeff();
}

double KernelMatrix::trace_error() const {
    return std::abs(K.trace() - k);
}

KernelMatrix cd_kernel(const OrthoBasis& b, int k) {
    if (k < 1 || k > b.N - 1) throw config_error("kernel rank must lie in [1, N-1]");
    if (k > b.kmax) throw config_error("basis degree range too small for the kernel rank");
    KernelMatrix km;
    km.N = b.N;
    km.k = k;
    km.nodes = b.nodes;
    const auto Q = b.Q.leftCols(k);
    km.K = Q * Q.transpose();

    // Cross-check sampled distant pairs against the two-term form; the two
    // expressions come from independent identities, so agreement guards the
    // whole assembly.  Entries at the double-precision floor auto-pass.
    const double bk = std::sqrt(b.beta[k]);
    const int n = b.N;
    for (int s = 0; s < 64; ++s) {
        const int i = (s * 37 + 11) % n;
        const int j = (i + n / 3 + (s % 7)) % n;
        if (i == j) continue;
        const double dx = b.nodes[i] - b.nodes[j];
        const double cd =
            bk * (b.Q(i, k) * b.Q(j, k - 1) - b.Q(i, k - 1) * b.Q(j, k)) / dx;
        const double direct = km.K(i, j);
        const double tol = 1e-10 * std::max(std::abs(cd), std::abs(direct)) + 1e-12;
        if (std::abs(cd - direct) > tol)
            throw precision_error("kernel forms disagree at a sampled pair", k);
    }
    return km;
}

double correlation(const KernelMatrix& km, const std::vector<int>& points) {
    check_indices(km, points);
    std::set<int> uniq(points.begin(), points.end());
    if (uniq.size() != points.size()) return 0.0;
    if (points.empty()) return 1.0;
    Eigen::MatrixXd S = submatrix(km.K, points);
    return Eigen::PartialPivLU<Eigen::MatrixXd>(S).determinant();
}

std::vector<double> occupancy_polynomial(const KernelMatrix& km, const std::vector<int>& B) {
    check_indices(km, B);
    if (B.size() > 30) throw config_error("occupancy set capped at 30 nodes");
    std::set<int> uniq(B.begin(), B.end());
    if (uniq.size() != B.size()) throw config_error("occupancy set must be distinct");
    return char_coeffs(submatrix(km.K, B));
}

double occupancy(const KernelMatrix& km, const std::vector<int>& B, int m) {
    if (m < 0 || m > static_cast<int>(B.size()))
        throw config_error("occupancy count out of range");
    const std::vector<double> c = occupancy_polynomial(km, B);
    double a = 0;
    for (int j = m; j < static_cast<int>(c.size()); ++j) a += binom_d(j, m) * c[j];
    return (m % 2 == 0) ? a : -a;
}

std::vector<double> occupancy_distribution(const KernelMatrix& km, const std::vector<int>& B) {
    const std::vector<double> c = occupancy_polynomial(km, B);
    std::vector<double> out(B.size() + 1, 0.0);
    for (int m = 0; m <= static_cast<int>(B.size()); ++m) {
        double a = 0;
        for (int j = m; j < static_cast<int>(c.size()); ++j) a += binom_d(j, m) * c[j];
        out[m] = (m % 2 == 0) ? a : -a;
    }
    return out;
}

double eval_polynomial(const std::vector<double>& coeffs, double t) {
    double v = 0;
    for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) v = v * t + coeffs[i];
    return v;
}

SineComparison sine_compare(const KernelMatrix& km, const EquilibriumMeasure& eqm,
                            const IntervalClassification& cls, int center, int radius) {
    if (center < 0 || center >= km.N) throw config_error("center node out of range");
    const double x = km.nodes[center];
    const Segment* seg = cls.segment_at(x);
    if (!seg || seg->kind != SegmentKind::Band)
        throw config_error("sine comparison needs a band-interior center node");

    SineComparison out;
    out.radius = radius;
    out.density_ratio = density_ratio_at(eqm, x);
    out.diag_rel_err = std::abs(km.K(center, center) / out.density_ratio - 1.0);
    const int lo = std::max(0, center - radius), hi = std::min(km.N - 1, center + radius);
    for (int i = lo; i <= hi; ++i)
        for (int j = lo; j <= hi; ++j) {
            if (i == j) continue;
            const double dev = std::abs(km.K(i, j) - sine_entry(out.density_ratio, i - j));
            out.offdiag_max_dev = std::max(out.offdiag_max_dev, dev);
        }
    return out;
}

std::pair<std::vector<double>, std::vector<double>> occupancy_sine_limit(
    const KernelMatrix& km, const EquilibriumMeasure& eqm, const IntervalClassification& cls,
    int j0, const std::vector<int>& offsets) {
    std::vector<int> B;
    for (int o : offsets) B.push_back(j0 + o);
    check_indices(km, B);
    const double x = km.nodes[B.front()];
    const Segment* seg = cls.segment_at(x);
    if (!seg || seg->kind != SegmentKind::Band)
        throw config_error("occupancy comparison needs a band-interior base node");
    const double d = density_ratio_at(eqm, x);
    const int n = static_cast<int>(offsets.size());
    Eigen::MatrixXd S(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) S(a, b) = sine_entry(d, offsets[a] - offsets[b]);
    return {occupancy_polynomial(km, B), char_coeffs(S)};
}

GapDiagnostics gap_diagnostics(const KernelMatrix& km, const IntervalClassification& cls,
                               double trim) {
    GapDiagnostics out;
    for (const Segment& seg : cls.segments) {
        if (seg.kind == SegmentKind::Band) continue;
        GapDiagnostics::Entry e;
        e.kind = seg.kind;
        const double len = seg.right - seg.left;
        e.left = seg.left + trim * len;
        e.right = seg.right - trim * len;
        std::vector<int> in;
        for (int i = 0; i < km.N; ++i)
            if (km.nodes[i] >= e.left && km.nodes[i] <= e.right) in.push_back(i);
        e.interior_nodes = static_cast<int>(in.size());
        for (std::size_t a = 0; a < in.size(); ++a) {
            const int i = in[a];
            const double diag = km.K(i, i);
            e.max_diag = std::max(e.max_diag, seg.kind == SegmentKind::Void
                                                  ? diag
                                                  : std::abs(1.0 - diag));
            for (std::size_t b = a + 1; b < in.size(); ++b) {
                const int j = in[b];
                const double v = std::abs((km.nodes[i] - km.nodes[j]) * km.K(i, j));
                e.max_scaled_offdiag = std::max(e.max_scaled_offdiag, v);
            }
        }
        out.entries.push_back(e);
    }
    return out;
}

} // namespace dopkit
