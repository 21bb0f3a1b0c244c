#include "dopkit/tiling.hpp"

#include "dopkit/errors.hpp"
#include "dopkit/kernels.hpp"
#include "dopkit/orthopoly.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>

namespace dopkit {

namespace {

constexpr double kSqrt3 = 1.7320508075688772935274463415058724;

BigInt big_binom(long n, long k) {
    if (k < 0 || k > n) return 0;
    BigInt r = 1;
    for (long i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;   // exact: r is C(n-k+i, i) after each step
    }
    return r;
}

struct ColumnShape {
    int a_m, b_m, gamma_m, L_m;
};

ColumnShape column_shape(const Hexagon& hex, int m) {
    if (m < 1 || m > hex.a + hex.b - 1) throw config_error("column index out of range");
    ColumnShape s;
    s.a_m = static_cast<int>(std::labs(hex.a - m));
    s.b_m = static_cast<int>(std::labs(hex.b - m));
    s.L_m = static_cast<int>(std::min(std::min<long>(m, hex.a),
                                      std::min<long>(hex.b, hex.a + hex.b - m)));
    s.gamma_m = static_cast<int>(hex.c) + s.L_m - 1;
    return s;
}

std::vector<double> kernel_diag(const LogWeights& lw, int rank, int precision_bits) {
    OrthoBasis basis = build_basis(lw, rank, precision_bits);
    KernelMatrix km = cd_kernel(basis, rank);
    std::vector<double> d(km.N);
    for (int i = 0; i < km.N; ++i) d[i] = km.K(i, i);
    return d;
}

} // namespace

void Hexagon::validate() const {
    if (a < 1 || b < 1 || c < 1) throw config_error("hexagon sides must be positive");
}

BigInt macmahon(const Hexagon& hex) {
    hex.validate();
    BigInt num = 1, den = 1;
    for (long i = 1; i <= hex.a; ++i)
        for (long j = 1; j <= hex.b; ++j)
            for (long k = 1; k <= hex.c; ++k) {
                num *= i + j + k - 1;
                den *= i + j + k - 2;
            }
    BigRat r(num, den);
    if (boost::multiprecision::denominator(r) != 1)
        throw numeric_error("tiling count product did not reduce to an integer");
    return boost::multiprecision::numerator(r);
}

ColumnEnsemble column_ensemble(const Hexagon& hex, int m) {
    hex.validate();
    const ColumnShape s = column_shape(hex, m);
    ColumnEnsemble col;
    col.hex = hex;
    col.m = m;
    col.a_m = s.a_m;
    col.b_m = s.b_m;
    col.gamma_m = s.gamma_m;
    col.L_m = s.L_m;
    auto ns = std::make_shared<NodeSet>(build_nodes(NodeDensity::uniform(0.0, 1.0),
                                                    s.gamma_m + 1));
    col.nodes = ns;
    col.hole_weights = log_weight(WeightSpec::hahn(s.a_m + 1, s.b_m + 1), ns);
    col.particle_weights = log_weight(WeightSpec::associated_hahn(s.a_m + 1, s.b_m + 1), ns);
    return col;
}

std::vector<double> one_point_profile(const ColumnEnsemble& col, int precision_bits) {
    return kernel_diag(col.hole_weights, col.L_m, precision_bits);
}

std::vector<double> particle_profile(const ColumnEnsemble& col, int precision_bits) {
    return kernel_diag(col.particle_weights, static_cast<int>(col.hex.c), precision_bits);
}

TilingEnumeration enumerate_tilings(const Hexagon& hex) {
    hex.validate();
    if (hex.a * hex.b * hex.c > 12) throw config_error("enumeration capped at 12 cells");
    const int a = static_cast<int>(hex.a), b = static_cast<int>(hex.b),
              c = static_cast<int>(hex.c);
    TilingEnumeration out;
    out.count = 0;
    out.hole_counts.assign(a + b - 1, {});
    for (int m = 1; m <= a + b - 1; ++m)
        out.hole_counts[m - 1].assign(column_shape(hex, m).gamma_m + 1, BigInt(0));

    // Tilings correspond to a x b arrays of stacked heights, weakly
    // decreasing along both rows and columns, entries in [0, c].  The holes
    // of column m sit on the array diagonal j - i = m - a; reading the
    // diagonal top-left to bottom-right, entry lambda_t puts a hole at cell
    // c - lambda_t + (t-1).
    std::vector<std::vector<int>> pi(a, std::vector<int>(b, 0));
    std::function<void(int, int)> rec = [&](int i, int j) {
        if (i == a) {
            out.count += 1;
            for (int m = 1; m <= a + b - 1; ++m) {
                const int delta = m - a;
                int t = 0;
                for (int r = std::max(0, -delta); r < a && r + delta < b; ++r) {
                    if (r + delta < 0) continue;
                    const int h = c - pi[r][r + delta] + t;
                    out.hole_counts[m - 1][h] += 1;
                    ++t;
                }
            }
            return;
        }
        const int ni = (j + 1 == b) ? i + 1 : i;
        const int nj = (j + 1 == b) ? 0 : j + 1;
        const int hi = std::min(i > 0 ? pi[i - 1][j] : c, j > 0 ? pi[i][j - 1] : c);
        for (int v = 0; v <= hi; ++v) {
            pi[i][j] = v;
            rec(ni, nj);
        }
    };
    rec(0, 0);
    return out;
}

std::vector<BigRat> hole_marginal_exact(const Hexagon& hex, int m) {
    const ColumnShape s = column_shape(hex, m);
    const int n = s.gamma_m + 1, L = s.L_m;
    // Subset enumeration blows up combinatorially; this oracle is only for
    // cross-checks against exhaustive tiling enumeration.
    if (big_binom(n, L) > 200000) throw config_error("column too large for exact marginals");
    std::vector<BigInt> w(n);
    for (int h = 0; h < n; ++h)
        w[h] = big_binom(h + s.a_m, h) * big_binom(s.gamma_m + s.b_m - h, s.gamma_m - h);

    std::vector<BigInt> num(n, BigInt(0));
    BigInt Z = 0;
    std::vector<int> idx(L);
    for (int i = 0; i < L; ++i) idx[i] = i;
    for (;;) {
        BigInt term = 1;
        for (int i = 0; i < L; ++i) term *= w[idx[i]];
        for (int i = 0; i < L; ++i)
            for (int j = i + 1; j < L; ++j) {
                const BigInt d = idx[j] - idx[i];
                term *= d * d;
            }
        Z += term;
        for (int i = 0; i < L; ++i) num[idx[i]] += term;
        int p = L - 1;
        while (p >= 0 && idx[p] == n - L + p) --p;
        if (p < 0) break;
        ++idx[p];
        for (int i = p + 1; i < L; ++i) idx[i] = idx[i - 1] + 1;
    }
    std::vector<BigRat> out(n);
    for (int h = 0; h < n; ++h) out[h] = BigRat(num[h], Z);
    return out;
}

double column_u(const Hexagon& hex, int m) {
    column_shape(hex, m);
    return (m - hex.a) * kSqrt3 / 2.0;
}

double position_v(const Hexagon& hex, int m, double h) {
    const ColumnShape s = column_shape(hex, m);
    return hex.c - h - (s.a_m + 1) / 2.0;
}

std::array<double, 2> HexagonGeometry::center() const {
    return {(beta - alpha) * kSqrt3 / 4.0, gamma / 2.0 - (alpha + beta) / 4.0};
}

std::array<std::array<double, 2>, 6> HexagonGeometry::vertices() const {
    auto proj = [](double x, double y, double z) -> std::array<double, 2> {
        return {(y - x) * kSqrt3 / 2.0, z - (x + y) / 2.0};
    };
    // Cyclic order around the boundary.
    return {proj(0, 0, gamma),        proj(0, beta, gamma), proj(0, beta, 0),
            proj(alpha, beta, 0),     proj(alpha, 0, 0),    proj(alpha, 0, gamma)};
}

double HexagonGeometry::diameter() const {
    const auto v = vertices();
    double d = 0;
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j)
            d = std::max(d, std::hypot(v[i][0] - v[j][0], v[i][1] - v[j][1]));
    return d;
}

double HexagonGeometry::ellipse_distance(double U, double V) const {
    const auto v = vertices();
    const auto O = center();
    // One tangency condition per parallel side pair: n' Einv n = (n.(P-O))^2
    // for unit normal n and any point P on the side; three conditions pin
    // the symmetric Einv.
    Eigen::Matrix3d Msys;
    Eigen::Vector3d rhs;
    for (int s = 0; s < 3; ++s) {
        const auto& p0 = v[s];
        const auto& p1 = v[s + 1];
        double tx = p1[0] - p0[0], ty = p1[1] - p0[1];
        const double tn = std::hypot(tx, ty);
        tx /= tn;
        ty /= tn;
        const double nx = -ty, ny = tx;
        const double dist = nx * (p0[0] - O[0]) + ny * (p0[1] - O[1]);
        Msys(s, 0) = nx * nx;
        Msys(s, 1) = 2 * nx * ny;
        Msys(s, 2) = ny * ny;
        rhs(s) = dist * dist;
    }
    const Eigen::Vector3d abc = Msys.fullPivLu().solve(rhs);
    Eigen::Matrix2d Einv;
    Einv << abc(0), abc(1), abc(1), abc(2);
    const Eigen::Matrix2d E = Einv.inverse();
    Eigen::Vector2d d(U - O[0], V - O[1]);
    const double q = d.dot(E * d);
    const Eigen::Vector2d grad = 2.0 * (E * d);
    const double gn = grad.norm();
    if (gn == 0) return -std::sqrt(1.0 / std::max(E(0, 0), E(1, 1)));
    return (q - 1.0) / gn;
}

FrozenBoundary frozen_boundary(double alpha, double beta, double gamma, double tau,
                               int n_scale, int grid_m) {
    if (!(alpha > 0 && beta > 0 && gamma > 0)) throw config_error("side lengths must be positive");
    if (!(tau > 0 && tau < alpha + beta)) throw config_error("tau must lie in (0, alpha+beta)");
    Hexagon hex{std::lround(alpha * n_scale), std::lround(beta * n_scale),
                std::lround(gamma * n_scale)};
    hex.validate();
    const int m = static_cast<int>(std::lround(tau * n_scale));
    const ColumnShape s = column_shape(hex, m);
    const double Nn = s.gamma_m + 1;
    const double Ah = s.a_m / Nn, Bh = s.b_m / Nn;
    const double c_ratio = s.L_m / Nn;

    auto xlx = [](double t) { return t > 0 ? t * std::log(t) : 0.0; };
    auto V = [Ah, Bh, xlx](double x) { return -xlx(x + Ah) - xlx(1.0 - x + Bh); };

    FrozenBoundary fb;
    fb.tau = tau;
    fb.m = m;
    fb.eqm = solve(field(V, NodeDensity::uniform(0.0, 1.0)), c_ratio, grid_m);
    fb.cls = classify_intervals(fb.eqm);

    const Segment* band = nullptr;
    for (const Segment& seg : fb.cls.segments)
        if (seg.kind == SegmentKind::Band &&
            (!band || seg.right - seg.left > band->right - band->left))
            band = &seg;
    if (!band) throw numeric_error("no band in the column equilibrium measure");
    fb.x_lo = band->left;
    fb.x_hi = band->right;
    fb.U = column_u(hex, m) / n_scale;
    fb.V_lo = position_v(hex, m, fb.x_lo * Nn - 0.5) / n_scale;
    fb.V_hi = position_v(hex, m, fb.x_hi * Nn - 0.5) / n_scale;
    return fb;
}

} // namespace dopkit
