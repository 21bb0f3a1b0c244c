#include "dopkit/orthopoly.hpp"

#include "dopkit/equilibrium.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace dopkit {

namespace {

// Eigenvalues of the k x k Jacobi matrix in double precision; these seed the
// full-precision polish.  Underflow of an offdiagonal to zero is harmless
// here, it only decouples blocks and the polish recovers the exact locations.
std::vector<double> jacobi_seed(const OrthoBasis& b, int k) {
    if (k == 0) return {};
    Eigen::VectorXd diag(k), sub(std::max(k - 1, 0));
    for (int i = 0; i < k; ++i) diag[i] = b.alpha[i];
    for (int i = 1; i < k; ++i) sub[i - 1] = std::sqrt(b.beta[i]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    std::vector<double> seed(k);
    for (int i = 0; i < k; ++i) seed[i] = es.eigenvalues()[i];
    std::sort(seed.begin(), seed.end());
    return seed;
}

template <class Real>
int sgn(const Real& v) {
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

// Newton refinement of the double seeds at full precision.  Each zero is
// bracketed by midpoints of adjacent seeds (the double eigenvalues resolve
// every zero: consecutive zeros are separated by at least a node gap in
// saturated regions and by ~1/k inside bands), and the bracket safeguards
// the Newton step.
template <class Real>
std::vector<Real> polish_zeros(const BasisMP<Real>& B, int k, const std::vector<double>& seed) {
    std::vector<Real> zs(k);
    if (k == 0) return zs;
    const Real eps = std::numeric_limits<Real>::epsilon();
    std::vector<Real> bracket(k + 1);
    bracket[0] = B.nodes.front();
    bracket[k] = B.nodes.back();
    for (int i = 1; i < k; ++i) bracket[i] = (Real(seed[i - 1]) + Real(seed[i])) / 2;
    std::vector<int> bsign(k + 1);
    for (int i = 0; i <= k; ++i) {
        Real v, dv;
        eval_monic_pair(B, k, bracket[i], v, dv);
        bsign[i] = sgn(v);
    }
    for (int i = 0; i < k; ++i) {
        Real lo = bracket[i], hi = bracket[i + 1];
        int slo = bsign[i];
        Real z(seed[i]);
        if (!(z > lo && z < hi)) z = (lo + hi) / 2;
        const bool bracketed = bsign[i] != 0 && bsign[i + 1] != 0 && bsign[i] != bsign[i + 1];
        // The bisection fallback may legitimately need log2(gap/eps) steps, so
        // the budget scales with the precision.  A zero pinned closer to a node
        // than the evaluation noise floor stops improving and keeps its last
        // bracketed estimate; the separation checks downstream decide whether
        // that estimate is usable at this precision.
        const int budget = 64 + 2 * static_cast<int>(std::numeric_limits<Real>::digits);
        bool done = false;
        for (int iter = 0; iter < budget && !done; ++iter) {
            Real v, dv;
            eval_monic_pair(B, k, z, v, dv);
            if (v == 0) break;
            if (bracketed) {
                if (sgn(v) == slo)
                    lo = z;
                else
                    hi = z;
            }
            Real z1;
            if (dv == 0) {
                z1 = (lo + hi) / 2;
            } else {
                z1 = z - v / dv;
                if (bracketed && !(z1 > lo && z1 < hi)) z1 = (lo + hi) / 2;
            }
            Real dz = z1 > z ? z1 - z : z - z1;
            Real scale = abs(z1) + (B.nodes.back() - B.nodes.front());
            if (dz <= 4 * eps * scale) done = true;
            if (bracketed && hi - lo <= 4 * eps * scale) done = true;
            z = z1;
        }
        zs[i] = z;
    }
    std::sort(zs.begin(), zs.end());
    return zs;
}

// Index of the last node <= z, or -1.
template <class Real>
int gap_index(const std::vector<Real>& nodes, const Real& z) {
    int lo = 0, hi = static_cast<int>(nodes.size()) - 1;
    if (z < nodes[0]) return -1;
    if (z >= nodes[hi]) return hi;
    while (hi - lo > 1) {
        int mid = (lo + hi) / 2;
        if (nodes[mid] <= z)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

} // namespace

OrthoBasis build_basis(const LogWeights& lw, int kmax, int precision_bits) {
    const int N = lw.N();
    if (N < 1) throw config_error("empty weight set");
    if (kmax < 0 || kmax > N - 1) throw config_error("kmax must lie in [0, N-1]");
    const int bits = normalize_precision_bits(precision_bits);
    OrthoBasis b;
    b.N = N;
    b.kmax = kmax;
    b.precision_bits = bits;
    b.nodeset = lw.nodeset;
    b.nodes = lw.nodes();
    b.logw = lw.logw;
    b.alpha.resize(kmax + 1);
    b.beta.resize(kmax + 1);
    b.lognorm.resize(kmax + 1);
    b.Q.resize(N, kmax + 1);
    dispatch_precision(bits, [&](auto tag) {
        using Real = decltype(tag);
        auto mp = build_basis_mp<Real>(lw, kmax);
        for (int k = 0; k <= kmax; ++k) {
            b.alpha[k] = static_cast<double>(mp->alpha[k]);
            b.beta[k] = static_cast<double>(mp->beta[k]);
            b.lognorm[k] = static_cast<double>(mp->lognorm[k]);
            for (int j = 0; j < N; ++j) b.Q(j, k) = static_cast<double>(mp->Q[k][j]);
        }
        b.mp = mp;
    });
    return b;
}

OrthoBasis build_basis_auto(const LogWeights& lw, int kmax) {
    int bits = 128;
    for (;;) {
        try {
            return build_basis(lw, kmax, bits);
        } catch (const precision_error&) {
            if (bits >= 1024) throw;
            bits *= 2;
        }
    }
}

double OrthoBasis::orthonormality_residual() const {
    return visit([](const auto& B) -> double {
        using Real = typename std::decay_t<decltype(B)>::real_type;
        Real worst(0);
        for (int k = 0; k <= B.kmax; ++k) {
            for (int l = k; l <= B.kmax; ++l) {
                Real s(0);
                for (int j = 0; j < B.N; ++j) s += B.Q[k][j] * B.Q[l][j];
                if (k == l) s -= 1;
                Real a = abs(s);
                if (a > worst) worst = a;
            }
        }
        return static_cast<double>(worst);
    });
}

std::complex<double> evaluate(const OrthoBasis& b, int k, std::complex<double> z, bool monic) {
    if (k < 0 || k > b.kmax) throw config_error("degree out of range");
    return b.visit([&](const auto& B) -> std::complex<double> {
        using Real = typename std::decay_t<decltype(B)>::real_type;
        Cplx<Real> zz(Real(z.real()), Real(z.imag()));
        Cplx<Real> v = eval_monic_cplx(B, k, zz);
        if (!monic) v = exp(-B.lognorm[k]) * v;
        return {static_cast<double>(v.re), static_cast<double>(v.im)};
    });
}

LogValue evaluate_log(const OrthoBasis& b, int k, double z, bool monic) {
    if (k < 0 || k > b.kmax) throw config_error("degree out of range");
    return b.visit([&](const auto& B) -> LogValue {
        using Real = typename std::decay_t<decltype(B)>::real_type;
        Real val, dval;
        eval_monic_pair(B, k, Real(z), val, dval);
        if (val == 0) return {-std::numeric_limits<double>::infinity(), 0};
        Real la = log(abs(val));
        if (!monic) la -= B.lognorm[k];
        return {static_cast<double>(la), val > 0 ? 1 : -1};
    });
}

ZeroSet zeros(const OrthoBasis& b, int k) {
    if (k < 0 || k > b.kmax) throw config_error("degree out of range");
    ZeroSet out;
    out.N = b.N;
    out.k = k;
    if (k == 0) return out;
    const std::vector<double> seed = jacobi_seed(b, k);
    b.visit([&](const auto& B) {
        using Real = typename std::decay_t<decltype(B)>::real_type;
        std::vector<Real> zs = polish_zeros(B, k, seed);
        // true zeros are simple, so a coincident pair always means the
        // refinement could not separate them at this precision
        for (int i = 0; i + 1 < k; ++i)
            if (!(zs[i] < zs[i + 1]))
                throw precision_error("repeated zero at degree " + std::to_string(k), k);
        if (!(zs.front() > B.nodes.front() && zs.back() < B.nodes.back()))
            throw precision_error("zero outside the open node hull at degree " +
                                      std::to_string(k),
                                  k);
        out.zeros.resize(k);
        out.nearest.resize(k);
        out.offset.resize(k);
        int prev_gap = -2;
        for (int i = 0; i < k; ++i) {
            const int g = gap_index(B.nodes, zs[i]);
            if (g == prev_gap)
                throw precision_error("two zeros inside one internode interval at degree " +
                                          std::to_string(k),
                                      k);
            prev_gap = g;
            Real dl = zs[i] - B.nodes[g];
            Real dr = B.nodes[g + 1] - zs[i];
            const int nearest = dl <= dr ? g : g + 1;
            out.zeros[i] = static_cast<double>(zs[i]);
            out.nearest[i] = nearest;
            out.offset[i] = static_cast<double>(zs[i] - B.nodes[nearest]);
        }
    });
    return out;
}

bool interlace_ok(const OrthoBasis& b, int k, double* worst_margin) {
    if (k < 1 || k > b.kmax) throw config_error("degree out of range");
    const std::vector<double> seed_hi = jacobi_seed(b, k);
    const std::vector<double> seed_lo = jacobi_seed(b, k - 1);
    return b.visit([&](const auto& B) -> bool {
        using Real = typename std::decay_t<decltype(B)>::real_type;
        std::vector<Real> zh = polish_zeros(B, k, seed_hi);
        std::vector<Real> zl = polish_zeros(B, k - 1, seed_lo);
        Real min_gap = B.nodes[1] - B.nodes[0];
        for (int j = 1; j + 1 < B.N; ++j) min_gap = std::min(min_gap, B.nodes[j + 1] - B.nodes[j]);
        bool ok = true;
        Real worst = std::numeric_limits<Real>::max();
        for (int i = 0; i < k - 1; ++i) {
            Real a = zl[i] - zh[i];
            Real c = zh[i + 1] - zl[i];
            if (!(a > 0 && c > 0)) ok = false;
            worst = std::min(worst, std::min(a, c));
        }
        if (k == 1) worst = min_gap;
        if (worst_margin) *worst_margin = static_cast<double>(worst / min_gap);
        return ok;
    });
}

RhpMatrix rhp_matrix(const OrthoBasis& b, int k, std::complex<double> z) {
    if (k < 0 || k > b.kmax) throw config_error("degree out of range");
    RhpMatrix R;
    R.z = z;
    b.visit([&](const auto& B) {
        using Real = typename std::decay_t<decltype(B)>::real_type;
        Cplx<Real> zz(Real(z.real()), Real(z.imag()));
        for (int j = 0; j < B.N; ++j)
            if (zz.im == 0 && zz.re == B.nodes[j])
                throw numeric_error("matrix evaluation at a node");
        auto cast = [](const Cplx<Real>& v) {
            return std::complex<double>(static_cast<double>(v.re), static_cast<double>(v.im));
        };
        // Column 2 entries are Cauchy sums of the row's polynomial against
        // the weights; scale carries the norm factor that turns stored
        // q-values back into polynomial values.
        auto cauchy = [&](int deg, const Real& scale) {
            Cplx<Real> s(Real(0));
            for (int j = 0; j < B.N; ++j) {
                Real num = B.sqrtw[j] * B.Q[deg][j] * scale;
                s = s + Cplx<Real>(num) / (zz - Cplx<Real>(B.nodes[j]));
            }
            return s;
        };
        R.entry[0][0] = cast(eval_monic_cplx(B, k, zz));
        R.entry[0][1] = cast(cauchy(k, exp(B.lognorm[k])));
        if (k == 0) {
            R.entry[1][0] = 0.0;
            R.entry[1][1] = 1.0;
        } else {
            Cplx<Real> p = eval_monic_cplx(B, k - 1, zz);
            R.entry[1][0] = cast(exp(-2 * B.lognorm[k - 1]) * p);
            R.entry[1][1] = cast(cauchy(k - 1, exp(-B.lognorm[k - 1])));
        }
    });
    return R;
}

double borodin_residual(const OrthoBasis& b, int k, std::vector<double>* per_node) {
    if (k < 1 || k > b.N - 1) throw config_error("degree must lie in [1, N-1]");
    if (k - 1 > b.kmax) throw config_error("basis degree range too small");
    return b.visit([&](const auto& B) -> double {
        using Real = typename std::decay_t<decltype(B)>::real_type;
        const int N = B.N;
        std::vector<Real> s(N, Real(0));
        for (int l = 0; l < N; ++l)
            for (int n = 0; n < N; ++n)
                if (n != l) s[l] += log(abs(B.nodes[l] - B.nodes[n]));
        // Dual weights satisfy w wbar prod(x_l - x_n)^2 = 1; build the dual
        // basis at the same precision so the identity check is not limited
        // by double rounding.
        std::vector<Real> wbar(N);
        for (int l = 0; l < N; ++l) wbar[l] = exp(-(log(B.w[l]) + 2 * s[l]));
        auto D = detail::stieltjes<Real>(B.nodes, std::move(wbar), N - k);
        if (per_node) per_node->assign(N, 0.0);
        const int kd = N - k;
        Real worst(0);
        for (int l = 0; l < N; ++l) {
            Real lhs = D->Q[kd][l] * exp(D->lognorm[kd]) / D->sqrtw[l];
            Real rhs = B.sqrtw[l] * B.Q[k - 1][l] * exp(s[l] - B.lognorm[k - 1]);
            if ((N - 1 - l) % 2 != 0) rhs = -rhs;
            Real denom = std::max(abs(lhs), abs(rhs));
            Real resid = denom > 0 ? abs(lhs - rhs) / denom : Real(0);
            if (per_node) (*per_node)[l] = static_cast<double>(resid);
            if (resid > worst) worst = resid;
        }
        return static_cast<double>(worst);
    });
}

ZeroClassification classify_zeros(const ZeroSet& zs, const OrthoBasis& b,
                                  const IntervalClassification& segments) {
    ZeroClassification out;
    const int k = zs.k;
    for (const Segment& seg : segments.segments) {
        if (seg.kind != SegmentKind::Saturated) continue;
        std::vector<int> nodes_in;
        for (int j = 0; j < b.N; ++j)
            if (b.nodes[j] > seg.left && b.nodes[j] < seg.right) nodes_in.push_back(j);
        if (nodes_in.size() < 2) continue;
        // Zeros whose nearest node lies in this region, grouped by node.
        std::map<int, std::vector<int>> claims;
        for (int i = 0; i < k; ++i) {
            if (!(zs.zeros[i] > seg.left && zs.zeros[i] < seg.right)) continue;
            if (zs.nearest[i] < nodes_in.front() || zs.nearest[i] > nodes_in.back()) continue;
            claims[zs.nearest[i]].push_back(i);
        }
        int n_spurious = 0;
        std::vector<char> covered(b.N, 0);   // covered[g]: hurwitz zero in [x_g, x_{g+1}]
        for (auto& [node, idxs] : claims) {
            int best = idxs.front();
            for (int i : idxs)
                if (std::abs(zs.offset[i]) < std::abs(zs.offset[best])) best = i;
            out.hurwitz.push_back({best, node, zs.offset[best]});
            const int g = zs.offset[best] >= 0 ? node : node - 1;
            if (g >= 0 && g + 1 < b.N) covered[g] = 1;
            for (int i : idxs)
                if (i != best) {
                    out.spurious.push_back(i);
                    ++n_spurious;
                }
        }
        int n_disloc = 0;
        for (std::size_t t = 0; t + 1 < nodes_in.size(); ++t) {
            const int g = nodes_in[t];
            if (nodes_in[t + 1] == g + 1 && !covered[g]) {
                out.dislocations.emplace_back(g, g + 1);
                ++n_disloc;
            }
        }
        out.worst_dislocations_in_region = std::max(out.worst_dislocations_in_region, n_disloc);
        out.worst_spurious_in_region = std::max(out.worst_spurious_in_region, n_spurious);
        if (n_disloc > 1 || n_spurious > 1) out.within_bounds = false;
    }
    return out;
}

} // namespace dopkit
