#include "dopkit/equilibrium.hpp"

#include "dopkit/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dopkit {

namespace {

// Antiderivatives of the log kernel.  G1' = log|u|, F2' = G1, so the double
// integral of log|x-y| over a rectangle of cells is a four-corner sum of F2
// and the single integral over a cell is a two-point difference of G1.
double G1(double u) { return u == 0.0 ? 0.0 : u * std::log(std::abs(u)) - u; }
double F2(double u) { return u == 0.0 ? 0.0 : u * u * (2.0 * std::log(std::abs(u)) - 3.0) / 4.0; }

// Cell edges with equal rho0 mass: cdf(e_i) = i/M.
std::vector<double> cell_edges(const NodeDensity& d, int M) {
    std::vector<double> e(M + 1);
    e[0] = d.a();
    e[M] = d.b();
    for (int i = 1; i < M; ++i) {
        const double t = static_cast<double>(i) / M;
        double lo = d.a(), hi = d.b();
        double x = lo + (hi - lo) * t;
        for (int it = 0; it < 200; ++it) {
            const double f = d.cdf(x) - t;
            if (f > 0)
                hi = x;
            else
                lo = x;
            const double r = d.rho0(x);
            double x1 = r > 0 ? x - f / r : 0.5 * (lo + hi);
            if (!(x1 > lo && x1 < hi)) x1 = 0.5 * (lo + hi);
            if (std::abs(x1 - x) <= 1e-16 * (std::abs(x) + 1.0)) {
                x = x1;
                break;
            }
            x = x1;
        }
        e[i] = x;
    }
    for (int i = 0; i < M; ++i)
        if (!(e[i] < e[i + 1])) throw numeric_error("cell edges not increasing");
    return e;
}

// Projection onto { 0 <= m_i <= cap, sum m = 1 } by bisection on the shift.
void project_capped_simplex(Eigen::VectorXd& m, double cap) {
    const int M = static_cast<int>(m.size());
    double lo = m.minCoeff() - cap, hi = m.maxCoeff();
    for (int it = 0; it < 100; ++it) {
        const double th = 0.5 * (lo + hi);
        double s = 0;
        for (int i = 0; i < M; ++i) s += std::clamp(m[i] - th, 0.0, cap);
        if (s > 1.0)
            lo = th;
        else
            hi = th;
    }
    const double th = 0.5 * (lo + hi);
    for (int i = 0; i < M; ++i) m[i] = std::clamp(m[i] - th, 0.0, cap);
    double delta = 1.0 - m.sum();
    int nfree = 0;
    for (int i = 0; i < M; ++i)
        if (m[i] > 0.0 && m[i] < cap) ++nfree;
    if (nfree > 0) {
        const double bump = delta / nfree;
        for (int i = 0; i < M; ++i)
            if (m[i] > 0.0 && m[i] < cap) m[i] = std::clamp(m[i] + bump, 0.0, cap);
    }
}

struct KktParts {
    double residual;
    double ell;
};

KktParts kkt_from(const Eigen::VectorXd& m, const Eigen::VectorXd& g, double cap) {
    const int M = static_cast<int>(m.size());
    const double tol_b = 1e-12 * cap;
    double ell = 0;
    int nfree = 0;
    for (int i = 0; i < M; ++i)
        if (m[i] > tol_b && m[i] < cap - tol_b) {
            ell += g[i];
            ++nfree;
        }
    if (nfree > 0) {
        ell /= nfree;
    } else {
        double glo = std::numeric_limits<double>::infinity();
        double ghi = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < M; ++i) {
            if (m[i] <= tol_b) glo = std::min(glo, g[i]);
            if (m[i] >= cap - tol_b) ghi = std::max(ghi, g[i]);
        }
        if (!std::isfinite(glo)) glo = ghi;
        if (!std::isfinite(ghi)) ghi = glo;
        ell = 0.5 * (glo + ghi);
    }
    double r = std::abs(m.sum() - 1.0);
    for (int i = 0; i < M; ++i) {
        if (m[i] <= tol_b)
            r = std::max(r, ell - g[i]);
        else if (m[i] >= cap - tol_b)
            r = std::max(r, g[i] - ell);
        else
            r = std::max(r, std::abs(g[i] - ell));
    }
    return {r, ell};
}

} // namespace

FieldPhi field(std::function<double(double)> V, const NodeDensity& density) {
    if (!V) throw config_error("external field requires a potential");
    return FieldPhi{std::move(V), density};
}

double EquilibriumMeasure::total_mass() const {
    return std::accumulate(mass.begin(), mass.end(), 0.0);
}

double EquilibriumMeasure::variational_derivative(double x) const {
    const int M = static_cast<int>(mass.size());
    double s = 0;
    for (int i = 0; i < M; ++i)
        s += mass[i] / cellw[i] * (G1(x - edges[i]) - G1(x - edges[i + 1]));
    return -2.0 * c * s + phi_fn(x);
}

double EquilibriumMeasure::log_transform(int k, double z) const {
    const int M = static_cast<int>(mass.size());
    double s = 0;
    for (int i = 0; i < M; ++i)
        s += mass[i] / cellw[i] * (G1(z - edges[i]) - G1(z - edges[i + 1]));
    return k * s;
}

EquilibriumMeasure solve(const FieldPhi& phi, double c, int M, const SolveOptions& opts) {
    if (!(c > 0.0 && c < 1.0)) throw config_error("constraint ratio c must lie in (0,1)");
    if (M < 4) throw config_error("grid size must be at least 4");

    EquilibriumMeasure out;
    out.c = c;
    out.edges = cell_edges(phi.density, M);
    out.grid.resize(M);
    out.cellw.resize(M);
    for (int i = 0; i < M; ++i) {
        out.grid[i] = 0.5 * (out.edges[i] + out.edges[i + 1]);
        out.cellw[i] = out.edges[i + 1] - out.edges[i];
    }
    const double cap = 1.0 / (c * M);
    out.cap.assign(M, cap);

    // Cellwise-exact averaged kernel: A(i,j) = -avg over cell_i x cell_j of
    // log|x-y|, positive definite on [a,b] of length <= 1 and safe to
    // Cholesky after scaling by 2c.
    Eigen::MatrixXd A(M, M);
    for (int i = 0; i < M; ++i) {
        const double p = out.edges[i], q = out.edges[i + 1];
        for (int j = 0; j <= i; ++j) {
            const double r = out.edges[j], s = out.edges[j + 1];
            double v;
            if (i == j)
                v = 2.0 * F2(q - p);
            else
                v = F2(q - r) - F2(p - r) - F2(q - s) + F2(p - s);
            v = -v / (out.cellw[i] * out.cellw[j]);
            A(i, j) = v;
            A(j, i) = v;
        }
    }
    Eigen::VectorXd fvec(M);
    for (int i = 0; i < M; ++i) fvec[i] = phi.phi(out.grid[i]);

    Eigen::VectorXd m = Eigen::VectorXd::Constant(M, 1.0 / M);
    auto gradient = [&](const Eigen::VectorXd& mm) -> Eigen::VectorXd {
        return 2.0 * c * (A * mm) + fvec;
    };
    auto energy_of = [&](const Eigen::VectorXd& mm, const Eigen::VectorXd& gg) {
        return 0.5 * (mm.dot(gg) + mm.dot(fvec));
    };

    // Step size from the largest eigenvalue of A by power iteration.
    double lmax = 1.0;
    {
        Eigen::VectorXd v = Eigen::VectorXd::Ones(M).normalized();
        for (int it = 0; it < 40; ++it) {
            Eigen::VectorXd w = A * v;
            lmax = std::abs(v.dot(w));
            const double n = w.norm();
            if (n == 0) break;
            v = w / n;
        }
    }
    double step = 1.0 / (2.2 * c * lmax);

    Eigen::VectorXd g = gradient(m);
    double E = energy_of(m, g);
    int iters = 0;
    const double pg_target = opts.use_newton_refinement ? std::max(1e-4, opts.kkt_tol) : opts.kkt_tol;
    const int pg_cap = opts.use_newton_refinement ? std::min(opts.max_iterations, 2000)
                                                  : opts.max_iterations;
    double kkt = kkt_from(m, g, cap).residual;
    while (kkt > pg_target && iters < pg_cap) {
        Eigen::VectorXd trial = m - step * g;
        project_capped_simplex(trial, cap);
        Eigen::VectorXd gt = gradient(trial);
        double Et = energy_of(trial, gt);
        int halvings = 0;
        while (Et > E + 1e-14 * (1.0 + std::abs(E)) && halvings < 40) {
            step *= 0.5;
            trial = m - step * g;
            project_capped_simplex(trial, cap);
            gt = gradient(trial);
            Et = energy_of(trial, gt);
            ++halvings;
        }
        if (Et > E + 1e-12 * (1.0 + std::abs(E))) break;
        m = trial;
        g = gt;
        E = Et;
        ++iters;
        kkt = kkt_from(m, g, cap).residual;
    }

    // Active-set refinement: solve the equality-constrained quadratic
    // program on the current free set, walk toward its minimizer until a
    // bound is hit, and exchange constraints based on the multiplier signs.
    if (opts.use_newton_refinement) {
        const double tol_b = 1e-12 * cap;
        std::vector<int> state(M);   // 0 free, -1 at zero, +1 at cap
        for (int i = 0; i < M; ++i)
            state[i] = m[i] <= tol_b ? -1 : (m[i] >= cap - tol_b ? 1 : 0);
        for (int round = 0; round < 80; ++round) {
            std::vector<int> F;
            for (int i = 0; i < M; ++i)
                if (state[i] == 0) F.push_back(i);
            if (F.empty()) break;
            const int nf = static_cast<int>(F.size());
            Eigen::MatrixXd H(nf, nf);
            Eigen::VectorXd rhs(nf);
            double Sfree = 1.0;
            for (int i = 0; i < M; ++i)
                if (state[i] == 1) Sfree -= cap;
            for (int a = 0; a < nf; ++a) {
                for (int b2 = 0; b2 < nf; ++b2) H(a, b2) = 2.0 * c * A(F[a], F[b2]);
                double r = -fvec[F[a]];
                for (int i = 0; i < M; ++i)
                    if (state[i] == 1) r -= 2.0 * c * A(F[a], i) * cap;
                rhs[a] = r;
            }
            Eigen::LLT<Eigen::MatrixXd> llt(H);
            Eigen::VectorXd u, v;
            if (llt.info() == Eigen::Success) {
                u = llt.solve(rhs);
                v = llt.solve(Eigen::VectorXd::Ones(nf));
            } else {
                Eigen::PartialPivLU<Eigen::MatrixXd> lu(H);
                u = lu.solve(rhs);
                v = lu.solve(Eigen::VectorXd::Ones(nf));
            }
            const double ell = (Sfree - u.sum()) / v.sum();
            Eigen::VectorXd target = u + ell * v;

            // Longest feasible step toward the face minimizer.
            double t = 1.0;
            for (int a = 0; a < nf; ++a) {
                const double cur = m[F[a]], d = target[a] - cur;
                if (d < 0 && cur + t * d < 0) t = -cur / d;
                if (d > 0 && cur + t * d > cap) t = (cap - cur) / d;
            }
            for (int a = 0; a < nf; ++a) m[F[a]] = m[F[a]] + t * (target[a] - m[F[a]]);
            if (t < 1.0) {
                for (int a = 0; a < nf; ++a) {
                    if (m[F[a]] <= tol_b) {
                        m[F[a]] = 0.0;
                        state[F[a]] = -1;
                    } else if (m[F[a]] >= cap - tol_b) {
                        m[F[a]] = cap;
                        state[F[a]] = 1;
                    }
                }
                ++iters;
                continue;
            }
            g = gradient(m);
            const double Enew = energy_of(m, g);
            if (Enew > E + 1e-9 * (1.0 + std::abs(E)))
                throw numeric_error("energy increased during refinement");
            E = Enew;
            ++iters;
            // Multiplier check: release constraints that pull inward.
            const double gs = g.cwiseAbs().maxCoeff() + std::abs(ell);
            bool released = false;
            for (int i = 0; i < M; ++i) {
                if (state[i] == -1 && g[i] < ell - 1e-13 * gs) {
                    state[i] = 0;
                    released = true;
                } else if (state[i] == 1 && g[i] > ell + 1e-13 * gs) {
                    state[i] = 0;
                    released = true;
                }
            }
            if (!released) break;
        }
        g = gradient(m);
        E = energy_of(m, g);
    }

    const KktParts kp = kkt_from(m, g, cap);
    out.mass.assign(m.data(), m.data() + M);
    out.psi.resize(M);
    for (int i = 0; i < M; ++i) out.psi[i] = m[i] / out.cellw[i];
    out.grad.assign(g.data(), g.data() + M);
    out.ell = kp.ell;
    out.kkt_residual = kp.residual;
    out.iterations = iters;
    out.converged = kp.residual <= opts.kkt_tol;
    out.phi_fn = [ph = phi](double x) { return ph.phi(x); };
    return out;
}

const Segment* IntervalClassification::segment_at(double x) const {
    for (const Segment& s : segments)
        if (x >= s.left && x <= s.right) return &s;
    return nullptr;
}

bool IntervalClassification::has(SegmentKind kind) const {
    for (const Segment& s : segments)
        if (s.kind == kind) return true;
    return false;
}

std::string to_string(SegmentKind k) {
    switch (k) {
        case SegmentKind::Void: return "void";
        case SegmentKind::Band: return "band";
        default: return "saturated";
    }
}

IntervalClassification classify_intervals(const EquilibriumMeasure& eqm, double eps_rel) {
    const int M = static_cast<int>(eqm.mass.size());
    const double cap = eqm.cap[0];
    std::vector<SegmentKind> lab(M);
    for (int i = 0; i < M; ++i) {
        if (eqm.mass[i] <= eps_rel * cap)
            lab[i] = SegmentKind::Void;
        else if (eqm.mass[i] >= cap * (1.0 - eps_rel))
            lab[i] = SegmentKind::Saturated;
        else
            lab[i] = SegmentKind::Band;
    }

    struct Run {
        SegmentKind kind;
        int first, last;
    };
    auto collect = [&]() {
        std::vector<Run> runs;
        for (int i = 0; i < M; ++i) {
            if (runs.empty() || runs.back().kind != lab[i])
                runs.push_back({lab[i], i, i});
            else
                runs.back().last = i;
        }
        return runs;
    };

    IntervalClassification out;
    // Runs shorter than 3 cells are grid noise: relabel them after the
    // longer neighbor.  A short run separating two bands marks a genericity
    // problem worth reporting.
    for (;;) {
        auto runs = collect();
        int shortest = -1;
        for (std::size_t r = 0; r < runs.size(); ++r) {
            const int len = runs[r].last - runs[r].first + 1;
            if (len < 3 && runs.size() > 1) {
                if (shortest < 0 || len < runs[shortest].last - runs[shortest].first + 1)
                    shortest = static_cast<int>(r);
            }
        }
        if (shortest < 0) break;
        const auto& run = runs[shortest];
        const Run* left = shortest > 0 ? &runs[shortest - 1] : nullptr;
        const Run* right = shortest + 1 < static_cast<int>(runs.size()) ? &runs[shortest + 1] : nullptr;
        if (left && right && left->kind == SegmentKind::Band && right->kind == SegmentKind::Band)
            out.adjacent_bands = true;
        const Run* take = left;
        if (!take || (right && right->last - right->first > left->last - left->first)) take = right;
        for (int i = run.first; i <= run.last; ++i) lab[i] = take->kind;
    }

    auto runs = collect();
    const double a = eqm.edges.front(), b = eqm.edges.back();
    std::vector<double> bounds;
    bounds.push_back(a);
    for (std::size_t r = 0; r + 1 < runs.size(); ++r) {
        const int i = runs[r].last, j = runs[r + 1].first;
        double x = eqm.edges[j];   // shared cell edge as the fallback
        // A band meets its neighbor with square-root vanishing of the free
        // quantity (density toward a void, cap deficit toward a saturated
        // region), so its square is locally linear; extrapolate that line to
        // zero from the two nearest band cells.
        const bool band_left = runs[r].kind == SegmentKind::Band;
        const bool band_right = runs[r + 1].kind == SegmentKind::Band;
        if (band_left || band_right) {
            const SegmentKind other = band_left ? runs[r + 1].kind : runs[r].kind;
            const int c1 = band_left ? i : j;
            const int c2 = band_left ? i - 1 : j + 1;
            const auto& run = band_left ? runs[r] : runs[r + 1];
            if (c2 >= run.first && c2 <= run.last) {
                auto val = [&](int idx) {
                    const double capd = cap / eqm.cellw[idx];
                    const double y = other == SegmentKind::Saturated ? capd - eqm.psi[idx]
                                                                     : eqm.psi[idx];
                    return y * y;
                };
                const double y1 = val(c1), y2 = val(c2);
                if (y2 > y1) {
                    const double g1 = eqm.grid[c1], g2 = eqm.grid[c2];
                    const double xs = g1 + y1 * (g1 - g2) / (y2 - y1);
                    x = std::clamp(xs, std::min(eqm.grid[i], eqm.grid[j]),
                                   std::max(eqm.grid[i], eqm.grid[j]));
                }
            }
        }
        bounds.push_back(x);
    }
    bounds.push_back(b);
    for (std::size_t r = 0; r < runs.size(); ++r)
        out.segments.push_back({runs[r].kind, bounds[r], bounds[r + 1]});
    out.endpoint_rule_ok = out.segments.front().kind != SegmentKind::Band &&
                           out.segments.back().kind != SegmentKind::Band;
    return out;
}

double edge_exponent_fit(const EquilibriumMeasure& eqm, double edge, bool band_on_right,
                         bool fit_cap_gap) {
    const int M = static_cast<int>(eqm.mass.size());
    const double cap = eqm.cap[0];
    double h = eqm.cellw[M / 2];
    for (int i = 0; i < M; ++i)
        if (edge >= eqm.edges[i] && edge <= eqm.edges[i + 1]) h = eqm.cellw[i];

    std::vector<double> lx, ly;
    double window = 40.0 * h;
    for (int attempt = 0; attempt < 4 && lx.size() < 6; ++attempt) {
        lx.clear();
        ly.clear();
        for (int i = 0; i < M; ++i) {
            const double d = band_on_right ? eqm.grid[i] - edge : edge - eqm.grid[i];
            if (d < 2.5 * h || d > window) continue;
            const double y = fit_cap_gap ? cap / eqm.cellw[i] - eqm.psi[i] : eqm.psi[i];
            if (y <= 0) continue;
            lx.push_back(std::log(d));
            ly.push_back(std::log(y));
        }
        window *= 2.0;
    }
    if (lx.size() < 3) throw numeric_error("too few cells near the edge for an exponent fit");
    const int n = static_cast<int>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace dopkit
