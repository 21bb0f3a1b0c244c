#include "dopkit/harness.hpp"

#include "dopkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace dopkit {

namespace {

constexpr double kPi = std::numbers::pi;

// Distance from z to the endpoint in units of 1/(N rho0(edge)), signed so
// that outside the node interval is positive.
double zeta_of(double z, double edge, double nrho, bool right_edge) {
    return right_edge ? nrho * (z - edge) : nrho * (edge - z);
}

// log of Gamma(1/2 - zeta) / (sqrt(2 pi) e^zeta (-zeta)^(-zeta)), zeta < 0.
double log_pred_inside(double zeta) {
    return std::lgamma(0.5 - zeta) - 0.5 * std::log(2 * kPi) - zeta +
           zeta * std::log(-zeta);
}

// log of sqrt(2 pi) e^(-zeta) zeta^zeta / Gamma(1/2 + zeta), zeta > 0.
double log_pred_outside(double zeta) {
    return 0.5 * std::log(2 * kPi) - zeta + zeta * std::log(zeta) -
           std::lgamma(0.5 + zeta);
}

double fit_scale(const std::vector<double>& g, const std::vector<double>& pred) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        num += g[i] * pred[i];
        den += pred[i] * pred[i];
    }
    if (!(den > 0)) throw numeric_error("degenerate hard-edge fit");
    return num / den;
}

} // namespace

double envelope_ratio(const OrthoBasis& b, int k, const EquilibriumMeasure& eqm,
                      double z) {
    LogValue lv = evaluate_log(b, k, z, true);
    if (lv.sign == 0) return 0.0;
    const double lr = lv.log_abs - eqm.log_transform(k, z);
    if (!(lr < 700.0))
        throw numeric_error("envelope ratio overflows double at z = " + std::to_string(z));
    return lv.sign * std::exp(lr);
}

double mass_in(const EquilibriumMeasure& eqm, double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    const int M = static_cast<int>(eqm.mass.size());
    double total = 0;
    for (int i = 0; i < M; ++i) {
        const double el = eqm.edges[i], er = eqm.edges[i + 1];
        const double ov = std::min(hi, er) - std::max(lo, el);
        if (ov > 0) total += eqm.mass[i] * ov / (er - el);
    }
    return total;
}

double zero_cdf_distance(const ZeroSet& zs, const EquilibriumMeasure& eqm) {
    const int k = zs.k;
    if (k < 1) throw config_error("zero-counting CDF needs at least one zero");
    const int M = static_cast<int>(eqm.mass.size());
    std::vector<double> cum(M + 1, 0.0);
    for (int i = 0; i < M; ++i) cum[i + 1] = cum[i] + eqm.mass[i];
    auto F = [&](double x) -> double {
        if (x <= eqm.edges.front()) return 0.0;
        if (x >= eqm.edges.back()) return cum[M];
        const int i = static_cast<int>(std::upper_bound(eqm.edges.begin(), eqm.edges.end(), x) -
                                       eqm.edges.begin()) - 1;
        return cum[i] + eqm.mass[i] * (x - eqm.edges[i]) / (eqm.edges[i + 1] - eqm.edges[i]);
    };
    double sup = 0;
    for (int i = 0; i < k; ++i) {
        const double fm = F(zs.zeros[i]);
        sup = std::max(sup, std::abs(fm - static_cast<double>(i) / k));
        sup = std::max(sup, std::abs(fm - static_cast<double>(i + 1) / k));
    }
    return sup;
}

EnvelopeReport band_check(const OrthoBasis& b, int k, const EquilibriumMeasure& eqm,
                          const Segment& band, int n_samples) {
    if (band.kind != SegmentKind::Band)
        throw config_error("band_check requires a Band segment");
    if (n_samples < 2) throw config_error("band_check needs at least two samples");
    EnvelopeReport rep;
    rep.region = band;
    const double len = band.right - band.left;
    rep.sample_lo = band.left + 0.2 * len;
    rep.sample_hi = band.right - 0.2 * len;
    rep.z.reserve(n_samples);
    rep.r.reserve(n_samples);
    double sum_abs = 0;
    int prev_sign = 0;
    for (int s = 0; s < n_samples; ++s) {
        const double z = rep.sample_lo + (rep.sample_hi - rep.sample_lo) * s / (n_samples - 1);
        const double r = envelope_ratio(b, k, eqm, z);
        rep.z.push_back(z);
        rep.r.push_back(r);
        const double a = std::abs(r);
        sum_abs += a;
        rep.max_abs = std::max(rep.max_abs, a);
        const int sg = (r > 0) - (r < 0);
        if (sg != 0) {
            if (prev_sign != 0 && sg != prev_sign) ++rep.sign_changes;
            prev_sign = sg;
        }
    }
    rep.mean_abs = sum_abs / n_samples;
    rep.expected_oscillations = k * mass_in(eqm, rep.sample_lo, rep.sample_hi);
    return rep;
}

SaturatedReport saturated_check(const OrthoBasis& b, int k, const EquilibriumMeasure& eqm,
                                const Segment& seg) {
    if (seg.kind != SegmentKind::Saturated)
        throw config_error("saturated_check requires a Saturated segment");
    if (!b.nodeset) throw config_error("basis carries no node density");
    const NodeDensity& density = b.nodeset->density;
    const int N = b.N;
    const double len = seg.right - seg.left;
    const double lo = seg.left + 0.2 * len, hi = seg.right - 0.2 * len;

    std::vector<int> idx;
    for (int j = 0; j < N; ++j)
        if (b.nodes[j] >= lo && b.nodes[j] <= hi) idx.push_back(j);
    if (idx.empty())
        throw config_error("no nodes in the trimmed saturated segment");

    SaturatedReport rep;
    rep.region = seg;
    rep.interior_nodes = static_cast<int>(idx.size());

    for (int j : idx) {
        const double t = N * (1.0 - density.cdf(b.nodes[j]));
        rep.max_cos_at_node = std::max(rep.max_cos_at_node, std::abs(std::cos(kPi * t)));
    }

    const ZeroSet zs = zeros(b, k);
    for (int j : idx) {
        const double x = b.nodes[j];
        double halfgap = std::numeric_limits<double>::infinity();
        if (j > 0) halfgap = std::min(halfgap, (x - b.nodes[j - 1]) / 2);
        if (j + 1 < N) halfgap = std::min(halfgap, (b.nodes[j + 1] - x) / 2);
        auto it = std::lower_bound(zs.zeros.begin(), zs.zeros.end(), x);
        double d = std::numeric_limits<double>::infinity();
        if (it != zs.zeros.end()) d = std::min(d, std::abs(*it - x));
        if (it != zs.zeros.begin()) d = std::min(d, std::abs(*(it - 1) - x));
        if (d <= halfgap)
            rep.max_zero_distance = std::max(rep.max_zero_distance, d);
        else
            ++rep.unmatched_nodes;
    }

    double rmin = std::numeric_limits<double>::infinity(), rmax = 0;
    for (std::size_t t = 0; t + 1 < idx.size(); ++t) {
        if (idx[t + 1] != idx[t] + 1) continue;
        const double mid = (b.nodes[idx[t]] + b.nodes[idx[t + 1]]) / 2;
        const double r = envelope_ratio(b, k, eqm, mid);
        rep.mid_z.push_back(mid);
        rep.mid_r.push_back(r);
        rmin = std::min(rmin, std::abs(r));
        rmax = std::max(rmax, std::abs(r));
    }
    if (!rep.mid_r.empty())
        rep.envelope_spread = rmin > 0 ? rmax / rmin
                                       : std::numeric_limits<double>::infinity();
    return rep;
}

HardEdgeReport hard_edge_check(const OrthoBasis& b, int k, const EquilibriumMeasure& eqm,
                               const IntervalClassification& cls, bool right_edge) {
    if (cls.segments.empty()) throw config_error("empty classification");
    const Segment& seg = right_edge ? cls.segments.back() : cls.segments.front();
    if (seg.kind != SegmentKind::Saturated)
        throw config_error("hard-edge law needs the endpoint segment saturated");
    if (!b.nodeset) throw config_error("basis carries no node density");
    const NodeDensity& density = b.nodeset->density;
    const int N = b.N;
    const double edge = right_edge ? density.b() : density.a();
    const double rho = density.rho0(edge);
    if (!(rho > 0))
        throw numeric_error("node density vanishes at the hard edge");

    HardEdgeReport rep;
    rep.right_edge = right_edge;
    rep.edge = edge;
    rep.rho_edge = rho;
    const double nrho = N * rho;
    rep.zeta_span = nrho * std::pow(static_cast<double>(N), -2.0 / 3.0);

    auto cos_amp = [&](double z) -> double {
        const double t = right_edge ? N * (1.0 - density.cdf(z)) : N * density.cdf(z);
        return std::cos(kPi * t);
    };
    auto push_inside = [&](double z) -> bool {
        const double zeta = zeta_of(z, edge, nrho, right_edge);
        if (zeta < -rep.zeta_span) return false;
        const double c = cos_amp(z);
        if (std::abs(c) < 0.05) return true;   // node-adjacent degenerate point
        rep.zeta_in.push_back(zeta);
        rep.g_in.push_back(std::abs(envelope_ratio(b, k, eqm, z)) / (2 * std::abs(c)));
        rep.pred_in.push_back(std::exp(log_pred_inside(zeta)));
        return true;
    };

    if (right_edge) {
        push_inside((b.nodes[N - 1] + edge) / 2);
        for (int i = N - 1; i >= 1; --i)
            if (!push_inside((b.nodes[i] + b.nodes[i - 1]) / 2)) break;
    } else {
        push_inside((b.nodes[0] + edge) / 2);
        for (int i = 0; i + 1 < N; ++i)
            if (!push_inside((b.nodes[i] + b.nodes[i + 1]) / 2)) break;
    }

    for (int j = 1;; ++j) {
        const double zeta = 0.25 * j;
        if (zeta > rep.zeta_span) break;
        const double z = right_edge ? edge + zeta / nrho : edge - zeta / nrho;
        rep.zeta_out.push_back(zeta);
        rep.g_out.push_back(std::abs(envelope_ratio(b, k, eqm, z)));
        rep.pred_out.push_back(std::exp(log_pred_outside(zeta)));
    }

    if (rep.zeta_in.size() < 2 || rep.zeta_out.size() < 2)
        throw numeric_error("hard-edge window contains too few sample points");

    rep.fit_in = fit_scale(rep.g_in, rep.pred_in);
    rep.fit_out = fit_scale(rep.g_out, rep.pred_out);
    if (!(rep.fit_out != 0))
        throw numeric_error("vanishing hard-edge outside amplitude");
    rep.edge_mismatch = std::abs(rep.fit_in / rep.fit_out - 1.0);

    rep.dev_in.resize(rep.zeta_in.size());
    for (std::size_t i = 0; i < rep.zeta_in.size(); ++i) {
        rep.dev_in[i] = std::abs(rep.g_in[i] / (rep.fit_in * rep.pred_in[i]) - 1.0);
        if (rep.zeta_in[i] >= -1.0 - 1e-9)
            rep.max_dev_in_unit = std::max(rep.max_dev_in_unit, rep.dev_in[i]);
    }
    rep.dev_out.resize(rep.zeta_out.size());
    for (std::size_t i = 0; i < rep.zeta_out.size(); ++i) {
        rep.dev_out[i] = std::abs(rep.g_out[i] / (rep.fit_out * rep.pred_out[i]) - 1.0);
        if (rep.zeta_out[i] <= 1.0 + 1e-9)
            rep.max_dev_out_unit = std::max(rep.max_dev_out_unit, rep.dev_out[i]);
    }

    const ZeroSet zs = zeros(b, k);
    if (right_edge) {
        rep.edge_zero_offset = zs.offset.back();
        rep.edge_zero_inward = zs.nearest.back() == N - 1 && zs.offset.back() < 0;
    } else {
        rep.edge_zero_offset = zs.offset.front();
        rep.edge_zero_inward = zs.nearest.front() == 0 && zs.offset.front() > 0;
    }
    return rep;
}

} // namespace dopkit
