#ifndef DOPKIT_HARNESS_HPP
#define DOPKIT_HARNESS_HPP

#include "dopkit/equilibrium.hpp"
#include "dopkit/orthopoly.hpp"

#include <vector>

namespace dopkit {

// pi_{N,k}(z) * exp(-k * integral log|z-x| dmu(x)).  The two factors are
// combined in log space before exponentiating, so the result is finite
// wherever the polynomial tracks the equilibrium envelope.  |log ratio| > 700
// would overflow a double and raises numeric_error.
double envelope_ratio(const OrthoBasis& b, int k, const EquilibriumMeasure& eqm,
                      double z);

// mu-mass of [lo, hi] for the piecewise-constant measure.
double mass_in(const EquilibriumMeasure& eqm, double lo, double hi);

// sup-distance between the zero-counting CDF of zs (k zeros, each weighted
// 1/k) and the CDF of the equilibrium measure.
double zero_cdf_distance(const ZeroSet& zs, const EquilibriumMeasure& eqm);

struct EnvelopeReport {
    Segment region;                 // the band that was sampled
    double sample_lo = 0, sample_hi = 0;
    std::vector<double> z, r;       // samples of the envelope ratio
    double max_abs = 0, mean_abs = 0;
    int sign_changes = 0;
    // k * mu([sample_lo, sample_hi]): the oscillation count the cosine
    // factor predicts for this window, up to +-2 from the phase ends.
    double expected_oscillations = 0;
};

// Samples the envelope ratio at n_samples equispaced points on the middle
// 60% of a band segment.  The region must be a Band.
EnvelopeReport band_check(const OrthoBasis& b, int k, const EquilibriumMeasure& eqm,
                          const Segment& band, int n_samples);

struct SaturatedReport {
    Segment region;
    int interior_nodes = 0;         // nodes in the middle 60% of the segment
    double max_cos_at_node = 0;     // max_j |cos(pi N (1 - cdf(x_j)))|
    int unmatched_nodes = 0;        // interior nodes with no zero within half a gap
    double max_zero_distance = 0;   // max |zero - node| over matched nodes
    std::vector<double> mid_z, mid_r;   // envelope ratio at internode midpoints
    double envelope_spread = 0;     // max|r| / min|r| over the midpoints
};

// Node-hugging diagnostics on a saturated segment: the quantization-rule
// cosine identity at each interior node, the distance from each interior
// node to its nearest polynomial zero, and the envelope ratio at internode
// midpoints where the cosine factor is at full amplitude.
SaturatedReport saturated_check(const OrthoBasis& b, int k, const EquilibriumMeasure& eqm,
                                const Segment& seg);

struct HardEdgeReport {
    bool right_edge = true;
    double edge = 0;                // the endpoint
    double rho_edge = 0;            // rho0 at the endpoint
    double zeta_span = 0;           // grid spans (-zeta_span, zeta_span)
    // Inside samples sit at internode midpoints (plus the node-to-endpoint
    // midpoint) where |2 cos(pi N int_z rho0)| is at full amplitude;
    // g = |ratio| / |2 cos|.  Outside samples are equispaced in zeta with
    // g = |ratio|.  pred holds the Gamma-factor prediction, dev the relative
    // deviation |g / (fit * pred) - 1|.
    std::vector<double> zeta_in, g_in, pred_in, dev_in;
    std::vector<double> zeta_out, g_out, pred_out, dev_out;
    double fit_in = 0, fit_out = 0;     // one fitted constant per side
    double edge_mismatch = 0;           // |fit_in / fit_out - 1|
    double max_dev_in_unit = 0;         // max dev_in over -1 <= zeta < 0
    double max_dev_out_unit = 0;        // max dev_out over 0 < zeta <= 1
    double edge_zero_offset = 0;        // (outermost zero) - (outermost node)
    bool edge_zero_inward = false;      // outermost zero on the interior side
};

// Gamma-function local law at a hard edge.  The segment touching the chosen
// endpoint must be Saturated (config_error otherwise) and rho0 must be
// positive there.  The zeta window is |z - edge| <= N^{-2/3}.
HardEdgeReport hard_edge_check(const OrthoBasis& b, int k, const EquilibriumMeasure& eqm,
                               const IntervalClassification& cls, bool right_edge);

} // namespace dopkit

#endif
