#ifndef DOPKIT_EQUILIBRIUM_HPP
#define DOPKIT_EQUILIBRIUM_HPP

#include "dopkit/nodes_weights.hpp"

#include <functional>
#include <string>
#include <vector>

namespace dopkit {

// External field phi(x) = V(x) + integral of log|x-y| rho0(y) dy.
struct FieldPhi {
    std::function<double(double)> V;
    NodeDensity density;

    double phi(double x) const { return V(x) + density.log_potential(x); }
};

FieldPhi field(std::function<double(double)> V, const NodeDensity& density);

// Minimizer of  c * double-integral log(1/|x-y|) dmu dmu + integral phi dmu
// over measures with unit mass and density between 0 and rho0/c, discretized
// as piecewise-constant masses on M cells of equal rho0-mass.
struct EquilibriumMeasure {
    double c = 0.5;
    std::vector<double> edges;     // M+1 cell edges
    std::vector<double> grid;      // M cell midpoints
    std::vector<double> cellw;     // cell widths
    std::vector<double> mass;      // cell masses, 0 <= mass_i <= cap_i, sum = 1
    std::vector<double> cap;       // per-cell mass cap = 1/(c M)
    std::vector<double> psi;       // density mass_i / cellw_i
    std::vector<double> grad;      // variational derivative at cell midpoints
    double ell = 0.0;              // multiplier: band average of grad
    double kkt_residual = 0.0;
    int iterations = 0;
    bool converged = false;

    double total_mass() const;
    // Variational derivative -2c integral log|x-y| dmu + phi at arbitrary x,
    // using the same exact cell integrals as the solver.
    double variational_derivative(double x) const;
    // k * integral log|z-x| dmu(x); exact for the piecewise-constant measure.
    double log_transform(int k, double z) const;

    // Retained for variational_derivative at off-grid points.
    std::function<double(double)> phi_fn;
};

struct SolveOptions {
    int max_iterations = 100000;
    double kkt_tol = 1e-10;
    bool use_newton_refinement = true;
};

EquilibriumMeasure solve(const FieldPhi& phi, double c, int M,
                         const SolveOptions& opts = {});

enum class SegmentKind { Void, Band, Saturated };

struct Segment {
    SegmentKind kind;
    double left, right;
};

struct IntervalClassification {
    std::vector<Segment> segments;   // tile [a,b] in order
    bool endpoint_rule_ok = true;    // first/last segment not Band
    bool adjacent_bands = false;     // genericity violation if true

    const Segment* segment_at(double x) const;
    bool has(SegmentKind kind) const;
};

IntervalClassification classify_intervals(const EquilibriumMeasure& eqm,
                                          double eps_rel = 1e-6);

std::string to_string(SegmentKind k);

// Least-squares slope of log(psi) against log(distance to edge) on the band
// side of a segment boundary; a clean constrained minimizer gives 0.5.
double edge_exponent_fit(const EquilibriumMeasure& eqm, double edge, bool band_on_right,
                         bool fit_cap_gap);

} // namespace dopkit

#endif
