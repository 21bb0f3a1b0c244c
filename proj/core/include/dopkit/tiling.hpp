#ifndef DOPKIT_TILING_HPP
#define DOPKIT_TILING_HPP

#include "dopkit/equilibrium.hpp"
#include "dopkit/nodes_weights.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <memory>
#include <vector>

namespace dopkit {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Hexagon with side lengths a, b, c (counterclockwise b, a, c, b, a, c), all
// interior angles 2*pi/3, tiled by unit rhombi.  Vertical rhombi are the
// "particles" of each column ensemble, horizontal rhombi the "holes".
struct Hexagon {
    long a = 1, b = 1, c = 1;
    void validate() const;
};

// Exact number of rhombus tilings: product over the a x b x c box of
// (i+j+k-1)/(i+j+k-2).
BigInt macmahon(const Hexagon& hex);

// Vertical column m in {1..a+b-1}.  Its gamma_m + 1 cells carry c particles
// and L_m holes; hole positions follow the Hahn law with parameters
// (a_m + 1, b_m + 1), particle positions the associated-Hahn law.
struct ColumnEnsemble {
    Hexagon hex;
    int m = 1;
    int a_m = 0, b_m = 0;
    int gamma_m = 0;   // largest cell index
    int L_m = 0;       // number of holes; c + L_m = gamma_m + 1
    std::shared_ptr<const NodeSet> nodes;   // cells mapped to (j+1/2)/(gamma_m+1)
    LogWeights hole_weights;
    LogWeights particle_weights;
};

ColumnEnsemble column_ensemble(const Hexagon& hex, int m);

// Probability of a hole (resp. particle) at each cell of the column: the
// diagonal of the rank-L_m (resp. rank-c) kernel.
std::vector<double> one_point_profile(const ColumnEnsemble& col, int precision_bits = 256);
std::vector<double> particle_profile(const ColumnEnsemble& col, int precision_bits = 256);

// Exhaustive enumeration for hexagons with a*b*c <= 12.
struct TilingEnumeration {
    BigInt count;
    // hole_counts[m-1][h]: number of (tiling, hole) incidences at cell h of
    // column m; each row sums to count * L_m.
    std::vector<std::vector<BigInt>> hole_counts;
};

TilingEnumeration enumerate_tilings(const Hexagon& hex);

// Exact rational hole marginal of column m from the determinantal law:
// P(hole at h) = sum over L_m-subsets containing h of V(S)^2 prod w / Z.
std::vector<BigRat> hole_marginal_exact(const Hexagon& hex, int m);

// Physical plane: hexagon drawn with the two c-sides vertical, lattice cell
// centers at unit spacing.  Column m sits at horizontal coordinate
// (m - a) sqrt(3)/2; cell h of column m has height c - h - (a_m + 1)/2.
double column_u(const Hexagon& hex, int m);
double position_v(const Hexagon& hex, int m, double h);

// Continuum hexagon with side lengths (alpha, beta, gamma), same drawing.
struct HexagonGeometry {
    double alpha = 1, beta = 1, gamma = 1;

    std::array<double, 2> center() const;
    std::array<std::array<double, 2>, 6> vertices() const;
    double diameter() const;
    // Approximate signed distance from (U, V) to the inscribed ellipse;
    // negative inside.
    double ellipse_distance(double U, double V) const;
};

struct FrozenBoundary {
    double tau = 0;
    int m = 0;
    double x_lo = 0, x_hi = 0;   // band edges in the unit column coordinate
    double U = 0;                // scaled horizontal position of the column
    double V_lo = 0, V_hi = 0;   // scaled heights of x_lo and x_hi
    EquilibriumMeasure eqm;
    IntervalClassification cls;
};

// Solves the continuum hole-ensemble equilibrium problem for the column at
// tau of the hexagon n * (alpha, beta, gamma) and maps the band edges into
// the scaled hexagon plane, where they should trace the inscribed ellipse.
FrozenBoundary frozen_boundary(double alpha, double beta, double gamma, double tau,
                               int n_scale, int grid_m = 2000);

} // namespace dopkit

#endif
