#include "dopkit/harness.hpp"

#include "dopkit/errors.hpp"

#include "doctest.h"

#include <cmath>
#include <memory>
#include <vector>

using namespace dopkit;

namespace {

struct Setup {
    std::shared_ptr<const NodeSet> ns;
    LogWeights lw;
    OrthoBasis basis;
    EquilibriumMeasure eqm;
    IntervalClassification cls;
};

Setup make_setup(double p, int N, int k, int M) {
    Setup s{std::make_shared<const NodeSet>(build_nodes(NodeDensity::uniform(0.0, 1.0), N)),
            {}, {}, {}, {}};
    s.lw = log_weight(WeightSpec::krawtchouk(p), s.ns);
    s.basis = build_basis_auto(s.lw, k);
    s.eqm = solve(field(weight_potential(WeightSpec::krawtchouk(p)),
                        NodeDensity::uniform(0.0, 1.0)),
                  0.5, M);
    s.cls = classify_intervals(s.eqm);
    return s;
}

} // namespace

TEST_CASE("measure mass over windows") {
    Setup s = make_setup(0.5, 20, 10, 200);
    CHECK(mass_in(s.eqm, 0.25, 0.75) == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(mass_in(s.eqm, -1.0, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mass_in(s.eqm, 0.5, 0.3) == 0.0);
}

TEST_CASE("zero-counting distance to the minimizer is small in the bulk") {
    Setup s = make_setup(0.5, 100, 50, 400);
    ZeroSet zs = zeros(s.basis, 50);
    CHECK(zero_cdf_distance(zs, s.eqm) < 0.1);

    ZeroSet none = zeros(s.basis, 0);
    CHECK_THROWS_AS(zero_cdf_distance(none, s.eqm), config_error);
}

TEST_CASE("band envelope oscillates at the equilibrium frequency") {
    Setup s = make_setup(0.5, 100, 50, 400);
    REQUIRE(s.cls.segments.size() == 1);
    EnvelopeReport rep = band_check(s.basis, 50, s.eqm, s.cls.segments[0], 2000);
    CHECK(rep.sample_lo > rep.region.left);
    CHECK(rep.sample_hi < rep.region.right);
    CHECK(rep.max_abs > 0.1);
    CHECK(rep.max_abs < 10.0);
    CHECK(rep.mean_abs > 0.01);
    CHECK(std::fabs(rep.sign_changes - rep.expected_oscillations) <= 3.0);

    CHECK_THROWS_AS(band_check(s.basis, 50, s.eqm,
                               Segment{SegmentKind::Void, 0.0, 0.1}, 100),
                    config_error);
}

TEST_CASE("envelope ratio ignores a constant shift of the field") {
    const int N = 40, k = 20;
    Setup s = make_setup(0.6, N, k, 300);

    // same ensemble with V replaced by V - 1: weights scale by e^N
    std::vector<double> shifted = s.lw.logw;
    for (double& v : shifted) v += N;
    LogWeights lw2{s.ns, shifted};
    OrthoBasis b2 = build_basis_auto(lw2, k);
    auto V = weight_potential(WeightSpec::krawtchouk(0.6));
    EquilibriumMeasure eqm2 =
        solve(field([&](double x) { return V(x) - 1.0; }, NodeDensity::uniform(0.0, 1.0)),
              0.5, 300);
    CHECK(eqm2.ell == doctest::Approx(s.eqm.ell - 1.0).epsilon(1e-7));

    for (double z : {0.35, 0.45, 0.5, 0.55, 0.62}) {
        double r1 = envelope_ratio(s.basis, k, s.eqm, z);
        double r2 = envelope_ratio(b2, k, eqm2, z);
        CHECK(std::fabs(r1 - r2) <= 1e-7 * std::max(1.0, std::fabs(r1)));
    }
}

TEST_CASE("saturated region pins the cosine and the zeros to the nodes") {
    Setup s = make_setup(0.8, 100, 50, 600);
    REQUIRE(s.cls.segments.size() == 3);
    REQUIRE(s.cls.segments[2].kind == SegmentKind::Saturated);

    SaturatedReport rep = saturated_check(s.basis, 50, s.eqm, s.cls.segments[2]);
    CHECK(rep.interior_nodes >= 2);
    CHECK(rep.max_cos_at_node < 1e-12);
    CHECK(rep.unmatched_nodes <= 1);
    CHECK(rep.max_zero_distance < 0.5 / 100);
    CHECK(rep.envelope_spread >= 1.0);
    REQUIRE(rep.mid_r.size() >= 1);

    CHECK_THROWS_AS(saturated_check(s.basis, 50, s.eqm, s.cls.segments[1]), config_error);

    // right endpoint is saturated: the law applies; the left one is a void
    HardEdgeReport he = hard_edge_check(s.basis, 50, s.eqm, s.cls, true);
    CHECK(he.right_edge);
    CHECK(he.edge == doctest::Approx(1.0));
    CHECK(he.zeta_in.size() >= 2);
    CHECK(he.zeta_out.size() >= 2);
    CHECK(he.fit_in > 0.0);
    CHECK(he.fit_out > 0.0);
    CHECK(he.edge_mismatch < 1.0);
    CHECK(he.max_dev_in_unit < 1.0);
    CHECK(he.max_dev_out_unit < 1.0);
    CHECK(he.edge_zero_inward);
    CHECK(he.edge_zero_offset < 0.0);

    CHECK_THROWS_AS(hard_edge_check(s.basis, 50, s.eqm, s.cls, false), config_error);
}
