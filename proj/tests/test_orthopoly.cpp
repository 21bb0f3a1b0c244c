#include "dopkit/orthopoly.hpp"

#include "dopkit/equilibrium.hpp"
#include "dopkit/errors.hpp"
#include "dopkit/real.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <vector>

using namespace dopkit;

namespace {

std::shared_ptr<const NodeSet> unit_nodes(int N) {
    return std::make_shared<const NodeSet>(build_nodes(NodeDensity::uniform(0.0, 1.0), N));
}

// Classical Gram-Schmidt on the monomial ladder, with one re-orthogonalization
// pass.  Column k is x^k sqrt(w) minus its projection on the earlier columns,
// normalized; its pre-normalization length equals the monic norm.
struct DenseGS {
    std::vector<std::vector<Real256>> q;
    std::vector<Real256> lognorm;
};

DenseGS dense_gs(const std::vector<Real256>& x, const std::vector<Real256>& w, int kmax) {
    const int N = static_cast<int>(x.size());
    DenseGS out;
    out.q.assign(kmax + 1, std::vector<Real256>(N));
    out.lognorm.resize(kmax + 1);
    for (int k = 0; k <= kmax; ++k) {
        std::vector<Real256>& v = out.q[k];
        for (int j = 0; j < N; ++j) v[j] = pow(x[j], k) * sqrt(w[j]);
        for (int pass = 0; pass < 2; ++pass) {
            for (int n = 0; n < k; ++n) {
                Real256 c(0);
                for (int j = 0; j < N; ++j) c += out.q[n][j] * v[j];
                for (int j = 0; j < N; ++j) v[j] -= c * out.q[n][j];
            }
        }
        Real256 nrm(0);
        for (int j = 0; j < N; ++j) nrm += v[j] * v[j];
        nrm = sqrt(nrm);
        out.lognorm[k] = log(nrm);
        for (int j = 0; j < N; ++j) v[j] /= nrm;
    }
    return out;
}

} // namespace

TEST_CASE("recurrence basis matches dense monomial orthogonalization") {
    const int N = 10, kmax = 9;
    auto lw = log_weight(WeightSpec::krawtchouk(0.3), unit_nodes(N));
    auto B = build_basis_mp<Real256>(lw, kmax);

    std::vector<Real256> x(N), w(N);
    for (int j = 0; j < N; ++j) {
        x[j] = Real256(lw.nodes()[j]);
        w[j] = exp(Real256(lw.logw[j]));
    }
    DenseGS gs = dense_gs(x, w, kmax);

    Real256 worst_q(0), worst_n(0);
    for (int k = 0; k <= kmax; ++k) {
        for (int j = 0; j < N; ++j)
            worst_q = std::max(worst_q, abs(gs.q[k][j] - B->Q[k][j]));
        worst_n = std::max(worst_n, abs(gs.lognorm[k] - B->lognorm[k]));
    }
    CHECK(static_cast<double>(worst_q) < 1e-45);
    CHECK(static_cast<double>(worst_n) < 1e-45);

    OrthoBasis b = build_basis(lw, kmax, 256);
    CHECK(b.precision_bits == 256);
    for (int k = 0; k <= kmax; ++k) {
        CHECK(b.lognorm[k] == doctest::Approx(static_cast<double>(B->lognorm[k])).epsilon(1e-14));
        for (int j = 0; j < N; ++j)
            CHECK(b.Q(j, k) ==
                  doctest::Approx(static_cast<double>(B->Q[k][j])).epsilon(1e-14));
    }
    CHECK(b.orthonormality_residual() < 1e-60);
}

TEST_CASE("pointwise values tie the stored vectors to the monic polynomials") {
    const int N = 10;
    auto lw = log_weight(WeightSpec::krawtchouk(0.3), unit_nodes(N));
    OrthoBasis b = build_basis(lw, N - 1, 256);
    const int k = 3;
    for (int j = 0; j < N; ++j) {
        double direct = evaluate(b, k, {b.nodes[j], 0.0}, true).real();
        double from_q = b.Q(j, k) * std::exp(b.lognorm[k] - 0.5 * b.logw[j]);
        CHECK(direct == doctest::Approx(from_q).epsilon(1e-10));
    }
}

TEST_CASE("log evaluation agrees with direct evaluation away from overflow") {
    auto lw = log_weight(WeightSpec::krawtchouk(0.45), unit_nodes(12));
    OrthoBasis b = build_basis_auto(lw, 11);
    for (bool monic : {true, false}) {
        for (double z : {0.37, 1.9, -0.4}) {
            for (int k : {1, 4, 11}) {
                double direct = evaluate(b, k, {z, 0.0}, monic).real();
                LogValue lv = evaluate_log(b, k, z, monic);
                CHECK(lv.sign == (direct > 0 ? 1 : -1));
                CHECK(lv.log_abs ==
                      doctest::Approx(std::log(std::fabs(direct))).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("zeros are confined, separated, and flip the sign") {
    const int N = 12;
    auto lw = log_weight(WeightSpec::krawtchouk(0.4), unit_nodes(N));
    OrthoBasis b = build_basis_auto(lw, N - 1);
    for (int k : {1, 3, 7, 11}) {
        ZeroSet zs = zeros(b, k);
        REQUIRE(static_cast<int>(zs.zeros.size()) == k);
        CHECK(zs.zeros.front() > b.nodes.front());
        CHECK(zs.zeros.back() < b.nodes.back());
        for (int i = 0; i + 1 < k; ++i) {
            CHECK(zs.zeros[i] < zs.zeros[i + 1]);
            // separating node => at most one zero per closed internode interval
            int between = 0;
            for (double xn : b.nodes)
                if (xn > zs.zeros[i] && xn < zs.zeros[i + 1]) ++between;
            CHECK(between >= 1);
            double mid_lo = i == 0 ? 0.5 * (b.nodes.front() + zs.zeros[0])
                                   : 0.5 * (zs.zeros[i - 1] + zs.zeros[i]);
            double mid_hi = 0.5 * (zs.zeros[i] + zs.zeros[i + 1]);
            CHECK(evaluate_log(b, k, mid_lo, true).sign ==
                  -evaluate_log(b, k, mid_hi, true).sign);
        }
        for (int i = 0; i < k; ++i) {
            int nearest = zs.nearest[i];
            REQUIRE(nearest >= 0);
            REQUIRE(nearest < N);
            CHECK(zs.zeros[i] ==
                  doctest::Approx(b.nodes[nearest] + zs.offset[i]).epsilon(1e-12));
            for (int n = 0; n < N; ++n)
                CHECK(std::fabs(zs.zeros[i] - b.nodes[nearest]) <=
                      std::fabs(zs.zeros[i] - b.nodes[n]) + 1e-15);
        }
    }
}

TEST_CASE("consecutive degrees interlace strictly") {
    const int N = 10;
    auto lw = log_weight(WeightSpec::hahn(2.0, 2.0), unit_nodes(N));
    OrthoBasis b = build_basis_auto(lw, N - 1);
    for (int k = 2; k <= N - 1; ++k) {
        double margin = 0.0;
        CHECK(interlace_ok(b, k, &margin));
        CHECK(margin > 0.0);
    }
}

TEST_CASE("solution matrix has unit determinant and the right residues") {
    const int N = 10;
    auto lw = log_weight(WeightSpec::krawtchouk(0.3), unit_nodes(N));
    OrthoBasis b = build_basis(lw, N - 1, 256);

    for (int k = 0; k <= 5; ++k) {
        for (std::complex<double> z : {std::complex<double>{1.5, 0.5},
                                       std::complex<double>{0.31, 0.02},
                                       std::complex<double>{-0.8, -1.1}}) {
            RhpMatrix R = rhp_matrix(b, k, z);
            CHECK(std::abs(R.det() - 1.0) < 1e-8);
            CHECK(std::abs(R.entry[0][0] - evaluate(b, k, z, true)) <
                  1e-10 * std::abs(R.entry[0][0]));
        }
    }

    // (z - x_j) * upper-right entry tends to w_j pi_k(x_j) at the node
    const int k = 2, j = 7;
    double xj = b.nodes[j];
    RhpMatrix R = rhp_matrix(b, k, {xj + 1e-8, 0.0});
    double residue = (R.entry[0][1] * std::complex<double>(1e-8, 0.0)).real();
    double expect = std::exp(b.logw[j]) * evaluate(b, k, {xj, 0.0}, true).real();
    CHECK(residue == doctest::Approx(expect).epsilon(1e-5));

    CHECK_THROWS_AS(rhp_matrix(b, 1, {xj, 0.0}), numeric_error);
}

TEST_CASE("degree duality holds to the working precision") {
    const int N = 8;
    auto lw = log_weight(WeightSpec::krawtchouk(0.35), unit_nodes(N));
    OrthoBasis b = build_basis(lw, N - 1, 256);
    for (int k = 1; k <= N - 1; ++k) CHECK(borodin_residual(b, k) < 1e-25);
}

TEST_CASE("zero refinement reports precision loss at 128 bits and recovers one rung up") {
    // deep saturation pins zeros to nodes at offsets below the 128-bit noise
    // floor, so the separation checks reject the refinement at that rung
    const int N = 120, k = 80;
    auto lw = log_weight(WeightSpec::krawtchouk(0.9), unit_nodes(N));
    OrthoBasis b128 = build_basis(lw, k, 128);
    CHECK(b128.precision_bits == 128);
    CHECK(b128.orthonormality_residual() < 1e-20);
    CHECK_THROWS_AS(zeros(b128, k), precision_error);

    OrthoBasis b256 = build_basis(lw, k, 256);
    ZeroSet zs = zeros(b256, k);
    REQUIRE(static_cast<int>(zs.zeros.size()) == k);
    for (int i = 0; i + 1 < k; ++i) CHECK(zs.zeros[i] < zs.zeros[i + 1]);
    // pinned offsets round to the node in double, so the hull is closed here
    // even though the refinement checked it strictly in its own precision
    CHECK(zs.zeros.front() >= lw.nodes().front());
    CHECK(zs.zeros.back() <= lw.nodes().back());
    // the deepest saturated zero is pinned below double resolution
    CHECK(std::fabs(zs.offset.back()) < 1e-15);
}

TEST_CASE("degree bounds are enforced") {
    auto lw = log_weight(WeightSpec::krawtchouk(0.5), unit_nodes(6));
    CHECK_THROWS_AS(build_basis(lw, 6, 128), config_error);
    CHECK_THROWS_AS(build_basis(lw, -1, 128), config_error);
    OrthoBasis b = build_basis(lw, 5, 128);
    CHECK_THROWS_AS(zeros(b, 6), config_error);
    CHECK_THROWS_AS(rhp_matrix(b, 6, {2.0, 0.0}), config_error);
}

TEST_CASE("zeros in a saturated region pair off with the nodes") {
    const int N = 40, k = 20;
    auto lw = log_weight(WeightSpec::krawtchouk(0.8), unit_nodes(N));
    OrthoBasis b = build_basis_auto(lw, k);
    ZeroSet zs = zeros(b, k);

    IntervalClassification cls;
    cls.segments = {{SegmentKind::Void, 0.0, 0.1},
                    {SegmentKind::Band, 0.1, 0.9},
                    {SegmentKind::Saturated, 0.9, 1.0}};
    ZeroClassification zc = classify_zeros(zs, b, cls);
    CHECK(zc.within_bounds);
    CHECK(zc.hurwitz.size() >= 2);
    CHECK(zc.spurious.size() <= 1);
    CHECK(zc.dislocations.size() <= 1);
}
