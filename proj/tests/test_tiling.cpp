#include "dopkit/tiling.hpp"

#include "dopkit/errors.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace dopkit;

TEST_CASE("tiling counts have the boxed product form") {
    CHECK(macmahon({1, 1, 1}) == 2);
    CHECK(macmahon({1, 1, 2}) == 3);
    CHECK(macmahon({2, 2, 2}) == 20);
    CHECK(macmahon({4, 3, 2}) == 490);
    CHECK(macmahon({12, 1, 1}) == 13);
    CHECK_THROWS_AS(macmahon({0, 1, 1}), config_error);
}

TEST_CASE("exhaustive enumeration reproduces the product formula") {
    for (Hexagon hex : {Hexagon{1, 1, 1}, {2, 2, 2}, {4, 3, 1}, {2, 3, 2}, {12, 1, 1}}) {
        TilingEnumeration te = enumerate_tilings(hex);
        CHECK(te.count == macmahon(hex));
        // every tiling contributes L_m hole incidences per column
        for (int m = 1; m < hex.a + hex.b; ++m) {
            ColumnEnsemble col = column_ensemble(hex, m);
            BigInt row_sum = 0;
            for (const BigInt& v : te.hole_counts[m - 1]) row_sum += v;
            CHECK(row_sum == te.count * col.L_m);
            CHECK(static_cast<int>(te.hole_counts[m - 1].size()) == col.gamma_m + 1);
        }
    }
}

TEST_CASE("exact hole marginals match the enumeration") {
    for (Hexagon hex : {Hexagon{2, 1, 1}, {2, 2, 2}, {3, 2, 1}}) {
        TilingEnumeration te = enumerate_tilings(hex);
        for (int m = 1; m < hex.a + hex.b; ++m) {
            std::vector<BigRat> law = hole_marginal_exact(hex, m);
            REQUIRE(law.size() == te.hole_counts[m - 1].size());
            for (std::size_t h = 0; h < law.size(); ++h)
                CHECK(law[h] == BigRat(te.hole_counts[m - 1][h], te.count));
        }
    }
}

TEST_CASE("hand-checked rational marginals") {
    {
        std::vector<BigRat> law = hole_marginal_exact({2, 1, 1}, 1);
        REQUIRE(law.size() == 2);
        CHECK(std::min(law[0], law[1]) == BigRat(1, 3));
        CHECK(std::max(law[0], law[1]) == BigRat(2, 3));
    }
    {
        std::vector<BigRat> law = hole_marginal_exact({2, 2, 2}, 1);
        REQUIRE(law.size() == 3);
        CHECK(law[0] == BigRat(3, 10));
        CHECK(law[1] == BigRat(4, 10));
        CHECK(law[2] == BigRat(3, 10));
    }
    {
        std::vector<BigRat> law = hole_marginal_exact({2, 2, 2}, 2);
        REQUIRE(law.size() == 4);
        CHECK(law[0] == BigRat(7, 10));
        CHECK(law[1] == BigRat(3, 10));
        CHECK(law[2] == BigRat(3, 10));
        CHECK(law[3] == BigRat(7, 10));
    }
}

TEST_CASE("kernel profiles agree with the exact law and sum to the ranks") {
    ColumnEnsemble col = column_ensemble({2, 2, 2}, 2);
    std::vector<double> holes = one_point_profile(col);
    REQUIRE(holes.size() == 4);
    const double expect[] = {0.7, 0.3, 0.3, 0.7};
    for (int h = 0; h < 4; ++h) CHECK(holes[h] == doctest::Approx(expect[h]).epsilon(1e-10));

    ColumnEnsemble wide = column_ensemble({4, 3, 2}, 2);
    std::vector<double> hp = one_point_profile(wide);
    std::vector<double> pp = particle_profile(wide);
    REQUIRE(hp.size() == pp.size());
    double hole_sum = 0.0, part_sum = 0.0;
    for (std::size_t h = 0; h < hp.size(); ++h) {
        hole_sum += hp[h];
        part_sum += pp[h];
        CHECK(hp[h] + pp[h] == doctest::Approx(1.0).epsilon(1e-8));
    }
    CHECK(hole_sum == doctest::Approx(double(wide.L_m)).epsilon(1e-8));
    CHECK(part_sum == doctest::Approx(double(wide.hex.c)).epsilon(1e-8));

    ColumnEnsemble tiny = column_ensemble({1, 1, 1}, 1);
    std::vector<double> p1 = one_point_profile(tiny);
    REQUIRE(p1.size() == 2);
    CHECK(p1[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(p1[1] == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("hole probability freezes toward the flat corners as the scale grows") {
    ColumnEnsemble small = column_ensemble({6, 6, 6}, 6);
    ColumnEnsemble large = column_ensemble({12, 12, 12}, 12);
    std::vector<double> ps = one_point_profile(small);
    std::vector<double> pl = one_point_profile(large);
    bool complementary = ps.front() + particle_profile(small).front() > 0.99;
    CHECK(complementary);
    CHECK(pl.front() > ps.front());
    CHECK(pl.front() > 0.9);
    CHECK(pl.back() > ps.back());
}

TEST_CASE("column bookkeeping and the drawing plane") {
    Hexagon hex{3, 2, 2};
    CHECK_THROWS_AS(column_ensemble(hex, 0), config_error);
    CHECK_THROWS_AS(column_ensemble(hex, hex.a + hex.b), config_error);
    CHECK_THROWS_AS((Hexagon{0, 1, 1}.validate()), config_error);

    for (int m = 1; m < hex.a + hex.b; ++m) {
        ColumnEnsemble col = column_ensemble(hex, m);
        CHECK(col.L_m + hex.c == col.gamma_m + 1);
        CHECK(col.nodes->N == col.gamma_m + 1);
    }
    CHECK(column_u(hex, hex.a) == doctest::Approx(0.0));
    CHECK(column_u(hex, 1) < column_u(hex, 2));

    // the regular hexagon's central column is symmetric about height zero
    Hexagon reg{2, 2, 2};
    CHECK(position_v(reg, 2, 0.0) == doctest::Approx(-position_v(reg, 2, 3.0)).epsilon(1e-12));
    CHECK(position_v(reg, 2, 0.0) > position_v(reg, 2, 1.0));
}

TEST_CASE("regular hexagon geometry and its inscribed circle") {
    HexagonGeometry g{1.0, 1.0, 1.0};
    CHECK(g.diameter() == doctest::Approx(2.0).epsilon(1e-12));
    auto c = g.center();
    CHECK(g.ellipse_distance(c[0], c[1]) < -0.2);
    for (const auto& v : g.vertices()) {
        CHECK(std::isfinite(v[0]));
        CHECK(std::isfinite(v[1]));
        CHECK(g.ellipse_distance(v[0], v[1]) > 0.05);
    }
    // inscribed circle of radius sqrt(3)/2
    CHECK(std::fabs(g.ellipse_distance(c[0] + std::sqrt(3.0) / 2, c[1])) < 1e-8);
    CHECK(std::fabs(g.ellipse_distance(c[0], c[1] + std::sqrt(3.0) / 2)) < 1e-8);
}

TEST_CASE("frozen boundary of the regular hexagon stays near the circle") {
    FrozenBoundary fb = frozen_boundary(1.0, 1.0, 1.0, 1.0, 20, 600);
    CHECK(fb.U == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(fb.x_lo < fb.x_hi);
    CHECK(fb.cls.has(SegmentKind::Band));
    // cell coordinate runs downward, so the lower band edge sits higher
    CHECK(fb.V_lo > fb.V_hi);
    HexagonGeometry g{1.0, 1.0, 1.0};
    CHECK(std::fabs(g.ellipse_distance(fb.U, fb.V_hi)) < 0.08 * g.diameter());
    CHECK(std::fabs(g.ellipse_distance(fb.U, fb.V_lo)) < 0.08 * g.diameter());
}
