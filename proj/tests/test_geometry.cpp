// SPDX-License-Identifier: Apache-2.0
//
// irsisac: location sensing and beamforming simulator for IRS-assisted ISAC
// Copyright (C) 2026 The irsisac authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cmath>

#include "irsisac/geometry.hpp"
#include "irsisac/scenario.hpp"
#include "test_util.hpp"

using namespace irsisac;

TEST_CASE("ULA steering at zero angle is all ones")
{
    const CVec a = steering_ula(0.0, 4);
    REQUIRE(a.size() == 4);
    for (int m = 0; m < 4; ++m)
        CHECK(std::abs(a(m) - cplx(1.0, 0.0)) < 1e-15);
}

TEST_CASE("ULA steering at half turn alternates sign")
{
    const CVec a = steering_ula(kPi, 2);
    CHECK(std::abs(a(0) - cplx(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(a(1) - cplx(-1.0, 0.0)) < 1e-15);
}

TEST_CASE("ULA steering norm is sqrt(n)")
{
    CHECK(std::abs(steering_ula(0.37, 8).norm() - std::sqrt(8.0)) < 1e-12);
    CHECK_ERROR_KIND(steering_ula(0.1, 0), ErrorKind::InvalidDimension);
}

TEST_CASE("URA steering matches the y-by-z Kronecker layout")
{
    const CVec ones = steering_ura(0.0, 0.0, PanelGeometry{2, 2});
    for (int m = 0; m < 4; ++m)
        CHECK(std::abs(ones(m) - cplx(1.0, 0.0)) < 1e-15);

    const CVec b = steering_ura(kPi, 0.0, PanelGeometry{2, 2});
    const double expect[4] = {1, 1, -1, -1};
    for (int m = 0; m < 4; ++m)
        CHECK(std::abs(b(m) - cplx(expect[m], 0.0)) < 1e-15);

    const PanelGeometry g{4, 4};
    const CVec c = steering_ura(0.3, 0.7, g);
    for (int iy = 0; iy < 4; ++iy)
        for (int iz = 0; iz < 4; ++iz)
        {
            const cplx expected = std::polar(1.0, 0.3 * iy) * std::polar(1.0, 0.7 * iz);
            CHECK(std::abs(c(iy * 4 + iz) - expected) < 1e-14);
        }
    CHECK_ERROR_KIND(steering_ura(0.0, 0.0, PanelGeometry{0, 3}), ErrorKind::InvalidDimension);
}

TEST_CASE("URA entries have unit modulus and squared norm M")
{
    const PanelGeometry g{5, 7};
    const CVec b = steering_ura(1.1, -2.3, g);
    for (Eigen::Index m = 0; m < b.size(); ++m)
        CHECK(std::abs(std::abs(b(m)) - 1.0) < 1e-14);
    CHECK(std::abs(b.squaredNorm() - 35.0) < 1e-12);
}

TEST_CASE("direction cosines")
{
    const DirectionCosines a = direction_cosines({0, 0, 0}, {1, 0, 0});
    CHECK(a.cos_y == doctest::Approx(0.0));
    CHECK(a.cos_z == doctest::Approx(0.0));
    const DirectionCosines b = direction_cosines({0, 0, 0}, {0, 3, 4});
    CHECK(std::abs(b.cos_y - 0.6) < 1e-15);
    CHECK(std::abs(b.cos_z - 0.8) < 1e-15);
    CHECK_ERROR_KIND(direction_cosines({1, 2, 3}, {1, 2, 3}), ErrorKind::DegenerateGeometry);

    Rng rng(9);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int i = 0; i < 200; ++i)
    {
        const Position p{u(rng), u(rng), u(rng)};
        const Position q{u(rng), u(rng), u(rng)};
        const DirectionCosines c = direction_cosines(p, q);
        const DirectionCosines r = direction_cosines(q, p);
        CHECK(c.cos_y * c.cos_y + c.cos_z * c.cos_z <= 1.0 + 1e-12);
        CHECK(std::abs(c.cos_y + r.cos_y) < 1e-15);
        CHECK(std::abs(c.cos_z + r.cos_z) < 1e-15);
    }
}

TEST_CASE("log-distance path gain")
{
    const PathLossModel m;
    CHECK(std::abs(path_gain_magnitude(1.0, 2.2, m) - std::pow(10.0, -1.5)) < 1e-15);
    CHECK(std::abs(path_gain_magnitude(10.0, 2.2, m) - std::pow(10.0, -2.6)) < 1e-16);
    CHECK(std::abs(path_gain_magnitude(10.0, 2.2, m) - 2.5119e-3) < 1e-7);
    const double ratio = path_gain_magnitude(14.0, 2.2, m) / path_gain_magnitude(7.0, 2.2, m);
    CHECK(std::abs(ratio - std::pow(2.0, -1.1)) < 1e-12);
    // below the reference distance the gain is clamped
    CHECK(path_gain_magnitude(0.5, 2.2, m) == path_gain_magnitude(1.0, 2.2, m));
    CHECK_ERROR_KIND(path_gain_magnitude(0.0, 2.2, m), ErrorKind::InvalidDistance);
    CHECK_ERROR_KIND(path_gain_magnitude(-3.0, 2.2, m), ErrorKind::InvalidDistance);
}

namespace
{
    Scene default_scene(std::vector<Position> users)
    {
        return make_scene(default_scenario(), users);
    }
} // namespace

TEST_CASE("user at panel height has a flat z factor")
{
    const Scene scene = default_scene({{4.0, 1.0, 7.0}}); // same z as panel 2
    Rng rng(1);
    const ChannelSet ch = build_channels(scene, rng);
    CHECK(std::abs(ch.u2i_arrival[0][1].v) < 1e-15);
    const PanelGeometry &g = scene.geometry_of(2);
    const CVec &h = ch.user_to_panel(2, 0);
    for (int iy = 0; iy < g.cols_y; ++iy)
        for (int iz = 1; iz < g.rows_z; ++iz)
            CHECK(std::abs(h(g.flat_index(iy, iz)) - h(g.flat_index(iy, 0))) < 1e-15);
}

TEST_CASE("channels are rank one with path-loss magnitudes")
{
    Scenario sc = default_scenario();
    sc.panel_geometry[0] = {6, 6};
    sc.set_semi_passive(4, 4);
    const Scene scene = make_scene(sc, {{3, -2, 0}, {6, 2, 0}});
    Rng rng(5);
    const ChannelSet ch = build_channels(scene, rng);
    const PathLossModel &pl = scene.path_loss;
    for (int i = 1; i <= kNumPanels; ++i)
    {
        Eigen::JacobiSVD<CMat> svd(ch.panel_to_bs(i));
        const RVec s = svd.singularValues();
        CHECK(s(0) / std::max(s(1), 1e-300) > 1e10);
        const double expect = path_gain_magnitude(distance(scene.panel_position(i), scene.bs), pl.exp_i2b, pl);
        CHECK(std::abs(std::abs(ch.alpha_i2b[i - 1]) / expect - 1.0) < 1e-12);
        for (int k = 0; k < 2; ++k)
        {
            const double e = path_gain_magnitude(distance(scene.users[k], scene.panel_position(i)), pl.exp_u2i, pl);
            CHECK(std::abs(std::abs(ch.alpha_u2i[k][i - 1]) / e - 1.0) < 1e-12);
            const DirectionCosines c = direction_cosines(scene.users[k], scene.panel_position(i));
            CHECK(std::abs(ch.u2i_arrival[k][i - 1].u - kPi * c.cos_y) < 1e-15);
            CHECK(std::abs(ch.u2i_arrival[k][i - 1].v - kPi * c.cos_z) < 1e-15);
        }
    }
    for (int i = 2; i <= 3; ++i)
    {
        Eigen::JacobiSVD<CMat> svd(ch.passive_to_panel(i));
        const RVec s = svd.singularValues();
        CHECK(s(0) / std::max(s(1), 1e-300) > 1e10);
        const double e = path_gain_magnitude(distance(scene.panel_position(1), scene.panel_position(i)), pl.exp_i2i, pl);
        CHECK(std::abs(std::abs(ch.alpha_i2i[i - 2]) / e - 1.0) < 1e-12);
    }
}

TEST_CASE("channel construction is deterministic per seed")
{
    const Scene scene = default_scene({{3, -2, 0}, {6, 2, 0}, {1, 4, 0}});
    Rng a(77), b(77), c(78);
    const ChannelSet x = build_channels(scene, a);
    const ChannelSet y = build_channels(scene, b);
    const ChannelSet z = build_channels(scene, c);
    for (int i = 0; i < kNumPanels; ++i)
    {
        CHECK(testutil::bitwise_equal(x.i2b[i], y.i2b[i]));
        for (int k = 0; k < 3; ++k)
            CHECK(testutil::bitwise_equal(x.u2i[k][i], y.u2i[k][i]));
    }
    CHECK(testutil::bitwise_equal(x.i2i[0], y.i2i[0]));
    CHECK(testutil::bitwise_equal(x.i2i[1], y.i2i[1]));
    CHECK_FALSE(testutil::bitwise_equal(x.i2b[0], z.i2b[0]));
}

TEST_CASE("scene rejects coincident entities")
{
    Scenario sc = default_scenario();
    CHECK_ERROR_KIND(make_scene(sc, {sc.panels[1]}), ErrorKind::DegenerateGeometry);
    CHECK_ERROR_KIND(check_panel(4), ErrorKind::InvalidPanel);
    CHECK_ERROR_KIND(check_sensing_panel(1), ErrorKind::InvalidPanel);
}
