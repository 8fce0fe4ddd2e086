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

#include "irsisac/beamforming.hpp"
#include "irsisac/scenario.hpp"
#include "irsisac/signal.hpp"
#include "test_util.hpp"

using namespace irsisac;

namespace
{
    Scenario small_scenario()
    {
        Scenario sc = default_scenario();
        sc.panel_geometry[0] = {6, 6};
        sc.set_semi_passive(5, 5);
        return sc;
    }

    ChannelSet channels_for(const Scenario &sc, std::vector<Position> users, std::uint64_t seed)
    {
        Rng rng(seed);
        return build_channels(make_scene(sc, users), rng);
    }
} // namespace

TEST_CASE("QPSK symbols are unit modulus and uncorrelated")
{
    Rng rng(3);
    const SymbolBlock s = generate_symbols(2, 10000, rng);
    REQUIRE(s.users() == 2);
    REQUIRE(s.slots() == 10000);
    cplx cross = 0.0, product = 0.0;
    for (int t = 0; t < s.slots(); ++t)
    {
        CHECK(std::abs(std::abs(s.samples(0, t)) - 1.0) < 1e-15);
        cross += s.samples(0, t) * std::conj(s.samples(1, t));
        product += s.samples(0, t) * s.samples(1, t);
    }
    CHECK(std::abs(cross) / s.slots() < 0.05);
    CHECK(std::abs(product) / s.slots() < 0.05);

    Rng a(11), b(11);
    CHECK(testutil::bitwise_equal(generate_symbols(3, 50, a).samples, generate_symbols(3, 50, b).samples));
    CHECK_ERROR_KIND(generate_symbols(0, 5, a), ErrorKind::InvalidDimension);
}

TEST_CASE("sub-IRS samples with zero power are pure noise")
{
    const Scenario sc = small_scenario();
    const ChannelSet ch = channels_for(sc, {{3, 1, 0}}, 1);
    Rng rng(2);
    const SymbolBlock s = generate_symbols(1, 2000, rng);
    const PhaseShiftConfig theta = PhaseShiftConfig::random(3, 36, rng);
    const SnapshotBlock y = receive_at_sub_irs(ch, theta, s, 0.0, NoiseModel{2.5}, 2, rng);
    const double var = y.samples.cwiseAbs2().mean();
    CHECK(std::abs(var / 2.5 - 1.0) < 0.05);
    CHECK_ERROR_KIND(receive_at_sub_irs(ch, theta, s, 1.0, NoiseModel{1.0}, 1, rng), ErrorKind::InvalidPanel);
    CHECK_ERROR_KIND(receive_at_sub_irs(ch, theta, s, 1.0, NoiseModel{0.0}, 2, rng), ErrorKind::InvalidArgument);
}

TEST_CASE("sub-IRS samples of one user without the passive path follow the steering vector")
{
    const Scenario sc = small_scenario();
    ChannelSet ch = channels_for(sc, {{3, 1, 0}}, 4);
    ch.i2i[0].setZero();
    Rng rng(5);
    const SymbolBlock s = generate_symbols(1, 8, rng);
    const PhaseShiftConfig theta = PhaseShiftConfig::random(3, 36, rng);
    const SnapshotBlock y = receive_at_sub_irs(ch, theta, s, 1.0, NoiseModel{1e-40}, 2, rng);
    const CVec b = steering_ura(ch.u2i_arrival[0][1], sc.panel_geometry[1]);
    for (int t = 0; t < y.slots(); ++t)
    {
        const CVec col = y.samples.col(t);
        const cplx c = b.dot(col) / b.squaredNorm();
        CHECK((col - c * b).norm() < 1e-10 * col.norm());
    }
}

TEST_CASE("sub-IRS samples are the sum of user, reflected and noise terms")
{
    const Scenario sc = small_scenario();
    const ChannelSet ch = channels_for(sc, {{3, 1, 0}, {6, -3, 0}}, 8);
    Rng sym(1);
    const SymbolBlock s = generate_symbols(2, 12, sym);
    Rng pick(2);
    const PhaseShiftConfig theta = PhaseShiftConfig::random(3, 36, pick);
    const double rho = 0.3, sigma2 = 1e-9;

    Rng rng(99);
    const SnapshotBlock y = receive_at_sub_irs(ch, theta, s, rho, NoiseModel{sigma2}, 3, rng);

    // independent recomputation of the three terms with the same noise stream
    const int m3 = sc.panel_geometry[2].total();
    CMat direct(m3, 2), via(36, 2);
    for (int k = 0; k < 2; ++k)
    {
        direct.col(k) = ch.u2i[k][2];
        via.col(k) = ch.u2i[k][0];
    }
    const double amp = std::sqrt(rho);
    const CMat users_term = amp * (direct * s.samples);
    const CMat passive_term = amp * (ch.i2i[1] * (theta.reflection().asDiagonal() * (via * s.samples)));
    Rng again(99);
    CMat noise(m3, 12);
    for (int t = 0; t < 12; ++t)
        for (int m = 0; m < m3; ++m)
            noise(m, t) = complex_gaussian(again, sigma2);
    CHECK(testutil::bitwise_equal(y.samples, users_term + passive_term + noise));

    // element-wise loop form agrees to rounding
    for (int t = 0; t < 12; ++t)
        for (int m = 0; m < m3; ++m)
        {
            cplx acc = noise(m, t);
            for (int k = 0; k < 2; ++k)
            {
                acc += amp * ch.u2i[k][2](m) * s.samples(k, t);
                for (int e = 0; e < 36; ++e)
                    acc += amp * ch.i2i[1](m, e) * std::polar(1.0, theta.phase(e)) * ch.u2i[k][0](e) * s.samples(k, t);
            }
            CHECK(std::abs(acc - y.samples(m, t)) < 1e-12 * std::max(1e-12, std::abs(acc)));
        }
}

TEST_CASE("ISAC BS output of one user has the predicted magnitude")
{
    const Scenario sc = small_scenario();
    const ChannelSet ch = channels_for(sc, {{4, 2, 0}}, 6);
    Rng rng(7);
    const SymbolBlock s = generate_symbols(1, 20, rng);
    const PhaseShiftConfig theta = PhaseShiftConfig::random(3, 36, rng);
    const CMat w = mrc_combiner(ch.i2b_bs_arrival[0], 8, 1);
    const double rho = 0.1;
    const CMat y = receive_at_bs_isac(ch, theta, w, s, rho, NoiseModel{1e-60}, rng);
    const double gain = std::abs(w.col(0).dot(effective_channels(ch, theta, Period::Isac).col(0)));
    for (int t = 0; t < 20; ++t)
        CHECK(std::abs(std::abs(y(0, t)) / (std::sqrt(rho) * gain) - 1.0) < 1e-9);

    // linear in sqrt(rho) with noise negligible
    Rng r1(8), r2(8);
    const CMat a = receive_at_bs_isac(ch, theta, w, s, 1.0, NoiseModel{1e-60}, r1);
    const CMat b = receive_at_bs_isac(ch, theta, w, s, 4.0, NoiseModel{1e-60}, r2);
    CHECK((b - 2.0 * a).norm() < 1e-9 * b.norm());

    CHECK_ERROR_KIND(receive_at_bs_isac(ch, theta, 2.0 * w, s, rho, NoiseModel{1.0}, rng),
                     ErrorKind::ContractViolation);
}

TEST_CASE("ISAC BS output with zero gains is combined noise")
{
    const Scenario sc = small_scenario();
    ChannelSet ch = channels_for(sc, {{4, 2, 0}, {1, -2, 0}}, 6);
    ch.i2b[0].setZero();
    Rng sym(1);
    const SymbolBlock s = generate_symbols(2, 10, sym);
    const PhaseShiftConfig theta = PhaseShiftConfig::zeros(3, 36);
    const CMat w = mrc_combiner(0.4, 8, 2);
    Rng rng(4);
    const CMat y = receive_at_bs_isac(ch, theta, w, s, 1.0, NoiseModel{0.5}, rng);
    Rng again(4);
    CMat n(8, 10);
    for (int t = 0; t < 10; ++t)
        for (int m = 0; m < 8; ++m)
            n(m, t) = complex_gaussian(again, 0.5);
    CHECK(testutil::max_abs_diff(y, w.adjoint() * n) < 1e-14);
}

TEST_CASE("PC BS output reduces to the ISAC output when panels 2 and 3 are silent")
{
    const Scenario sc = small_scenario();
    ChannelSet ch = channels_for(sc, {{4, 2, 0}, {1, -2, 0}}, 12);
    ch.i2b[1].setZero();
    ch.i2b[2].setZero();
    Rng sym(1);
    const SymbolBlock s = generate_symbols(2, 10, sym);
    Rng pick(3);
    const PhaseShiftConfig t1 = PhaseShiftConfig::random(3, 36, pick);
    const PhaseShiftConfig full =
        PhaseShiftConfig::concat({t1, PhaseShiftConfig::random(3, 25, pick), PhaseShiftConfig::random(3, 25, pick)});
    const CMat w = mrc_combiner(ch.i2b_bs_arrival[0], 8, 2);
    Rng a(5), b(5);
    const CMat y_isac = receive_at_bs_isac(ch, t1, w, s, 0.2, NoiseModel{1e-12}, a);
    const CMat y_pc = receive_at_bs_pc(ch, full, w, s, 0.2, NoiseModel{1e-12}, b);
    CHECK(testutil::max_abs_diff(y_isac, y_pc) < 1e-12 * y_isac.norm());
}

TEST_CASE("stacked channels keep panel order")
{
    const Scenario sc = small_scenario();
    const ChannelSet ch = channels_for(sc, {{4, 2, 0}}, 12);
    const CMat h = ch.stacked_i2b();
    CHECK(h.cols() == 36 + 25 + 25);
    CHECK(testutil::bitwise_equal(h.middleCols(0, 36), ch.i2b[0]));
    CHECK(testutil::bitwise_equal(h.middleCols(36, 25), ch.i2b[1]));
    CHECK(testutil::bitwise_equal(h.middleCols(61, 25), ch.i2b[2]));
    const CVec g = ch.stacked_u2i(0);
    CHECK(testutil::bitwise_equal(g.segment(36, 25), ch.u2i[0][1]));
}

TEST_CASE("sum rate edge cases")
{
    CMat w(2, 1);
    w << 1.0, 0.0;
    CMat h(2, 1);
    h << 1.0, 0.0;
    // rho |w^H h|^2 / sigma2 = 1 gives exactly one bit
    CHECK(std::abs(sum_rate(w, h, 2.0, 2.0) - 1.0) < 1e-15);
    CHECK(sum_rate(w, CMat::Zero(2, 1), 1.0, 1.0) == 0.0);
    const double zero = sum_rate(w, CMat::Zero(2, 1), 1.0, 0.0);
    CHECK(zero == 0.0);

    // orthogonal users do not interfere
    CMat w2 = CMat::Identity(2, 2);
    CMat h2(2, 2);
    h2 << 3.0, 0.0, 0.0, 2.0;
    const double both = sum_rate(w2, h2, 1.0, 1.0);
    CHECK(std::abs(both - (std::log2(10.0) + std::log2(5.0))) < 1e-12);

    // a common phase on the channel changes nothing; more power helps
    Rng rng(1);
    CMat hr = CMat::Random(4, 2);
    CMat wr = CMat::Random(4, 2);
    wr.colwise().normalize();
    const double r0 = sum_rate(wr, hr, 1.0, 0.1);
    CHECK(std::abs(sum_rate(wr, std::polar(1.0, 0.77) * hr, 1.0, 0.1) - r0) < 1e-12);
    CHECK(sum_rate(wr, hr, 2.0, 0.1) > r0);
    CHECK_ERROR_KIND(sum_rate(2.0 * wr, hr, 1.0, 0.1), ErrorKind::ContractViolation);
}
