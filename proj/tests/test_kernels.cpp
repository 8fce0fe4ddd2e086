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

#include <omp.h>

#include "irsisac/beamforming.hpp"
#include "irsisac/cross_entropy.hpp"
#include "irsisac/kernels.hpp"
#include "irsisac/scenario.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace irsisac;

namespace
{
    bool same_bits(const RVec &a, const RVec &b)
    {
        if (a.size() != b.size())
            return false;
        for (Eigen::Index i = 0; i < a.size(); ++i)
            if (a(i) != b(i))
                return false;
        return true;
    }

    // runs `f` at 1 and 4 threads and returns both results
    template <class F> auto at_thread_counts(F f)
    {
        const int saved = omp_get_max_threads();
        omp_set_num_threads(1);
        auto one = f();
        omp_set_num_threads(4);
        auto four = f();
        omp_set_num_threads(saved);
        return std::make_pair(one, four);
    }
} // namespace

TEST_CASE("candidate scoring matches the serial reference bitwise")
{
    const Scenario sc = default_scenario();
    const oracle::Instance inst = oracle::random_instance(sc, 2);
    const auto sensed = oracle::true_sensed(inst.channels);
    const CMat w = mrc_combiner(inst.scene, 3);
    Rng rng(5);

    SUBCASE("ISAC, product-table path")
    {
        const kernels::ScoringProblem p = isac_problem(inst.channels, sensed[0], w, 3, sc.rho, sc.sigma2);
        const IndexMatrix c = sample_candidates(CeState::uniform(3, p.elements()), 64, rng);
        RVec a, b;
        kernels::score_candidates(p, c, a);
        kernels::reference::score_candidates(p, c, b);
        CHECK(same_bits(a, b));
        const auto [x, y] = at_thread_counts([&] {
            RVec s;
            kernels::score_candidates(p, c, s);
            return s;
        });
        CHECK(same_bits(x, y));
        CHECK(same_bits(x, a));
    }
    SUBCASE("PC with zero forcing")
    {
        const kernels::ScoringProblem p =
            pc_problem(inst.channels, apply_offsets(sensed, RMat::Zero(2, 3)), 3, sc.rho, sc.sigma2);
        const IndexMatrix c = sample_candidates(CeState::uniform(3, p.elements()), 32, rng);
        RVec a, b;
        kernels::score_candidates(p, c, a);
        kernels::reference::score_candidates(p, c, b);
        CHECK(same_bits(a, b));
    }
    SUBCASE("direct path above the table limit")
    {
        // 4096 elements x 1024 levels x 3 users is past the table size
        Scenario big = sc;
        big.panel_geometry[0] = {64, 64};
        const oracle::Instance bi = oracle::random_instance(big, 3);
        const kernels::ScoringProblem p =
            isac_problem(bi.channels, true_abs_channels(bi.channels, 1), w, 10, sc.rho, sc.sigma2);
        const IndexMatrix c = sample_candidates(CeState::uniform(10, p.elements()), 8, rng);
        RVec a, b;
        kernels::score_candidates(p, c, a);
        kernels::reference::score_candidates(p, c, b);
        CHECK(same_bits(a, b));
    }
}

TEST_CASE("exhaustive offset search matches the serial reference bitwise")
{
    Scenario sc = default_scenario();
    sc.users = 2;
    sc.panel_geometry[0] = {8, 8};
    oracle::Instance inst = oracle::random_instance(sc, 6);
    oracle::set_grid_offsets(inst.channels, inst.scene, {1, 3, 0, 2}, 4);
    const CMat w = mrc_combiner(inst.scene, 2);
    Rng rng(1);
    const PhaseShiftConfig t1 = PhaseShiftConfig::random(3, 64, rng);
    const auto rec = record_powers_pc(inst.channels, t1, w, 4, sc.rho, sc.sigma2, rng);
    const kernels::OffsetProblem p = offset_problem(rec, oracle::true_sensed(inst.channels), inst.channels, w, 2,
                                                    sc.rho, sc.sigma2);
    const auto a = kernels::exhaustive_offset_search(p);
    const auto b = kernels::reference::exhaustive_offset_search(p);
    CHECK(a.digits == b.digits);
    CHECK(a.objective == b.objective);
    CHECK(a.evaluated == 256);
    const auto [x, y] = at_thread_counts([&] { return kernels::exhaustive_offset_search(p); });
    CHECK(x.digits == y.digits);
    CHECK(x.objective == y.objective);
}

TEST_CASE("offset candidate encoding")
{
    CHECK(kernels::decode_offsets(0, 2, 4) == std::vector<int>{0, 0, 0, 0});
    CHECK(kernels::decode_offsets(1, 2, 4) == std::vector<int>{0, 0, 0, 1});
    CHECK(kernels::decode_offsets(4 * 4 * 4 * 3 + 2, 2, 4) == std::vector<int>{3, 0, 0, 2});
    CHECK(kernels::offset_candidate_count(3, 16) == (1ULL << 24));
    CHECK_ERROR_KIND(kernels::offset_candidate_count(9, 16), ErrorKind::InvalidConfiguration);
}

TEST_CASE("covariance kernel is thread-count invariant")
{
    Rng rng(4);
    CMat x(144, 30);
    for (Eigen::Index i = 0; i < x.size(); ++i)
        x(i) = complex_gaussian(rng, 1.0);
    const MicroSurfaceSet ms = micro_surfaces_for(PanelGeometry{12, 12}, DoaSettings{});
    const auto [a, b] = at_thread_counts([&] { return CMat(kernels::fbss_covariance(x, ms.maps)); });
    CHECK(testutil::bitwise_equal(a, b));
    const CMat r = kernels::reference::fbss_covariance(x, ms.maps);
    CHECK(testutil::max_abs_diff(a, r) < 1e-12 * r.norm());
}
