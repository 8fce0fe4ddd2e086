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

#ifndef IRSISAC_BEAMFORMING_HPP
#define IRSISAC_BEAMFORMING_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "irsisac/common.hpp"
#include "irsisac/cross_entropy.hpp"
#include "irsisac/geometry.hpp"
#include "irsisac/kernels.hpp"
#include "irsisac/signal.hpp"

namespace irsisac
{
    /// {2 pi l / 2^b : l = 0..2^b-1}
    std::vector<double> phase_alphabet(int bits);
    std::vector<cplx> phasor_alphabet(int bits);

    /// Every column a(u)/sqrt(N) with u the BS arrival from panel 1.
    CMat mrc_combiner(double u_bs, int antennas, int users);
    CMat mrc_combiner(const Scene &scene, int users);

    /// ZF combiner of an N x K effective channel; throws ill-conditioned with
    /// the condition number when H is rank deficient or cond > max_condition.
    CMat zf_combiner(const CMat &h_eq, double max_condition = 1e12);

    // Channel magnitude and direction rebuilt from a sensed position.
    struct SensedChannel
    {
        int panel = 1;
        double magnitude = 0.0;
        EffectiveAngles angles;
        CVec h_abs; // magnitude * b_i(angles)
    };

    SensedChannel sensed_channel(const Position &estimate, int panel, const Scene &scene);

    // Columns h_abs for every sensed user at one panel (M_i x K).
    CMat sensed_channels(const std::vector<Position> &estimates, int panel, const Scene &scene);

    // Same assembled from the true positions and gain magnitudes.
    CMat true_abs_channels(const ChannelSet &channels, int panel);

    /// CE scoring problem of the ISAC period (panel 1 only, fixed combiner).
    kernels::ScoringProblem isac_problem(const ChannelSet &channels, const CMat &users_panel1, const CMat &combiner,
                                         int bits, double rho, double sigma2);

    /// CE scoring problem of the PC period (all panels, ZF per candidate).
    kernels::ScoringProblem pc_problem(const ChannelSet &channels, const CMat &users_stacked, int bits, double rho,
                                       double sigma2);

    /// Phase design for block 2 of the ISAC period from sensed panel-1 channels.
    /// Only the BS-side factors of `channels` are used.
    CeResult ce_optimize_isac(const ChannelSet &channels, const CMat &sensed_panel1, const CMat &combiner,
                              const CeParams &params, double rho, double sigma2, Rng &rng);

    /// Joint phase + ZF design for the PC period from offset-corrected channels.
    CeResult ce_optimize_pc(const ChannelSet &channels, const CMat &sensed_stacked, const CeParams &params, double rho,
                            double sigma2, Rng &rng);

    struct PowerRecord
    {
        PhaseShiftConfig theta; // all three panels
        double power = 0.0;
    };

    /// Received strength over `slots` slots with panel 1 frozen at `theta1` and
    /// random panels 2 and 3, evaluated on the true channels.
    std::vector<PowerRecord> record_powers_pc(const ChannelSet &channels, const PhaseShiftConfig &theta1,
                                              const CMat &combiner, int slots, double rho, double sigma2, Rng &rng);

    struct OffsetEstimate
    {
        RMat delta;               // 2 x K, rows panel 2 and 3
        std::vector<int> indices; // grid digits d2_1..d2_K, d3_1..d3_K
        double objective = 0.0;
        bool exhaustive = true; // false when coordinate descent was used
    };

    // Precomputed objective ingredients; exposed for oracle tests.
    kernels::OffsetProblem offset_problem(const std::vector<PowerRecord> &records,
                                          const std::array<CMat, kNumPanels> &sensed, const ChannelSet &channels,
                                          const CMat &combiner, int bits_delta, double rho, double sigma2);

    /// Grid search of the per-user phase offsets of panels 2 and 3 relative to
    /// panel 1. Exhaustive below `budget` candidates, coordinate descent above.
    OffsetEstimate estimate_phase_offsets(const std::vector<PowerRecord> &records,
                                          const std::array<CMat, kNumPanels> &sensed, const ChannelSet &channels,
                                          const CMat &combiner, int bits_delta, double rho, double sigma2,
                                          std::uint64_t budget = 1000000);

    /// Stacked [h1; e^{j d2} h2; e^{j d3} h3] per user (M x K).
    CMat apply_offsets(const std::array<CMat, kNumPanels> &sensed, const RMat &delta);

} // namespace irsisac

#endif
