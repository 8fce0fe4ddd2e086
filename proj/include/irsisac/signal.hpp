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

#ifndef IRSISAC_SIGNAL_HPP
#define IRSISAC_SIGNAL_HPP

#include <string>
#include <vector>

#include "irsisac/common.hpp"
#include "irsisac/geometry.hpp"

namespace irsisac
{
    // K x T unit-modulus user symbols.
    struct SymbolBlock
    {
        CMat samples;
        std::string alphabet = "qpsk";

        int users() const { return static_cast<int>(samples.rows()); }
        int slots() const { return static_cast<int>(samples.cols()); }
        SymbolBlock slice(int first_slot, int count) const;
    };

    /// Uniform-random QPSK streams, independent across users and slots.
    SymbolBlock generate_symbols(int k_users, int slots, Rng &rng);

    // Discrete phase configuration of one or more panels. indices[m] selects
    // the phase 2*pi*indices[m]/2^bits of element m.
    struct PhaseShiftConfig
    {
        int bits = 1;
        std::vector<int> indices;

        int elements() const { return static_cast<int>(indices.size()); }
        double phase(int m) const;
        CVec reflection() const; // xi, entries e^{j*phase}
        void validate() const;

        static PhaseShiftConfig random(int bits, int elements, Rng &rng);
        static PhaseShiftConfig zeros(int bits, int elements);
        // [a; b; c] concatenation; all parts must share the bit depth.
        static PhaseShiftConfig concat(const std::vector<PhaseShiftConfig> &parts);
    };

    struct NoiseModel
    {
        double variance = 1.0; // sigma_0^2, linear power
        void validate() const;
    };

    // M_i x tau samples recorded at a semi-passive panel.
    struct SnapshotBlock
    {
        CMat samples;
        int panel = 2;
        int first_slot = 0;

        int elements() const { return static_cast<int>(samples.rows()); }
        int slots() const { return static_cast<int>(samples.cols()); }
    };

    /// Received samples at semi-passive panel 2 or 3 while panel 1 reflects with
    /// `theta1`: users' direct arrivals plus the panel-1 reflection plus AWGN.
    /// Noise is drawn slot by slot, element by element.
    SnapshotBlock receive_at_sub_irs(const ChannelSet &channels, const PhaseShiftConfig &theta1,
                                     const SymbolBlock &symbols, double rho, const NoiseModel &noise,
                                     int panel, Rng &rng, int first_slot = 0);

    /// Per-user combined BS samples during the ISAC period (K x T). Row k is
    /// w_k^H (sqrt(rho) sum_j H_1 Theta_1 h_1j s_j(t) + n(t)).
    CMat receive_at_bs_isac(const ChannelSet &channels, const PhaseShiftConfig &theta1, const CMat &combiner,
                            const SymbolBlock &symbols, double rho, const NoiseModel &noise, Rng &rng);

    /// Same for the PC period with all three panels reflecting (stacked channels).
    CMat receive_at_bs_pc(const ChannelSet &channels, const PhaseShiftConfig &theta, const CMat &combiner,
                          const SymbolBlock &symbols, double rho, const NoiseModel &noise, Rng &rng);

    enum class Period
    {
        Isac,
        Pc
    };

    // Columns H * Theta * h_k of the reflected channel for every user.
    CMat effective_channels(const ChannelSet &channels, const PhaseShiftConfig &theta, Period period);

    // Throws ContractViolation unless every column has unit norm (1e-9).
    void check_unit_columns(const CMat &combiner);

    /// sum_k log2(1 + SINR_k) from G(k, j) = w_k^H g_j.
    double sum_rate_from_gram(const CMat &gram, double rho, double sigma2);

    /// Sum rate of combiner W over effective user channels (N x K).
    double sum_rate(const CMat &combiner, const CMat &effective, double rho, double sigma2);

    double sum_rate(const ChannelSet &channels, const CMat &combiner, const PhaseShiftConfig &theta, double rho,
                    double sigma2, Period period);

} // namespace irsisac

#endif
