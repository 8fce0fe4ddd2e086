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

#ifndef IRSISAC_GEOMETRY_HPP
#define IRSISAC_GEOMETRY_HPP

#include <array>
#include <vector>

#include "irsisac/common.hpp"

namespace irsisac
{
    // Panels are numbered 1..3 throughout; panel 1 is the passive (reflect-only)
    // surface, panels 2 and 3 are semi-passive and can record samples.
    inline constexpr int kNumPanels = 3;
    inline constexpr int kPassivePanel = 1;

    struct Position
    {
        double x = 0.0;
        double y = 0.0;
        double z = 0.0;
    };

    Position operator-(const Position &a, const Position &b);
    Position operator+(const Position &a, const Position &b);
    double norm(const Position &p);
    double distance(const Position &a, const Position &b);

    // Uniform rectangular array on the y-o-z plane with half-wavelength spacing.
    // Element (iy, iz) is stored at flat index iy * rows_z + iz, matching the
    // y-factor (x) z-factor Kronecker order of steering_ura.
    struct PanelGeometry
    {
        int rows_z = 1;
        int cols_y = 1;

        int total() const { return rows_z * cols_y; }
        int flat_index(int iy, int iz) const { return iy * rows_z + iz; }
        void validate() const;
    };

    struct DirectionCosines
    {
        double cos_y = 0.0;
        double cos_z = 0.0;
    };

    // Per-element phase progressions along y (u) and z (v). Under the fixed
    // half-wavelength spacing, u = pi * cos_y and v = pi * cos_z.
    struct EffectiveAngles
    {
        double u = 0.0;
        double v = 0.0;

        static EffectiveAngles from_cosines(const DirectionCosines &c);
        DirectionCosines cosines() const;
    };

    struct PathLossModel
    {
        double pl0_db = 30.0; // loss at the reference distance
        double d0 = 1.0;      // reference distance [m]
        double exp_u2i = 2.2;
        double exp_i2b = 2.3;
        double exp_i2i = 2.1;

        void validate() const;
    };

    /// ULA response [1, e^{ju}, ..., e^{j(n-1)u}]^T. Throws on n < 1.
    CVec steering_ula(double u, int n);

    /// URA response, y-axis factor (angle u) Kronecker z-axis factor (angle v).
    CVec steering_ura(double u, double v, const PanelGeometry &geometry);
    CVec steering_ura(const EffectiveAngles &angles, const PanelGeometry &geometry);

    /// Arrival direction at `dst` of a wave departing `src`, projected on y and z.
    DirectionCosines direction_cosines(const Position &src, const Position &dst);

    /// Log-distance amplitude gain. Distances below d0 are clamped to d0.
    double path_gain_magnitude(double d, double exponent, const PathLossModel &model);

    // Static geometry of one experiment plus the users' true positions.
    struct Scene
    {
        Position bs;
        std::array<Position, kNumPanels> panels;
        std::array<PanelGeometry, kNumPanels> panel_geometry;
        int bs_antennas = 8;
        PathLossModel path_loss;
        std::vector<Position> users;

        const Position &panel_position(int panel) const;
        const PanelGeometry &geometry_of(int panel) const;
        int num_users() const { return static_cast<int>(users.size()); }
        int total_elements() const;
        // First flat index of `panel` in the stacked [panel1; panel2; panel3] vector.
        int element_offset(int panel) const;

        void validate() const;
    };

    void check_panel(int panel);
    void check_sensing_panel(int panel);

    // Geometric effective angles of the panel-1 -> panel-i link as seen at panel i.
    EffectiveAngles inter_irs_arrival(const Scene &scene, int panel);

    // Effective angles of the user -> panel link at the panel.
    EffectiveAngles user_arrival(const Position &user, const Position &panel);

    // All complex channels of one coherence block. Every link is line-of-sight
    // and therefore rank one; the factors are kept next to the dense matrices.
    struct ChannelSet
    {
        // Panel -> BS: N x M_i, alpha * a(u_A) * b_i^H(u_D, v_D)
        std::array<CMat, kNumPanels> i2b;
        std::array<cplx, kNumPanels> alpha_i2b;
        std::array<CVec, kNumPanels> i2b_bs_steering;    // a(u_A), length N
        std::array<CVec, kNumPanels> i2b_panel_steering; // b_i(u_D, v_D), length M_i
        std::array<EffectiveAngles, kNumPanels> i2b_departure;
        std::array<double, kNumPanels> i2b_bs_arrival{};

        // User -> panel: [k][panel-1], alpha * b_i(u_A, v_A)
        std::vector<std::array<CVec, kNumPanels>> u2i;
        std::vector<std::array<cplx, kNumPanels>> alpha_u2i;
        std::vector<std::array<EffectiveAngles, kNumPanels>> u2i_arrival;

        // Panel 1 -> panel i (i = 2, 3), stored at [i-2]: M_i x M_1
        std::array<CMat, 2> i2i;
        std::array<cplx, 2> alpha_i2i;
        std::array<EffectiveAngles, 2> i2i_arrival;
        std::array<EffectiveAngles, 2> i2i_departure;

        int num_users() const { return static_cast<int>(u2i.size()); }
        const CMat &panel_to_bs(int panel) const;
        const CVec &user_to_panel(int panel, int user) const;
        const CMat &passive_to_panel(int panel) const;

        // Stacked [H_1, H_2, H_3] (N x M) and [h_1k; h_2k; h_3k] (M).
        CMat stacked_i2b() const;
        CVec stacked_u2i(int user) const;
    };

    /// Builds every channel at the true geometric angles. Gain magnitudes follow
    /// the path-loss model; gain phases are i.i.d. uniform on [0, 2pi) drawn in
    /// the fixed order: I2B panels 1..3, U2I users 1..K x panels 1..3, I2I 2..3.
    ChannelSet build_channels(const Scene &scene, Rng &rng);

} // namespace irsisac

#endif
