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

#ifndef IRSISAC_SCENARIO_HPP
#define IRSISAC_SCENARIO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "irsisac/common.hpp"
#include "irsisac/cross_entropy.hpp"
#include "irsisac/geometry.hpp"
#include "irsisac/subspace.hpp"

namespace irsisac
{
    struct UserPlacement
    {
        enum class Kind
        {
            Ring,   // evenly spaced on a floor arc at fixed distance from panel 2
            Square, // uniform over a floor square, redrawn every trial
            List    // fixed positions
        };
        Kind kind = Kind::Square;
        double ring_distance = 10.0;  // m, 3D distance to panel 2
        double ring_sector_deg = 90.0;
        Position square_center{4.0, 0.0, 0.0};
        double square_side = 10.0; // m
        std::vector<Position> positions;
    };

    // Full experiment description. Powers are linear (W); the dBm values they
    // came from are kept for reporting only.
    struct Scenario
    {
        Position bs;
        std::array<Position, kNumPanels> panels;
        std::array<PanelGeometry, kNumPanels> panel_geometry;
        int bs_antennas = 8;
        int users = 3;
        UserPlacement placement;
        PathLossModel path_loss;
        DoaSettings doa;

        double rho_dbm = 20.0;
        double noise_dbm = -80.0;
        double rho = 0.0;    // W
        double sigma2 = 0.0; // W

        int total_slots = 1200; // T
        int isac_slots = 120;   // T1
        int tau1 = 20;
        int power_slots = 4; // C

        int bits = 3;
        int bits_delta = 4;
        std::uint64_t offset_budget = 1000000;
        int genie_bits = 10;
        CeParams ce_isac{1500, 300, 1e-3, 50, 3};
        CeParams ce_pc{2000, 400, 1e-3, 50, 3};
        std::uint64_t seed = 1;

        int tau2() const { return isac_slots - tau1; }
        int pc_slots() const { return total_slots - isac_slots; } // T2

        void set_rho_dbm(double dbm);
        void set_noise_dbm(double dbm);
        void set_semi_passive(int cols_y, int rows_z);
        void validate() const;
    };

    /// Defaults of the reference experiment (see README).
    Scenario default_scenario();

    /// Parses YAML text on top of the defaults; unknown keys are rejected.
    Scenario parse_scenario(const std::string &yaml_text);
    Scenario load_scenario(const std::string &path);

    /// User positions for one trial (Square placement draws from `rng`).
    std::vector<Position> place_users(const Scenario &scenario, Rng &rng);

    Scene make_scene(const Scenario &scenario, const std::vector<Position> &users);

    struct SweepSpec
    {
        std::string axis = "rho";
        std::vector<double> values{0.0, 10.0, 20.0, 30.0};
        int trials = 50;
        std::string mode = "auto"; // auto | sensing | full
        bool fixed_total_power = false;
        double total_power_dbm = 20.0;
    };

    const std::vector<std::string> &sweep_axes();

    /// Reference values of an axis; throws Usage for unknown axes.
    std::vector<double> default_sweep_values(const std::string &axis);

    /// Reads the optional `sweep:` section of a config file.
    SweepSpec parse_sweep(const std::string &yaml_text);

    /// Scenario at one sweep point.
    Scenario apply_sweep_value(const Scenario &base, const SweepSpec &spec, double value);

    /// Whether the axis runs sensing-only trials under mode "auto".
    bool axis_is_sensing(const std::string &axis);

} // namespace irsisac

#endif
