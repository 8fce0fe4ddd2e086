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

#include "irsisac/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace irsisac
{
    void Scenario::set_rho_dbm(double dbm)
    {
        rho_dbm = dbm;
        rho = dbm_to_watts(dbm);
    }

    void Scenario::set_noise_dbm(double dbm)
    {
        noise_dbm = dbm;
        sigma2 = dbm_to_watts(dbm);
    }

    void Scenario::set_semi_passive(int cols_y, int rows_z)
    {
        panel_geometry[1] = {rows_z, cols_y};
        panel_geometry[2] = {rows_z, cols_y};
    }

    void Scenario::validate() const
    {
        auto bad = [](const std::string &msg) { throw Error(ErrorKind::InvalidConfiguration, msg); };
        if (users < 1)
            bad("at least one user is required");
        if (bs_antennas < users)
            bad("zero forcing needs at least as many BS antennas as users");
        for (const auto &g : panel_geometry)
            g.validate();
        path_loss.validate();
        if (tau1 < 1 || tau2() < 1)
            bad("tau1 and tau2 = T1 - tau1 must both be at least 1");
        if (pc_slots() < 1)
            bad("T2 = T - T1 must be at least 1");
        if (power_slots < 1 || power_slots * 10 > pc_slots())
            bad("C must satisfy 1 <= C <= T2/10");
        if (bits < 1 || bits > 16 || genie_bits < 1 || genie_bits > 16)
            bad("phase bit depths must be in 1..16");
        if (bits_delta < 1 || bits_delta > 16)
            bad("offset bit depth must be in 1..16");
        if (!(sigma2 > 0.0) || !(rho >= 0.0))
            bad("noise power must be positive and transmit power non-negative");
        ce_isac.validate();
        ce_pc.validate();
        if (placement.kind == UserPlacement::Kind::List && static_cast<int>(placement.positions.size()) != users)
            bad("user list length differs from the user count");
        if (placement.kind == UserPlacement::Kind::Ring && !(placement.ring_distance > panels[1].z))
            bad("ring distance must exceed the height of panel 2 above the floor");
        if (placement.kind == UserPlacement::Kind::Square && !(placement.square_side > 0.0))
            bad("square side must be positive");
    }

    Scenario default_scenario()
    {
        Scenario s;
        s.panels = {Position{-3.0, 0.0, 5.0}, Position{-2.0, -5.0, 7.0}, Position{-2.0, 5.0, 9.0}};
        // BS 20 m above the floor, 50 m from panel 2, on the y = 0 plane
        s.bs = {-2.0 + std::sqrt(50.0 * 50.0 - 5.0 * 5.0 - 13.0 * 13.0), 0.0, 20.0};
        s.panel_geometry = {PanelGeometry{32, 32}, PanelGeometry{12, 12}, PanelGeometry{12, 12}};
        s.set_rho_dbm(20.0);
        s.set_noise_dbm(-80.0);
        return s;
    }

    namespace
    {
        [[noreturn]] void config_error(const std::string &msg) { throw Error(ErrorKind::InvalidConfiguration, msg); }

        void check_keys(const YAML::Node &node, const std::string &where, const std::set<std::string> &allowed)
        {
            if (!node.IsMap())
                config_error("section '" + where + "' must be a mapping");
            for (const auto &kv : node)
            {
                const std::string key = kv.first.as<std::string>();
                if (!allowed.count(key))
                    config_error("unknown key '" + key + "' in section '" + where + "'");
            }
        }

        template <typename T>
        void read(const YAML::Node &node, const char *key, T &out)
        {
            if (node[key])
            {
                try
                {
                    out = node[key].as<T>();
                }
                catch (const YAML::Exception &e)
                {
                    config_error(std::string("bad value for '") + key + "': " + e.what());
                }
            }
        }

        Position read_position(const YAML::Node &n, const std::string &what)
        {
            if (!n.IsSequence() || n.size() != 3)
                config_error(what + " must be a list [x, y, z] in meters");
            return {n[0].as<double>(), n[1].as<double>(), n[2].as<double>()};
        }

        PanelGeometry read_dims(const YAML::Node &n, const std::string &what)
        {
            if (!n.IsSequence() || n.size() != 2)
                config_error(what + " must be a list [cols_y, rows_z]");
            return {n[1].as<int>(), n[0].as<int>()};
        }

        YAML::Node parse_root(const std::string &yaml_text)
        {
            try
            {
                YAML::Node root = YAML::Load(yaml_text);
                if (root.IsNull())
                    return YAML::Node(YAML::NodeType::Map);
                return root;
            }
            catch (const YAML::Exception &e)
            {
                config_error(std::string("YAML parse error: ") + e.what());
            }
        }
    } // namespace

    Scenario parse_scenario(const std::string &yaml_text)
    {
        Scenario s = default_scenario();
        const YAML::Node root = parse_root(yaml_text);
        check_keys(root, "<root>",
                   {"geometry", "arrays", "users", "power", "protocol", "path_loss", "sensing", "beamforming",
                    "seed", "sweep"});
        try
        {
            if (const auto g = root["geometry"])
            {
                check_keys(g, "geometry", {"bs", "panel1", "panel2", "panel3"});
                if (g["bs"])
                    s.bs = read_position(g["bs"], "geometry.bs");
                for (int i = 1; i <= kNumPanels; ++i)
                {
                    const std::string key = "panel" + std::to_string(i);
                    if (g[key])
                        s.panels[i - 1] = read_position(g[key], "geometry." + key);
                }
            }
            if (const auto a = root["arrays"])
            {
                check_keys(a, "arrays", {"bs_antennas", "panel1", "semi_passive"});
                read(a, "bs_antennas", s.bs_antennas);
                if (a["panel1"])
                    s.panel_geometry[0] = read_dims(a["panel1"], "arrays.panel1");
                if (a["semi_passive"])
                {
                    const PanelGeometry g = read_dims(a["semi_passive"], "arrays.semi_passive");
                    s.set_semi_passive(g.cols_y, g.rows_z);
                }
            }
            if (const auto u = root["users"])
            {
                check_keys(u, "users",
                           {"count", "placement", "ring_distance_m", "ring_sector_deg", "square_center",
                            "square_side_m", "positions"});
                read(u, "count", s.users);
                if (u["placement"])
                {
                    const std::string kind = u["placement"].as<std::string>();
                    if (kind == "ring")
                        s.placement.kind = UserPlacement::Kind::Ring;
                    else if (kind == "square")
                        s.placement.kind = UserPlacement::Kind::Square;
                    else if (kind == "list")
                        s.placement.kind = UserPlacement::Kind::List;
                    else
                        config_error("users.placement must be ring, square or list");
                }
                read(u, "ring_distance_m", s.placement.ring_distance);
                read(u, "ring_sector_deg", s.placement.ring_sector_deg);
                read(u, "square_side_m", s.placement.square_side);
                if (u["square_center"])
                    s.placement.square_center = read_position(u["square_center"], "users.square_center");
                if (u["positions"])
                {
                    s.placement.positions.clear();
                    for (const auto &p : u["positions"])
                        s.placement.positions.push_back(read_position(p, "users.positions[]"));
                }
            }
            if (const auto p = root["power"])
            {
                check_keys(p, "power", {"rho_dbm", "noise_dbm"});
                if (p["rho_dbm"])
                    s.set_rho_dbm(p["rho_dbm"].as<double>());
                if (p["noise_dbm"])
                    s.set_noise_dbm(p["noise_dbm"].as<double>());
            }
            if (const auto p = root["protocol"])
            {
                check_keys(p, "protocol", {"T", "T1", "tau1", "C"});
                read(p, "T", s.total_slots);
                read(p, "T1", s.isac_slots);
                read(p, "tau1", s.tau1);
                read(p, "C", s.power_slots);
            }
            if (const auto p = root["path_loss"])
            {
                check_keys(p, "path_loss", {"pl0_db", "d0_m", "exp_u2i", "exp_i2b", "exp_i2i"});
                read(p, "pl0_db", s.path_loss.pl0_db);
                read(p, "d0_m", s.path_loss.d0);
                read(p, "exp_u2i", s.path_loss.exp_u2i);
                read(p, "exp_i2b", s.path_loss.exp_i2b);
                read(p, "exp_i2i", s.path_loss.exp_i2i);
            }
            if (const auto p = root["sensing"])
            {
                check_keys(p, "sensing", {"micro_y", "micro_z", "n_micro"});
                read(p, "micro_y", s.doa.q_y);
                read(p, "micro_z", s.doa.q_z);
                read(p, "n_micro", s.doa.n_micro);
            }
            if (const auto b = root["beamforming"])
            {
                check_keys(b, "beamforming",
                           {"bits", "bits_delta", "offset_budget", "genie_bits", "kappa", "max_iterations",
                            "isac_samples", "isac_elites", "pc_samples", "pc_elites"});
                read(b, "bits", s.bits);
                read(b, "bits_delta", s.bits_delta);
                read(b, "offset_budget", s.offset_budget);
                read(b, "genie_bits", s.genie_bits);
                read(b, "kappa", s.ce_isac.kappa);
                s.ce_pc.kappa = s.ce_isac.kappa;
                read(b, "max_iterations", s.ce_isac.max_iterations);
                s.ce_pc.max_iterations = s.ce_isac.max_iterations;
                read(b, "isac_samples", s.ce_isac.samples);
                read(b, "isac_elites", s.ce_isac.elites);
                read(b, "pc_samples", s.ce_pc.samples);
                read(b, "pc_elites", s.ce_pc.elites);
            }
            read(root, "seed", s.seed);
        }
        catch (const YAML::Exception &e)
        {
            config_error(std::string("bad config value: ") + e.what());
        }
        s.ce_isac.bits = s.bits;
        s.ce_pc.bits = s.bits;
        s.validate();
        return s;
    }

    namespace
    {
        std::string read_file(const std::string &path)
        {
            std::ifstream in(path);
            if (!in)
                throw Error(ErrorKind::InvalidConfiguration, "cannot open config file '" + path + "'");
            std::ostringstream ss;
            ss << in.rdbuf();
            return ss.str();
        }
    } // namespace

    Scenario load_scenario(const std::string &path) { return parse_scenario(read_file(path)); }

    std::vector<Position> place_users(const Scenario &s, Rng &rng)
    {
        std::vector<Position> out;
        switch (s.placement.kind)
        {
        case UserPlacement::Kind::List:
            return s.placement.positions;
        case UserPlacement::Kind::Ring:
        {
            const Position &q2 = s.panels[1];
            const double r = std::sqrt(s.placement.ring_distance * s.placement.ring_distance - q2.z * q2.z);
            const double sector = s.placement.ring_sector_deg * kPi / 180.0;
            for (int k = 0; k < s.users; ++k)
            {
                const double phi = -0.5 * sector + sector * (k + 0.5) / s.users;
                out.push_back({q2.x + r * std::cos(phi), q2.y + r * std::sin(phi), 0.0});
            }
            return out;
        }
        case UserPlacement::Kind::Square:
        {
            const double h = 0.5 * s.placement.square_side;
            std::uniform_real_distribution<double> ux(s.placement.square_center.x - h, s.placement.square_center.x + h);
            std::uniform_real_distribution<double> uy(s.placement.square_center.y - h, s.placement.square_center.y + h);
            for (int k = 0; k < s.users; ++k)
            {
                const double x = ux(rng);
                const double y = uy(rng);
                out.push_back({x, y, s.placement.square_center.z});
            }
            return out;
        }
        }
        return out;
    }

    Scene make_scene(const Scenario &s, const std::vector<Position> &users)
    {
        Scene scene;
        scene.bs = s.bs;
        scene.panels = s.panels;
        scene.panel_geometry = s.panel_geometry;
        scene.bs_antennas = s.bs_antennas;
        scene.path_loss = s.path_loss;
        scene.users = users;
        scene.validate();
        return scene;
    }

    const std::vector<std::string> &sweep_axes()
    {
        static const std::vector<std::string> axes{"rho",      "tau1",         "users",    "M_semi",
                                                   "M_reflect", "tau1_over_T1", "T1_over_T"};
        return axes;
    }

    std::vector<double> default_sweep_values(const std::string &axis)
    {
        if (axis == "rho")
            return {0, 10, 20, 30};
        if (axis == "tau1")
            return {5, 10, 20, 40};
        if (axis == "users")
            return {1, 2, 3, 4};
        if (axis == "M_semi")
            return {16, 64, 144, 256};
        if (axis == "M_reflect")
            return {64, 256, 576, 1024};
        if (axis == "tau1_over_T1")
            return {0.1, 0.2, 0.4, 0.6, 0.8};
        if (axis == "T1_over_T")
            return {0.1, 0.3, 0.5, 0.7, 0.9};
        throw Error(ErrorKind::Usage, "unknown sweep axis '" + axis + "'");
    }

    bool axis_is_sensing(const std::string &axis) { return axis == "rho" || axis == "tau1" || axis == "M_semi"; }

    SweepSpec parse_sweep(const std::string &yaml_text)
    {
        SweepSpec spec;
        const YAML::Node root = parse_root(yaml_text);
        const YAML::Node sw = root["sweep"];
        if (!sw)
            return spec;
        check_keys(sw, "sweep", {"axis", "values", "trials", "mode", "total_power_dbm"});
        try
        {
            read(sw, "axis", spec.axis);
            read(sw, "trials", spec.trials);
            read(sw, "mode", spec.mode);
            if (sw["values"])
                spec.values = sw["values"].as<std::vector<double>>();
            if (sw["total_power_dbm"])
            {
                spec.fixed_total_power = true;
                spec.total_power_dbm = sw["total_power_dbm"].as<double>();
            }
        }
        catch (const YAML::Exception &e)
        {
            config_error(std::string("bad sweep value: ") + e.what());
        }
        if (spec.mode != "auto" && spec.mode != "sensing" && spec.mode != "full")
            config_error("sweep.mode must be auto, sensing or full");
        if (spec.trials < 0)
            config_error("sweep.trials must be non-negative");
        return spec;
    }

    namespace
    {
        int square_side(double value, const std::string &axis)
        {
            const int side = static_cast<int>(std::lround(std::sqrt(value)));
            if (side < 1 || side * side != static_cast<int>(std::lround(value)))
                throw Error(ErrorKind::Usage, axis + " values must be perfect squares (element counts)");
            return side;
        }
    } // namespace

    Scenario apply_sweep_value(const Scenario &base, const SweepSpec &spec, double value)
    {
        Scenario s = base;
        const std::string &axis = spec.axis;
        if (axis == "rho")
            s.set_rho_dbm(value);
        else if (axis == "tau1")
            s.tau1 = static_cast<int>(std::lround(value));
        else if (axis == "users")
        {
            s.users = static_cast<int>(std::lround(value));
            if (spec.fixed_total_power)
                s.set_rho_dbm(spec.total_power_dbm - 10.0 * std::log10(static_cast<double>(s.users)));
        }
        else if (axis == "M_semi")
        {
            const int side = square_side(value, axis);
            s.set_semi_passive(side, side);
        }
        else if (axis == "M_reflect")
        {
            const int side = square_side(value, axis);
            s.panel_geometry[0] = {side, side};
        }
        else if (axis == "tau1_over_T1")
            s.tau1 = std::max(1, static_cast<int>(std::lround(value * s.isac_slots)));
        else if (axis == "T1_over_T")
        {
            const double ratio = static_cast<double>(base.tau1) / base.isac_slots;
            s.isac_slots = static_cast<int>(std::lround(value * s.total_slots));
            s.tau1 = std::max(1, static_cast<int>(std::lround(ratio * s.isac_slots)));
        }
        else
            throw Error(ErrorKind::Usage, "unknown sweep axis '" + axis + "'");
        s.validate();
        return s;
    }

} // namespace irsisac
