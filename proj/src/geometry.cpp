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

#include "irsisac/geometry.hpp"

#include <cmath>
#include <string>

namespace irsisac
{
    Position operator-(const Position &a, const Position &b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    Position operator+(const Position &a, const Position &b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    double norm(const Position &p) { return std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z); }
    double distance(const Position &a, const Position &b) { return norm(a - b); }

    void PanelGeometry::validate() const
    {
        if (rows_z < 1 || cols_y < 1)
            throw Error(ErrorKind::InvalidDimension,
                        "panel must be at least 1x1, got " + std::to_string(cols_y) + "x" + std::to_string(rows_z));
    }

    EffectiveAngles EffectiveAngles::from_cosines(const DirectionCosines &c) { return {kPi * c.cos_y, kPi * c.cos_z}; }
    DirectionCosines EffectiveAngles::cosines() const { return {u / kPi, v / kPi}; }

    void PathLossModel::validate() const
    {
        if (!(d0 > 0.0))
            throw Error(ErrorKind::InvalidConfiguration, "reference distance must be positive");
        if (!(exp_u2i > 0.0 && exp_i2b > 0.0 && exp_i2i > 0.0))
            throw Error(ErrorKind::InvalidConfiguration, "path-loss exponents must be positive");
    }

    CVec steering_ula(double u, int n)
    {
        if (n < 1)
            throw Error(ErrorKind::InvalidDimension, "steering vector needs at least one element");
        CVec a(n);
        for (int m = 0; m < n; ++m)
            a(m) = std::polar(1.0, m * u);
        return a;
    }

    CVec steering_ura(double u, double v, const PanelGeometry &geometry)
    {
        geometry.validate();
        const CVec ay = steering_ula(u, geometry.cols_y);
        const CVec az = steering_ula(v, geometry.rows_z);
        CVec b(geometry.total());
        for (int iy = 0; iy < geometry.cols_y; ++iy)
            for (int iz = 0; iz < geometry.rows_z; ++iz)
                b(geometry.flat_index(iy, iz)) = ay(iy) * az(iz);
        return b;
    }

    CVec steering_ura(const EffectiveAngles &angles, const PanelGeometry &geometry)
    {
        return steering_ura(angles.u, angles.v, geometry);
    }

    DirectionCosines direction_cosines(const Position &src, const Position &dst)
    {
        const Position d = dst - src;
        const double r = norm(d);
        if (!(r > 0.0) || !std::isfinite(r))
            throw Error(ErrorKind::DegenerateGeometry, "direction between coincident or non-finite points");
        return {d.y / r, d.z / r};
    }

    double path_gain_magnitude(double d, double exponent, const PathLossModel &model)
    {
        if (!(d > 0.0) || !std::isfinite(d))
            throw Error(ErrorKind::InvalidDistance, "path-loss distance must be positive and finite");
        const double dd = std::max(d, model.d0);
        const double loss_db = model.pl0_db + 10.0 * exponent * std::log10(dd / model.d0);
        return std::pow(10.0, -loss_db / 20.0);
    }

    void check_panel(int panel)
    {
        if (panel < 1 || panel > kNumPanels)
            throw Error(ErrorKind::InvalidPanel, "panel index " + std::to_string(panel) + " outside 1..3");
    }

    void check_sensing_panel(int panel)
    {
        if (panel != 2 && panel != 3)
            throw Error(ErrorKind::InvalidPanel,
                        "panel " + std::to_string(panel) + " does not sense; only panels 2 and 3 record samples");
    }

    const Position &Scene::panel_position(int panel) const
    {
        check_panel(panel);
        return panels[panel - 1];
    }

    const PanelGeometry &Scene::geometry_of(int panel) const
    {
        check_panel(panel);
        return panel_geometry[panel - 1];
    }

    int Scene::total_elements() const
    {
        int m = 0;
        for (const auto &g : panel_geometry)
            m += g.total();
        return m;
    }

    int Scene::element_offset(int panel) const
    {
        check_panel(panel);
        int off = 0;
        for (int i = 1; i < panel; ++i)
            off += panel_geometry[i - 1].total();
        return off;
    }

    void Scene::validate() const
    {
        if (bs_antennas < 1)
            throw Error(ErrorKind::InvalidDimension, "BS needs at least one antenna");
        for (const auto &g : panel_geometry)
            g.validate();
        path_loss.validate();

        std::vector<Position> all{bs, panels[0], panels[1], panels[2]};
        all.insert(all.end(), users.begin(), users.end());
        for (const auto &p : all)
            if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
                throw Error(ErrorKind::DegenerateGeometry, "non-finite position in scene");
        for (std::size_t a = 0; a < all.size(); ++a)
            for (std::size_t b = a + 1; b < all.size(); ++b)
                if (!(distance(all[a], all[b]) > 0.0))
                    throw Error(ErrorKind::DegenerateGeometry, "two scene entities share a position");
    }

    EffectiveAngles inter_irs_arrival(const Scene &scene, int panel)
    {
        check_sensing_panel(panel);
        return EffectiveAngles::from_cosines(
            direction_cosines(scene.panel_position(kPassivePanel), scene.panel_position(panel)));
    }

    EffectiveAngles user_arrival(const Position &user, const Position &panel)
    {
        return EffectiveAngles::from_cosines(direction_cosines(user, panel));
    }

    const CMat &ChannelSet::panel_to_bs(int panel) const
    {
        check_panel(panel);
        return i2b[panel - 1];
    }

    const CVec &ChannelSet::user_to_panel(int panel, int user) const
    {
        check_panel(panel);
        return u2i.at(user)[panel - 1];
    }

    const CMat &ChannelSet::passive_to_panel(int panel) const
    {
        check_sensing_panel(panel);
        return i2i[panel - 2];
    }

    CMat ChannelSet::stacked_i2b() const
    {
        const Eigen::Index n = i2b[0].rows();
        const Eigen::Index m = i2b[0].cols() + i2b[1].cols() + i2b[2].cols();
        CMat h(n, m);
        h << i2b[0], i2b[1], i2b[2];
        return h;
    }

    CVec ChannelSet::stacked_u2i(int user) const
    {
        const auto &h = u2i.at(user);
        CVec out(h[0].size() + h[1].size() + h[2].size());
        out << h[0], h[1], h[2];
        return out;
    }

    namespace
    {
        cplx random_phase_gain(double magnitude, Rng &rng)
        {
            std::uniform_real_distribution<double> phase(0.0, kTwoPi);
            return std::polar(magnitude, phase(rng));
        }
    } // namespace

    ChannelSet build_channels(const Scene &scene, Rng &rng)
    {
        scene.validate();
        const PathLossModel &pl = scene.path_loss;
        const int n = scene.bs_antennas;
        const int k_users = scene.num_users();
        ChannelSet ch;

        for (int i = 1; i <= kNumPanels; ++i)
        {
            const Position &q = scene.panel_position(i);
            const PanelGeometry &g = scene.geometry_of(i);
            const DirectionCosines dep = direction_cosines(q, scene.bs);
            const double u_bs = kPi * dep.cos_y; // BS ULA lies along y
            const EffectiveAngles d = EffectiveAngles::from_cosines(dep);
            const cplx alpha = random_phase_gain(path_gain_magnitude(distance(q, scene.bs), pl.exp_i2b, pl), rng);

            ch.alpha_i2b[i - 1] = alpha;
            ch.i2b_departure[i - 1] = d;
            ch.i2b_bs_arrival[i - 1] = u_bs;
            ch.i2b_bs_steering[i - 1] = steering_ula(u_bs, n);
            ch.i2b_panel_steering[i - 1] = steering_ura(d, g);
            ch.i2b[i - 1] = alpha * ch.i2b_bs_steering[i - 1] * ch.i2b_panel_steering[i - 1].adjoint();
        }

        ch.u2i.resize(k_users);
        ch.alpha_u2i.resize(k_users);
        ch.u2i_arrival.resize(k_users);
        for (int k = 0; k < k_users; ++k)
        {
            for (int i = 1; i <= kNumPanels; ++i)
            {
                const Position &q = scene.panel_position(i);
                const EffectiveAngles a = user_arrival(scene.users[k], q);
                const cplx alpha = random_phase_gain(path_gain_magnitude(distance(scene.users[k], q), pl.exp_u2i, pl), rng);
                ch.u2i_arrival[k][i - 1] = a;
                ch.alpha_u2i[k][i - 1] = alpha;
                ch.u2i[k][i - 1] = alpha * steering_ura(a, scene.geometry_of(i));
            }
        }

        const Position &q1 = scene.panel_position(kPassivePanel);
        for (int i = 2; i <= kNumPanels; ++i)
        {
            const Position &qi = scene.panel_position(i);
            const EffectiveAngles a = inter_irs_arrival(scene, i);
            // the departure direction from panel 1 toward panel i is the same line
            const EffectiveAngles d = EffectiveAngles::from_cosines(direction_cosines(q1, qi));
            const cplx alpha = random_phase_gain(path_gain_magnitude(distance(q1, qi), pl.exp_i2i, pl), rng);
            ch.i2i_arrival[i - 2] = a;
            ch.i2i_departure[i - 2] = d;
            ch.alpha_i2i[i - 2] = alpha;
            ch.i2i[i - 2] = alpha * steering_ura(a, scene.geometry_of(i)) *
                            steering_ura(d, scene.geometry_of(kPassivePanel)).adjoint();
        }
        return ch;
    }

} // namespace irsisac
