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

#include "irsisac/beamforming.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace irsisac
{
    std::vector<double> phase_alphabet(int bits)
    {
        if (bits < 1 || bits > 20)
            throw Error(ErrorKind::InvalidArgument, "phase bit depth must be in 1..20");
        const int levels = 1 << bits;
        std::vector<double> f(levels);
        for (int l = 0; l < levels; ++l)
            f[l] = kTwoPi * l / static_cast<double>(levels);
        return f;
    }

    std::vector<cplx> phasor_alphabet(int bits)
    {
        std::vector<cplx> out;
        for (double ph : phase_alphabet(bits))
            out.push_back(std::polar(1.0, ph));
        return out;
    }

    CMat mrc_combiner(double u_bs, int antennas, int users)
    {
        if (users < 1)
            throw Error(ErrorKind::InvalidDimension, "combiner needs at least one user");
        const CVec w = steering_ula(u_bs, antennas) / std::sqrt(static_cast<double>(antennas));
        return w.replicate(1, users);
    }

    CMat mrc_combiner(const Scene &scene, int users)
    {
        const DirectionCosines c = direction_cosines(scene.panel_position(kPassivePanel), scene.bs);
        return mrc_combiner(kPi * c.cos_y, scene.bs_antennas, users);
    }

    CMat zf_combiner(const CMat &h_eq, double max_condition)
    {
        if (h_eq.cols() < 1 || h_eq.cols() > h_eq.rows())
            throw Error(ErrorKind::InvalidDimension, "zero forcing needs 1 <= K <= N");
        CMat w;
        double cond = 0.0;
        if (!kernels::zero_forcing(h_eq, max_condition, w, cond))
            throw Error(ErrorKind::IllConditioned,
                        "effective channel is rank deficient (condition number " + std::to_string(cond) + ")");
        return w;
    }

    SensedChannel sensed_channel(const Position &estimate, int panel, const Scene &scene)
    {
        if (!std::isfinite(estimate.x) || !std::isfinite(estimate.y) || !std::isfinite(estimate.z))
            throw Error(ErrorKind::DegenerateGeometry, "sensed position is not finite");
        const Position &q = scene.panel_position(panel);
        SensedChannel s;
        s.panel = panel;
        s.magnitude = path_gain_magnitude(distance(estimate, q), scene.path_loss.exp_u2i, scene.path_loss);
        s.angles = user_arrival(estimate, q);
        s.h_abs = s.magnitude * steering_ura(s.angles, scene.geometry_of(panel));
        return s;
    }

    CMat sensed_channels(const std::vector<Position> &estimates, int panel, const Scene &scene)
    {
        CMat h(scene.geometry_of(panel).total(), static_cast<Eigen::Index>(estimates.size()));
        for (std::size_t k = 0; k < estimates.size(); ++k)
            h.col(k) = sensed_channel(estimates[k], panel, scene).h_abs;
        return h;
    }

    CMat true_abs_channels(const ChannelSet &channels, int panel)
    {
        check_panel(panel);
        const int k_users = channels.num_users();
        CMat h(channels.user_to_panel(panel, 0).size(), k_users);
        for (int k = 0; k < k_users; ++k)
        {
            const cplx a = channels.alpha_u2i[k][panel - 1];
            h.col(k) = channels.user_to_panel(panel, k) * (std::abs(a) / a);
        }
        return h;
    }

    namespace
    {
        void fill_panel(kernels::ScoringProblem &p, const ChannelSet &ch, int panel, int column, const CMat &users,
                        Eigen::Index row_offset)
        {
            const CVec &b = ch.i2b_panel_steering[panel - 1];
            const cplx alpha = ch.alpha_i2b[panel - 1];
            for (Eigen::Index m = 0; m < b.size(); ++m)
            {
                p.group[row_offset + m] = column;
                p.coef.row(row_offset + m) = alpha * std::conj(b(m)) * users.row(row_offset + m);
            }
        }
    } // namespace

    kernels::ScoringProblem isac_problem(const ChannelSet &channels, const CMat &users_panel1, const CMat &combiner,
                                         int bits, double rho, double sigma2)
    {
        const Eigen::Index m1 = channels.i2b_panel_steering[0].size();
        if (users_panel1.rows() != m1)
            throw Error(ErrorKind::InvalidDimension, "panel-1 user channels do not match the panel size");
        check_unit_columns(combiner);
        kernels::ScoringProblem p;
        p.steering = channels.i2b_bs_steering[0];
        p.group.assign(m1, 0);
        p.coef.resize(m1, users_panel1.cols());
        fill_panel(p, channels, 1, 0, users_panel1, 0);
        p.phasor = phasor_alphabet(bits);
        p.mode = kernels::CombinerMode::Fixed;
        p.combiner = combiner;
        p.rho = rho;
        p.sigma2 = sigma2;
        return p;
    }

    kernels::ScoringProblem pc_problem(const ChannelSet &channels, const CMat &users_stacked, int bits, double rho,
                                       double sigma2)
    {
        Eigen::Index total = 0;
        for (const auto &b : channels.i2b_panel_steering)
            total += b.size();
        if (users_stacked.rows() != total)
            throw Error(ErrorKind::InvalidDimension, "stacked user channels do not match the total element count");
        kernels::ScoringProblem p;
        const Eigen::Index n = channels.i2b_bs_steering[0].size();
        p.steering.resize(n, kNumPanels);
        p.group.assign(total, 0);
        p.coef.resize(total, users_stacked.cols());
        Eigen::Index off = 0;
        for (int i = 1; i <= kNumPanels; ++i)
        {
            p.steering.col(i - 1) = channels.i2b_bs_steering[i - 1];
            fill_panel(p, channels, i, i - 1, users_stacked, off);
            off += channels.i2b_panel_steering[i - 1].size();
        }
        p.phasor = phasor_alphabet(bits);
        p.mode = kernels::CombinerMode::ZeroForcing;
        p.rho = rho;
        p.sigma2 = sigma2;
        return p;
    }

    CeResult ce_optimize_isac(const ChannelSet &channels, const CMat &sensed_panel1, const CMat &combiner,
                              const CeParams &params, double rho, double sigma2, Rng &rng)
    {
        return cross_entropy_optimize(isac_problem(channels, sensed_panel1, combiner, params.bits, rho, sigma2), params,
                                      rng);
    }

    CeResult ce_optimize_pc(const ChannelSet &channels, const CMat &sensed_stacked, const CeParams &params, double rho,
                            double sigma2, Rng &rng)
    {
        return cross_entropy_optimize(pc_problem(channels, sensed_stacked, params.bits, rho, sigma2), params, rng);
    }

    std::vector<PowerRecord> record_powers_pc(const ChannelSet &channels, const PhaseShiftConfig &theta1,
                                              const CMat &combiner, int slots, double rho, double sigma2, Rng &rng)
    {
        if (slots < 0)
            throw Error(ErrorKind::InvalidArgument, "slot count must be non-negative");
        check_unit_columns(combiner);
        const int m2 = static_cast<int>(channels.i2b_panel_steering[1].size());
        const int m3 = static_cast<int>(channels.i2b_panel_steering[2].size());
        std::vector<PowerRecord> out;
        for (int t = 0; t < slots; ++t)
        {
            PowerRecord r;
            r.theta = PhaseShiftConfig::concat({theta1, PhaseShiftConfig::random(theta1.bits, m2, rng),
                                                PhaseShiftConfig::random(theta1.bits, m3, rng)});
            const CMat g = combiner.adjoint() * effective_channels(channels, r.theta, Period::Pc);
            r.power = sigma2;
            for (Eigen::Index k = 0; k < g.cols(); ++k)
                r.power += rho * std::norm(g(k, k));
            out.push_back(std::move(r));
        }
        return out;
    }

    kernels::OffsetProblem offset_problem(const std::vector<PowerRecord> &records,
                                          const std::array<CMat, kNumPanels> &sensed, const ChannelSet &channels,
                                          const CMat &combiner, int bits_delta, double rho, double sigma2)
    {
        if (records.empty())
            throw Error(ErrorKind::InsufficientData, "no power records; phase offsets cannot be estimated");
        const Eigen::Index k_users = sensed[0].cols();
        if (combiner.cols() != k_users)
            throw Error(ErrorKind::InvalidDimension, "combiner and sensed channels disagree on K");
        kernels::OffsetProblem p;
        p.phasor = phasor_alphabet(bits_delta);
        p.rho = rho;
        p.sigma2 = sigma2;
        p.measured.resize(static_cast<Eigen::Index>(records.size()));
        p.terms.assign(k_users, CMat(records.size(), 3));
        for (std::size_t t = 0; t < records.size(); ++t)
        {
            p.measured(t) = records[t].power;
            const CVec xi = records[t].theta.reflection();
            Eigen::Index off = 0;
            for (int i = 0; i < kNumPanels; ++i)
            {
                const CVec &b = channels.i2b_panel_steering[i];
                const Eigen::Index mi = b.size();
                if (sensed[i].rows() != mi || sensed[i].cols() != k_users)
                    throw Error(ErrorKind::InvalidDimension, "sensed channel shape mismatch");
                if (xi.size() < off + mi)
                    throw Error(ErrorKind::InvalidDimension, "recorded phase configuration too short");
                for (Eigen::Index k = 0; k < k_users; ++k)
                {
                    // w_k^H alpha_i a_i b_i^H diag(xi_i) h_abs,i,k
                    const cplx inner = b.dot(xi.segment(off, mi).cwiseProduct(sensed[i].col(k)));
                    const cplx lead = combiner.col(k).dot(channels.i2b_bs_steering[i]);
                    p.terms[k](t, i) = lead * channels.alpha_i2b[i] * inner;
                }
                off += mi;
            }
        }
        return p;
    }

    OffsetEstimate estimate_phase_offsets(const std::vector<PowerRecord> &records,
                                          const std::array<CMat, kNumPanels> &sensed, const ChannelSet &channels,
                                          const CMat &combiner, int bits_delta, double rho, double sigma2,
                                          std::uint64_t budget)
    {
        const kernels::OffsetProblem p = offset_problem(records, sensed, channels, combiner, bits_delta, rho, sigma2);
        const int users = p.users();
        const int levels = p.levels();

        bool within = true;
        std::uint64_t total = 1;
        for (int j = 0; j < 2 * users && within; ++j)
        {
            total *= static_cast<std::uint64_t>(levels);
            within = total <= budget;
        }

        OffsetEstimate out;
        if (within)
        {
            const auto res = kernels::exhaustive_offset_search(p);
            out.indices = res.digits;
            out.objective = res.objective;
        }
        else
        {
            // per-user coordinate descent over that user's (d2, d3) pair
            out.exhaustive = false;
            const auto table = kernels::offset_power_table(p);
            std::vector<int> digits(2 * users, 0);
            double f = kernels::offset_objective(p, table, digits);
            for (int sweep = 0; sweep < 3; ++sweep)
                for (int k = 0; k < users; ++k)
                {
                    int best2 = digits[k], best3 = digits[users + k];
                    for (int d2 = 0; d2 < levels; ++d2)
                        for (int d3 = 0; d3 < levels; ++d3)
                        {
                            digits[k] = d2;
                            digits[users + k] = d3;
                            const double g = kernels::offset_objective(p, table, digits);
                            if (g < f)
                            {
                                f = g;
                                best2 = d2;
                                best3 = d3;
                            }
                        }
                    digits[k] = best2;
                    digits[users + k] = best3;
                }
            out.indices = digits;
            out.objective = f;
        }
        out.delta.resize(2, users);
        for (int k = 0; k < users; ++k)
        {
            out.delta(0, k) = kTwoPi * out.indices[k] / levels;
            out.delta(1, k) = kTwoPi * out.indices[users + k] / levels;
        }
        return out;
    }

    CMat apply_offsets(const std::array<CMat, kNumPanels> &sensed, const RMat &delta)
    {
        const Eigen::Index k_users = sensed[0].cols();
        if (delta.rows() != 2 || delta.cols() != k_users)
            throw Error(ErrorKind::InvalidDimension, "offset matrix must be 2 x K");
        const Eigen::Index total = sensed[0].rows() + sensed[1].rows() + sensed[2].rows();
        CMat h(total, k_users);
        for (Eigen::Index k = 0; k < k_users; ++k)
        {
            h.col(k) << sensed[0].col(k), std::polar(1.0, delta(0, k)) * sensed[1].col(k),
                std::polar(1.0, delta(1, k)) * sensed[2].col(k);
        }
        return h;
    }

} // namespace irsisac
