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

#include "irsisac/signal.hpp"

#include <cmath>
#include <limits>

namespace irsisac
{
    SymbolBlock SymbolBlock::slice(int first_slot, int count) const
    {
        if (first_slot < 0 || count < 0 || first_slot + count > slots())
            throw Error(ErrorKind::InvalidDimension, "symbol slice outside the block");
        SymbolBlock out;
        out.samples = samples.middleCols(first_slot, count);
        out.alphabet = alphabet;
        return out;
    }

    SymbolBlock generate_symbols(int k_users, int slots, Rng &rng)
    {
        if (k_users < 1 || slots < 1)
            throw Error(ErrorKind::InvalidDimension, "symbol block needs at least one user and one slot");
        static const double h = std::sqrt(0.5);
        static const cplx qpsk[4] = {{h, h}, {-h, h}, {-h, -h}, {h, -h}};
        std::uniform_int_distribution<int> pick(0, 3);
        SymbolBlock block;
        block.samples.resize(k_users, slots);
        for (int t = 0; t < slots; ++t)
            for (int k = 0; k < k_users; ++k)
                block.samples(k, t) = qpsk[pick(rng)];
        return block;
    }

    double PhaseShiftConfig::phase(int m) const { return kTwoPi * indices.at(m) / static_cast<double>(1 << bits); }

    CVec PhaseShiftConfig::reflection() const
    {
        CVec xi(elements());
        for (int m = 0; m < elements(); ++m)
            xi(m) = std::polar(1.0, phase(m));
        return xi;
    }

    void PhaseShiftConfig::validate() const
    {
        if (bits < 1 || bits > 20)
            throw Error(ErrorKind::InvalidArgument, "phase bit depth must be in 1..20");
        const int levels = 1 << bits;
        for (int idx : indices)
            if (idx < 0 || idx >= levels)
                throw Error(ErrorKind::InvalidArgument, "phase index outside the alphabet");
    }

    PhaseShiftConfig PhaseShiftConfig::random(int bits, int elements, Rng &rng)
    {
        PhaseShiftConfig c;
        c.bits = bits;
        c.validate();
        std::uniform_int_distribution<int> pick(0, (1 << bits) - 1);
        c.indices.resize(elements);
        for (auto &i : c.indices)
            i = pick(rng);
        return c;
    }

    PhaseShiftConfig PhaseShiftConfig::zeros(int bits, int elements)
    {
        PhaseShiftConfig c;
        c.bits = bits;
        c.indices.assign(elements, 0);
        c.validate();
        return c;
    }

    PhaseShiftConfig PhaseShiftConfig::concat(const std::vector<PhaseShiftConfig> &parts)
    {
        if (parts.empty())
            throw Error(ErrorKind::InvalidArgument, "nothing to concatenate");
        PhaseShiftConfig out;
        out.bits = parts.front().bits;
        for (const auto &p : parts)
        {
            if (p.bits != out.bits)
                throw Error(ErrorKind::InvalidArgument, "concatenated phase configs must share the bit depth");
            out.indices.insert(out.indices.end(), p.indices.begin(), p.indices.end());
        }
        return out;
    }

    void NoiseModel::validate() const
    {
        if (!(variance > 0.0))
            throw Error(ErrorKind::InvalidArgument, "noise variance must be positive");
    }

    namespace
    {
        CMat user_matrix(const ChannelSet &ch, int panel)
        {
            const int k_users = ch.num_users();
            CMat h(ch.user_to_panel(panel, 0).size(), k_users);
            for (int k = 0; k < k_users; ++k)
                h.col(k) = ch.user_to_panel(panel, k);
            return h;
        }

        CMat stacked_user_matrix(const ChannelSet &ch)
        {
            const int k_users = ch.num_users();
            CMat h(ch.stacked_u2i(0).size(), k_users);
            for (int k = 0; k < k_users; ++k)
                h.col(k) = ch.stacked_u2i(k);
            return h;
        }

        CMat noise_matrix(int rows, int cols, double variance, Rng &rng)
        {
            CMat n(rows, cols);
            for (int t = 0; t < cols; ++t)
                for (int m = 0; m < rows; ++m)
                    n(m, t) = complex_gaussian(rng, variance);
            return n;
        }

        void check_theta(const PhaseShiftConfig &theta, Eigen::Index elements)
        {
            theta.validate();
            if (theta.elements() != elements)
                throw Error(ErrorKind::InvalidDimension, "phase configuration does not match the panel size");
        }

        CMat combine_at_bs(const CMat &h_i2b, const CVec &xi, const CMat &users, const CMat &combiner,
                           const SymbolBlock &symbols, double rho, const NoiseModel &noise, Rng &rng)
        {
            if (symbols.users() != users.cols())
                throw Error(ErrorKind::InvalidDimension, "symbol block user count mismatch");
            if (combiner.rows() != h_i2b.rows() || combiner.cols() != users.cols())
                throw Error(ErrorKind::InvalidDimension, "combiner must be N x K");
            check_unit_columns(combiner);
            const CMat received = std::sqrt(rho) * (h_i2b * (xi.asDiagonal() * (users * symbols.samples)));
            const CMat n = noise_matrix(static_cast<int>(h_i2b.rows()), symbols.slots(), noise.variance, rng);
            return combiner.adjoint() * (received + n);
        }
    } // namespace

    SnapshotBlock receive_at_sub_irs(const ChannelSet &channels, const PhaseShiftConfig &theta1,
                                     const SymbolBlock &symbols, double rho, const NoiseModel &noise,
                                     int panel, Rng &rng, int first_slot)
    {
        check_sensing_panel(panel);
        noise.validate();
        if (rho < 0.0)
            throw Error(ErrorKind::InvalidArgument, "transmit power must be non-negative");
        const CMat &h_i2i = channels.passive_to_panel(panel);
        check_theta(theta1, h_i2i.cols());
        if (symbols.users() != channels.num_users())
            throw Error(ErrorKind::InvalidDimension, "symbol block user count mismatch");

        const CMat direct = user_matrix(channels, panel);
        const CMat via_passive = user_matrix(channels, kPassivePanel);
        const CVec xi = theta1.reflection();
        const double amp = std::sqrt(rho);

        const CMat users_term = amp * (direct * symbols.samples);
        const CMat passive_term = amp * (h_i2i * (xi.asDiagonal() * (via_passive * symbols.samples)));
        const CMat n = noise_matrix(static_cast<int>(direct.rows()), symbols.slots(), noise.variance, rng);

        SnapshotBlock out;
        out.panel = panel;
        out.first_slot = first_slot;
        out.samples = users_term + passive_term + n;
        return out;
    }

    CMat receive_at_bs_isac(const ChannelSet &channels, const PhaseShiftConfig &theta1, const CMat &combiner,
                            const SymbolBlock &symbols, double rho, const NoiseModel &noise, Rng &rng)
    {
        noise.validate();
        const CMat &h = channels.panel_to_bs(kPassivePanel);
        check_theta(theta1, h.cols());
        return combine_at_bs(h, theta1.reflection(), user_matrix(channels, kPassivePanel), combiner, symbols, rho,
                             noise, rng);
    }

    CMat receive_at_bs_pc(const ChannelSet &channels, const PhaseShiftConfig &theta, const CMat &combiner,
                          const SymbolBlock &symbols, double rho, const NoiseModel &noise, Rng &rng)
    {
        noise.validate();
        const CMat h = channels.stacked_i2b();
        check_theta(theta, h.cols());
        return combine_at_bs(h, theta.reflection(), stacked_user_matrix(channels), combiner, symbols, rho, noise,
                             rng);
    }

    CMat effective_channels(const ChannelSet &channels, const PhaseShiftConfig &theta, Period period)
    {
        if (period == Period::Isac)
        {
            const CMat &h = channels.panel_to_bs(kPassivePanel);
            check_theta(theta, h.cols());
            return h * (theta.reflection().asDiagonal() * user_matrix(channels, kPassivePanel));
        }
        const CMat h = channels.stacked_i2b();
        check_theta(theta, h.cols());
        return h * (theta.reflection().asDiagonal() * stacked_user_matrix(channels));
    }

    void check_unit_columns(const CMat &combiner)
    {
        for (Eigen::Index k = 0; k < combiner.cols(); ++k)
            if (std::abs(combiner.col(k).norm() - 1.0) > 1e-9)
                throw Error(ErrorKind::ContractViolation,
                            "combiner column " + std::to_string(k) + " is not unit-norm");
    }

    double sum_rate_from_gram(const CMat &gram, double rho, double sigma2)
    {
        const Eigen::Index k_users = gram.rows();
        double total = 0.0;
        for (Eigen::Index k = 0; k < k_users; ++k)
        {
            const double signal = rho * std::norm(gram(k, k));
            if (signal == 0.0)
                continue;
            double interference = 0.0;
            for (Eigen::Index j = 0; j < gram.cols(); ++j)
                if (j != k)
                    interference += std::norm(gram(k, j));
            const double denom = rho * interference + sigma2;
            if (denom == 0.0)
                return std::numeric_limits<double>::infinity();
            total += std::log2(1.0 + signal / denom);
        }
        return total;
    }

    double sum_rate(const CMat &combiner, const CMat &effective, double rho, double sigma2)
    {
        if (combiner.rows() != effective.rows() || combiner.cols() != effective.cols())
            throw Error(ErrorKind::InvalidDimension, "combiner and effective channel shapes differ");
        check_unit_columns(combiner);
        return sum_rate_from_gram(combiner.adjoint() * effective, rho, sigma2);
    }

    double sum_rate(const ChannelSet &channels, const CMat &combiner, const PhaseShiftConfig &theta, double rho,
                    double sigma2, Period period)
    {
        return sum_rate(combiner, effective_channels(channels, theta, period), rho, sigma2);
    }

} // namespace irsisac
