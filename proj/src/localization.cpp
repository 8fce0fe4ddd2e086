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

#include "irsisac/localization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace irsisac
{
    namespace
    {
        CMat steering_matrix(const AoaPairSet &pairs, const Scene &scene)
        {
            const PanelGeometry &g = scene.geometry_of(pairs.panel);
            const int k_users = pairs.size();
            CMat b(g.total(), k_users + 1);
            for (int l = 0; l < k_users; ++l)
                b.col(l) = steering_ura(pairs.pairs[l], g);
            b.col(k_users) = steering_ura(inter_irs_arrival(scene, pairs.panel), g);
            return b;
        }

        // (B^H B)^-1 with a rank check on B
        CMat gram_inverse(const CMat &b)
        {
            Eigen::JacobiSVD<CMat> svd(b);
            const RVec &s = svd.singularValues();
            const double smin = s(s.size() - 1);
            if (!(smin > 0.0) || s(0) / smin > 1e10)
                throw Error(ErrorKind::IllConditioned, "steering matrix is rank deficient (condition " +
                                                           std::to_string(smin > 0.0 ? s(0) / smin : INFINITY) + ")");
            return (b.adjoint() * b).inverse();
        }

        PathLossEstimates finish(const CMat &sandwich, const AoaPairSet &pairs, double rho)
        {
            PathLossEstimates out;
            out.panel = pairs.panel;
            const int k_users = pairs.size();
            for (int l = 0; l < k_users; ++l)
                out.magnitudes.push_back(std::sqrt(std::max(0.0, sandwich(l, l).real() / rho)));
            out.passive_term = std::sqrt(std::max(0.0, sandwich(k_users, k_users).real() / rho));
            return out;
        }

        void check_inputs(const AoaPairSet &pairs, double rho)
        {
            check_sensing_panel(pairs.panel);
            if (pairs.size() < 1)
                throw Error(ErrorKind::InvalidDimension, "no angle pairs");
            if (!(rho > 0.0))
                throw Error(ErrorKind::InvalidArgument, "transmit power must be positive");
        }
    } // namespace

    PathLossEstimates estimate_path_losses(const SnapshotBlock &snapshots, const AoaPairSet &pairs, const Scene &scene,
                                           double rho, double sigma2)
    {
        check_inputs(pairs, rho);
        if (snapshots.panel != pairs.panel)
            throw Error(ErrorKind::InvalidPanel, "snapshots and angle pairs come from different panels");
        if (snapshots.slots() < 1)
            throw Error(ErrorKind::InsufficientData, "snapshot block is empty");
        const CMat b = steering_matrix(pairs, scene);
        if (snapshots.elements() != b.rows())
            throw Error(ErrorKind::InvalidDimension, "snapshot rows do not match the panel");
        const CMat g_inv = gram_inverse(b);
        // B^H (R - s2 I) B computed as (B^H X)(B^H X)^H / tau - s2 B^H B
        const CMat y = b.adjoint() * snapshots.samples;
        const CMat middle = y * y.adjoint() / static_cast<double>(snapshots.slots()) - sigma2 * (b.adjoint() * b);
        return finish(g_inv * middle * g_inv, pairs, rho);
    }

    PathLossEstimates estimate_path_losses_from_covariance(const CMat &covariance, const AoaPairSet &pairs,
                                                           const Scene &scene, double rho, double sigma2)
    {
        check_inputs(pairs, rho);
        const CMat b = steering_matrix(pairs, scene);
        if (covariance.rows() != b.rows() || covariance.cols() != b.rows())
            throw Error(ErrorKind::InvalidDimension, "covariance does not match the panel");
        const CMat g_inv = gram_inverse(b);
        const CMat shifted = covariance - sigma2 * CMat::Identity(b.rows(), b.rows());
        return finish(g_inv * b.adjoint() * shifted * b * g_inv, pairs, rho);
    }

    CandidateLocation try_triangulate(const EffectiveAngles &pair2, const EffectiveAngles &pair3, const Scene &scene)
    {
        const Position &q2 = scene.panel_position(2);
        const Position &q3 = scene.panel_position(3);
        const DirectionCosines c2 = pair2.cosines();
        const DirectionCosines c3 = pair3.cosines();
        const double u2 = c2.cos_y, v2 = c2.cos_z, u3 = c3.cos_y, v3 = c3.cos_z;

        CandidateLocation out;
        const auto fail = [&](ErrorKind kind) {
            out.feasible = false;
            out.failure = kind;
            out.loss2 = out.loss3 = std::numeric_limits<double>::infinity();
            return out;
        };

        const double den = u3 * v2 - u2 * v3;
        if (!(std::abs(den) > 1e-12))
            return fail(ErrorKind::DegenerateGeometry);
        out.d2 = (u3 * (q2.z - q3.z) - v3 * (q2.y - q3.y)) / den;
        out.d3 = (u2 * (q3.z - q2.z) - v2 * (q3.y - q2.y)) / (-den);
        if (!(out.d2 > 0.0) || !(out.d3 > 0.0))
            return fail(ErrorKind::InfeasibleCandidate);

        const double y = q2.y - u2 * out.d2;
        const double z = q2.z - v2 * out.d2;

        double dx[2];
        const Position *q[2] = {&q2, &q3};
        const double d[2] = {out.d2, out.d3};
        for (int i = 0; i < 2; ++i)
        {
            const double rad = d[i] * d[i] - (y - q[i]->y) * (y - q[i]->y) - (z - q[i]->z) * (z - q[i]->z);
            // rounding can push an exactly in-plane point slightly negative
            if (rad < -1e-9 * d[i] * d[i])
                return fail(ErrorKind::InfeasibleCandidate);
            dx[i] = std::sqrt(std::max(0.0, rad));
        }

        // x = omega_2 of the closest (omega_2, omega_3) branch pair; ties go to
        // the larger x
        double best_gap = std::numeric_limits<double>::infinity();
        double best_x = 0.0;
        for (double s2 : {1.0, -1.0})
            for (double s3 : {1.0, -1.0})
            {
                const double w2 = q2.x + s2 * dx[0];
                const double w3 = q3.x + s3 * dx[1];
                const double gap = std::abs(w2 - w3);
                const double tol = 1e-9 * (1.0 + std::abs(w2) + std::abs(w3));
                if (gap < best_gap - tol || (std::abs(gap - best_gap) <= tol && w2 > best_x))
                {
                    best_gap = std::min(gap, best_gap);
                    best_x = w2;
                }
            }

        out.position = {best_x, y, z};
        const PathLossModel &pl = scene.path_loss;
        out.loss2 = path_gain_magnitude(distance(out.position, q2), pl.exp_u2i, pl);
        out.loss3 = path_gain_magnitude(distance(out.position, q3), pl.exp_u2i, pl);
        return out;
    }

    CandidateLocation triangulate(const EffectiveAngles &pair2, const EffectiveAngles &pair3, const Scene &scene)
    {
        CandidateLocation c = try_triangulate(pair2, pair3, scene);
        if (!c.feasible)
            throw Error(c.failure, c.failure == ErrorKind::DegenerateGeometry
                                       ? "panel directions are parallel; no unique intersection"
                                       : "directions do not intersect in front of both panels");
        return c;
    }

    LocationEstimate match_aoas(const std::vector<std::vector<CandidateLocation>> &candidates,
                                const PathLossEstimates &losses2, const PathLossEstimates &losses3, int block)
    {
        const std::size_t k_users = candidates.size();
        if (losses2.magnitudes.size() != k_users || losses3.magnitudes.size() != k_users)
            throw Error(ErrorKind::InvalidDimension, "loss estimates do not match the candidate grid");
        for (const auto &row : candidates)
            if (row.size() != k_users)
                throw Error(ErrorKind::InvalidDimension, "candidate grid must be K x K");

        std::vector<bool> taken(k_users, false);
        LocationEstimate out;
        out.block = block;
        for (std::size_t l = 0; l < k_users; ++l)
        {
            double best = std::numeric_limits<double>::infinity();
            int best_s = -1;
            for (std::size_t s = 0; s < k_users; ++s)
            {
                const CandidateLocation &c = candidates[l][s];
                if (taken[s] || !c.feasible)
                    continue;
                const double metric =
                    std::hypot(c.loss2 - losses2.magnitudes[l], c.loss3 - losses3.magnitudes[s]);
                if (metric < best)
                {
                    best = metric;
                    best_s = static_cast<int>(s);
                }
            }
            if (best_s < 0)
                throw Error(ErrorKind::MatchingFailure,
                            "no feasible candidate left for panel-2 pair " + std::to_string(l));
            taken[best_s] = true;
            out.matched.push_back(best_s);
            out.positions.push_back(candidates[l][best_s].position);
        }
        return out;
    }

    SensingOutput sense_locations(const SnapshotBlock &snap2, const SnapshotBlock &snap3, const Scene &scene, int users,
                                  const DoaSettings &settings, double rho, double sigma2, int block)
    {
        if (snap2.panel != 2 || snap3.panel != 3)
            throw Error(ErrorKind::InvalidPanel, "sensing expects blocks from panels 2 and 3");
        if (snap2.slots() != snap3.slots() || snap2.first_slot != snap3.first_slot)
            throw Error(ErrorKind::ContractViolation, "the two panels' blocks must cover the same slots");
        SensingOutput out;
        out.pairs2 = estimate_aoa_pairs(snap2, scene, users, settings, block);
        out.pairs3 = estimate_aoa_pairs(snap3, scene, users, settings, block);
        out.losses2 = estimate_path_losses(snap2, out.pairs2, scene, rho, sigma2);
        out.losses3 = estimate_path_losses(snap3, out.pairs3, scene, rho, sigma2);
        out.pairs2.path_loss = out.losses2.magnitudes;
        out.pairs3.path_loss = out.losses3.magnitudes;

        out.candidates.assign(users, std::vector<CandidateLocation>(users));
        for (int l = 0; l < users; ++l)
            for (int s = 0; s < users; ++s)
                out.candidates[l][s] = try_triangulate(out.pairs2.pairs[l], out.pairs3.pairs[s], scene);
        out.estimate = match_aoas(out.candidates, out.losses2, out.losses3, block);
        return out;
    }

    namespace
    {
        void check_sizes(const std::vector<Position> &estimate, const std::vector<Position> &truth)
        {
            if (estimate.size() != truth.size() || truth.empty())
                throw Error(ErrorKind::InvalidArgument, "estimate and truth must have the same nonzero size");
        }

        double squared(const Position &a, const Position &b)
        {
            const Position d = a - b;
            return d.x * d.x + d.y * d.y + d.z * d.z;
        }
    } // namespace

    double rmse_raw(const std::vector<Position> &estimate, const std::vector<Position> &truth)
    {
        check_sizes(estimate, truth);
        double acc = 0.0;
        for (std::size_t k = 0; k < truth.size(); ++k)
            acc += squared(estimate[k], truth[k]);
        return std::sqrt(acc / static_cast<double>(truth.size()));
    }

    std::vector<int> best_assignment(const std::vector<Position> &estimate, const std::vector<Position> &truth)
    {
        check_sizes(estimate, truth);
        std::vector<int> perm(truth.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<int> best_perm = perm;
        double best = std::numeric_limits<double>::infinity();
        do
        {
            double acc = 0.0;
            for (std::size_t k = 0; k < truth.size(); ++k)
                acc += squared(estimate[perm[k]], truth[k]);
            if (acc < best)
            {
                best = acc;
                best_perm = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best_perm;
    }

    std::vector<Position> align_to_truth(const std::vector<Position> &estimate, const std::vector<Position> &truth)
    {
        const std::vector<int> perm = best_assignment(estimate, truth);
        std::vector<Position> out(truth.size());
        for (std::size_t k = 0; k < truth.size(); ++k)
            out[k] = estimate[perm[k]];
        return out;
    }

    double rmse_assigned(const std::vector<Position> &estimate, const std::vector<Position> &truth)
    {
        return rmse_raw(align_to_truth(estimate, truth), truth);
    }

} // namespace irsisac
