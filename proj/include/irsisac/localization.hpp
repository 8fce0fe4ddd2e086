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

#ifndef IRSISAC_LOCALIZATION_HPP
#define IRSISAC_LOCALIZATION_HPP

#include <vector>

#include "irsisac/common.hpp"
#include "irsisac/geometry.hpp"
#include "irsisac/signal.hpp"
#include "irsisac/subspace.hpp"

namespace irsisac
{
    struct PathLossEstimates
    {
        int panel = 2;
        std::vector<double> magnitudes; // |alpha_hat_l|, l = 1..K
        double passive_term = 0.0;      // |P_hat_i|, exposed but unused downstream
    };

    /// Gain magnitudes of the K user paths from the sample covariance, given the
    /// estimated angle pairs and the known inter-panel pair. Negative diagonal
    /// entries (finite-sample effect) are clamped to zero.
    PathLossEstimates estimate_path_losses(const SnapshotBlock &snapshots, const AoaPairSet &pairs, const Scene &scene,
                                           double rho, double sigma2);

    // Same estimator from an explicit covariance (used by exact-covariance checks).
    PathLossEstimates estimate_path_losses_from_covariance(const CMat &covariance, const AoaPairSet &pairs,
                                                           const Scene &scene, double rho, double sigma2);

    struct CandidateLocation
    {
        Position position;
        double d2 = 0.0; // distance to panel 2 along the estimated direction
        double d3 = 0.0;
        double loss2 = 0.0; // predicted |alpha| at panel 2
        double loss3 = 0.0;
        bool feasible = true;
        ErrorKind failure = ErrorKind::InfeasibleCandidate; // meaningful when !feasible
    };

    /// Closed-form intersection of the panel-2 and panel-3 directions. Throws
    /// degenerate-geometry for parallel directions and infeasible-candidate for
    /// non-positive distances or a negative x radicand.
    CandidateLocation triangulate(const EffectiveAngles &pair2, const EffectiveAngles &pair3, const Scene &scene);

    /// Non-throwing variant: failures come back flagged with infinite losses.
    CandidateLocation try_triangulate(const EffectiveAngles &pair2, const EffectiveAngles &pair3, const Scene &scene);

    struct LocationEstimate
    {
        std::vector<Position> positions;
        std::vector<int> matched; // panel-3 pair index chosen for each panel-2 pair
        int block = 1;
    };

    /// Greedy loss-consistency matching. candidates[l][s] pairs panel-2 entry l
    /// with panel-3 entry s.
    LocationEstimate match_aoas(const std::vector<std::vector<CandidateLocation>> &candidates,
                                const PathLossEstimates &losses2, const PathLossEstimates &losses3, int block = 1);

    struct SensingOutput
    {
        LocationEstimate estimate;
        AoaPairSet pairs2, pairs3;
        PathLossEstimates losses2, losses3;
        std::vector<std::vector<CandidateLocation>> candidates;
    };

    /// Full pipeline from the two panels' snapshot blocks.
    SensingOutput sense_locations(const SnapshotBlock &snap2, const SnapshotBlock &snap3, const Scene &scene, int users,
                                  const DoaSettings &settings, double rho, double sigma2, int block = 1);

    /// RMSE with estimates taken in their own label order.
    double rmse_raw(const std::vector<Position> &estimate, const std::vector<Position> &truth);

    /// perm with estimate[perm[k]] assigned to truth[k], minimizing the total
    /// squared error (brute force over permutations; first minimum wins).
    std::vector<int> best_assignment(const std::vector<Position> &estimate, const std::vector<Position> &truth);

    /// Estimates reordered by best_assignment.
    std::vector<Position> align_to_truth(const std::vector<Position> &estimate, const std::vector<Position> &truth);

    /// RMSE after the minimum-total-squared-error assignment (brute force).
    double rmse_assigned(const std::vector<Position> &estimate, const std::vector<Position> &truth);

} // namespace irsisac

#endif
