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

#ifndef IRSISAC_SUBSPACE_HPP
#define IRSISAC_SUBSPACE_HPP

#include <vector>

#include "irsisac/common.hpp"
#include "irsisac/geometry.hpp"
#include "irsisac/signal.hpp"

namespace irsisac
{
    // Shifted Q_y x Q_z sub-grids of a panel. maps[m][j] is the parent flat
    // index of element j of micro-surface m; j follows the same y-major
    // flattening as the parent (j = iy * q_z + iz).
    struct MicroSurfaceSet
    {
        PanelGeometry panel;
        int q_y = 1;
        int q_z = 1;
        std::vector<std::vector<int>> maps;
        std::vector<std::pair<int, int>> shifts; // (column shift, row shift)

        int count() const { return static_cast<int>(maps.size()); }
        int size() const { return q_y * q_z; }
        PanelGeometry micro_geometry() const { return {q_z, q_y}; }
    };

    /// Raster enumeration anchored at element (0, 0): column (y) shifts first,
    /// then one row (z) down and the columns again, until n_micro are built.
    MicroSurfaceSet enumerate_micro_surfaces(const PanelGeometry &panel, int q_y, int q_z, int n_micro);

    struct CovarianceEstimate
    {
        CMat matrix;      // L x L Hermitian
        RVec eigenvalues; // descending
        CMat eigenvectors;
        int model_order = 1; // K + 1

        CMat signal_subspace() const { return eigenvectors.leftCols(model_order); }
        CMat noise_subspace() const { return eigenvectors.rightCols(eigenvectors.cols() - model_order); }
    };

    /// Descending-order eigendecomposition of a Hermitian matrix.
    CovarianceEstimate decompose_covariance(const CMat &matrix, int model_order);

    /// Forward/backward smoothed covariance over the micro-surfaces.
    CovarianceEstimate fbss_covariance(const SnapshotBlock &snapshots, const MicroSurfaceSet &ms, int model_order);

    enum class Axis
    {
        Y,
        Z
    };

    /// TLS-ESPRIT effective angles along one axis (model_order values, wrapped).
    std::vector<double> esprit_axis(const CovarianceEstimate &cov, const MicroSurfaceSet &ms, Axis axis);

    /// MUSIC cost ||b^H U_N||^2 of one micro-surface response.
    double music_cost(const CovarianceEstimate &cov, const MicroSurfaceSet &ms, double u, double v);

    /// Greedy one-to-one pairing of axis candidates by ascending MUSIC cost.
    std::vector<EffectiveAngles> music_pair(const std::vector<double> &cands_u, const std::vector<double> &cands_v,
                                            const CovarianceEstimate &cov, const MicroSurfaceSet &ms);

    struct AoaPairSet
    {
        std::vector<EffectiveAngles> pairs;
        int panel = 2;
        int block = 1;
        std::vector<double> path_loss; // filled by localization, optional

        int size() const { return static_cast<int>(pairs.size()); }
    };

    /// Drops the pair closest (Euclidean in (u, v)) to the known panel-1 link.
    AoaPairSet exclude_inter_irs(const std::vector<EffectiveAngles> &pairs, int panel, const Scene &scene, int block = 1);

    struct DoaSettings
    {
        int q_y = 0; // 0 selects the default (panel size - 1)
        int q_z = 0;
        int n_micro = 4;
    };

    MicroSurfaceSet micro_surfaces_for(const PanelGeometry &panel, const DoaSettings &settings);

    /// FBSS + ESPRIT on both axes + MUSIC pairing + exclusion for one panel.
    AoaPairSet estimate_aoa_pairs(const SnapshotBlock &snapshots, const Scene &scene, int users,
                                  const DoaSettings &settings, int block = 1);

} // namespace irsisac

#endif
