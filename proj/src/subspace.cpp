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

#include "irsisac/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "irsisac/kernels.hpp"

namespace irsisac
{
    MicroSurfaceSet enumerate_micro_surfaces(const PanelGeometry &panel, int q_y, int q_z, int n_micro)
    {
        panel.validate();
        if (q_y < 1 || q_z < 1 || q_y > panel.cols_y || q_z > panel.rows_z)
            throw Error(ErrorKind::InvalidConfiguration,
                        "micro-surface " + std::to_string(q_y) + "x" + std::to_string(q_z) + " does not fit the panel");
        const int shifts_y = panel.cols_y - q_y + 1;
        const int shifts_z = panel.rows_z - q_z + 1;
        if (n_micro < 1 || n_micro > shifts_y * shifts_z)
            throw Error(ErrorKind::InvalidConfiguration,
                        "cannot build " + std::to_string(n_micro) + " micro-surfaces by unit shifts");

        MicroSurfaceSet ms;
        ms.panel = panel;
        ms.q_y = q_y;
        ms.q_z = q_z;
        for (int n = 0; n < n_micro; ++n)
        {
            const int sy = n % shifts_y;
            const int sz = n / shifts_y;
            std::vector<int> map(q_y * q_z);
            for (int iy = 0; iy < q_y; ++iy)
                for (int iz = 0; iz < q_z; ++iz)
                    map[iy * q_z + iz] = panel.flat_index(sy + iy, sz + iz);
            ms.maps.push_back(std::move(map));
            ms.shifts.emplace_back(sy, sz);
        }
        return ms;
    }

    CovarianceEstimate decompose_covariance(const CMat &matrix, int model_order)
    {
        if (model_order < 1 || model_order > matrix.rows())
            throw Error(ErrorKind::InvalidConfiguration, "model order outside 1..L");
        Eigen::SelfAdjointEigenSolver<CMat> es(matrix);
        if (es.info() != Eigen::Success)
            throw Error(ErrorKind::DegenerateSubspace, "covariance eigendecomposition failed");
        CovarianceEstimate out;
        out.matrix = matrix;
        out.model_order = model_order;
        out.eigenvalues = es.eigenvalues().reverse();
        out.eigenvectors = es.eigenvectors().rowwise().reverse();
        return out;
    }

    CovarianceEstimate fbss_covariance(const SnapshotBlock &snapshots, const MicroSurfaceSet &ms, int model_order)
    {
        if (snapshots.slots() < 1)
            throw Error(ErrorKind::InsufficientData, "snapshot block is empty");
        if (snapshots.elements() != ms.panel.total())
            throw Error(ErrorKind::InvalidDimension, "snapshot rows do not match the panel");
        return decompose_covariance(kernels::fbss_covariance(snapshots.samples, ms.maps), model_order);
    }

    namespace
    {
        // rows of the micro-surface kept by the first (shift = 0) or second
        // (shift = 1) auxiliary sub-surface
        std::vector<int> auxiliary_rows(const MicroSurfaceSet &ms, Axis axis, int shift)
        {
            std::vector<int> rows;
            for (int iy = 0; iy < ms.q_y; ++iy)
                for (int iz = 0; iz < ms.q_z; ++iz)
                {
                    const int pos = (axis == Axis::Y) ? iy : iz;
                    const int len = (axis == Axis::Y) ? ms.q_y : ms.q_z;
                    if (pos - shift >= 0 && pos - shift < len - 1)
                        rows.push_back(iy * ms.q_z + iz);
                }
            return rows;
        }
    } // namespace

    std::vector<double> esprit_axis(const CovarianceEstimate &cov, const MicroSurfaceSet &ms, Axis axis)
    {
        const int d = cov.model_order;
        const int aux = (axis == Axis::Y) ? (ms.q_y - 1) * ms.q_z : ms.q_y * (ms.q_z - 1);
        if (aux < d + 1)
            throw Error(ErrorKind::InvalidConfiguration,
                        "auxiliary sub-surface has " + std::to_string(aux) + " elements, needs at least " +
                            std::to_string(d + 1));
        if (d > ms.size() - 1)
            throw Error(ErrorKind::InvalidConfiguration, "model order must leave a noise subspace");

        const CMat us = cov.signal_subspace();
        const auto r1 = auxiliary_rows(ms, axis, 0);
        const auto r2 = auxiliary_rows(ms, axis, 1);
        CMat e(aux, 2 * d);
        for (int j = 0; j < aux; ++j)
        {
            e.row(j).head(d) = us.row(r1[j]);
            e.row(j).tail(d) = us.row(r2[j]);
        }
        const CMat c = e.adjoint() * e;
        Eigen::SelfAdjointEigenSolver<CMat> es(c);
        if (es.info() != Eigen::Success)
            throw Error(ErrorKind::DegenerateSubspace, "ESPRIT eigendecomposition failed");
        const CMat v = es.eigenvectors().rowwise().reverse(); // descending
        const CMat v12 = v.topRightCorner(d, d);
        const CMat v22 = v.bottomRightCorner(d, d);

        Eigen::FullPivLU<CMat> lu(v22);
        if (!lu.isInvertible())
            throw Error(ErrorKind::DegenerateSubspace, "V22 block is singular");
        const CMat phi = -v12 * lu.inverse();
        Eigen::ComplexEigenSolver<CMat> ces(phi, false);
        if (ces.info() != Eigen::Success)
            throw Error(ErrorKind::DegenerateSubspace, "rotation operator eigendecomposition failed");
        std::vector<double> angles(d);
        for (int l = 0; l < d; ++l)
            angles[l] = wrap_angle(std::arg(ces.eigenvalues()(l)));
        return angles;
    }

    double music_cost(const CovarianceEstimate &cov, const MicroSurfaceSet &ms, double u, double v)
    {
        const CVec b = steering_ura(u, v, ms.micro_geometry());
        return (cov.noise_subspace().adjoint() * b).squaredNorm();
    }

    std::vector<EffectiveAngles> music_pair(const std::vector<double> &cands_u, const std::vector<double> &cands_v,
                                            const CovarianceEstimate &cov, const MicroSurfaceSet &ms)
    {
        if (cands_u.size() != cands_v.size() || cands_u.empty())
            throw Error(ErrorKind::InvalidDimension, "axis candidate lists must be nonempty and equally long");
        if (cov.eigenvectors.cols() - cov.model_order < 1)
            throw Error(ErrorKind::InvalidConfiguration, "empty noise subspace");
        const int n = static_cast<int>(cands_u.size());
        std::vector<double> cost(n * n);
        for (int l = 0; l < n; ++l)
            for (int s = 0; s < n; ++s)
                cost[l * n + s] = music_cost(cov, ms, cands_u[l], cands_v[s]);

        std::vector<int> order(n * n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return cost[a] < cost[b]; });
        std::vector<bool> used_u(n, false), used_v(n, false);
        std::vector<EffectiveAngles> pairs;
        for (int idx : order)
        {
            const int l = idx / n;
            const int s = idx % n;
            if (used_u[l] || used_v[s])
                continue;
            used_u[l] = used_v[s] = true;
            pairs.push_back({cands_u[l], cands_v[s]});
            if (static_cast<int>(pairs.size()) == n)
                break;
        }
        return pairs;
    }

    AoaPairSet exclude_inter_irs(const std::vector<EffectiveAngles> &pairs, int panel, const Scene &scene, int block)
    {
        check_sensing_panel(panel);
        if (pairs.empty())
            throw Error(ErrorKind::InvalidDimension, "no pairs to exclude from");
        const EffectiveAngles known = inter_irs_arrival(scene, panel);
        std::size_t drop = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < pairs.size(); ++j)
        {
            const double d = std::hypot(pairs[j].u - known.u, pairs[j].v - known.v);
            if (d < best)
            {
                best = d;
                drop = j;
            }
        }
        AoaPairSet out;
        out.panel = panel;
        out.block = block;
        for (std::size_t j = 0; j < pairs.size(); ++j)
            if (j != drop)
                out.pairs.push_back(pairs[j]);
        return out;
    }

    MicroSurfaceSet micro_surfaces_for(const PanelGeometry &panel, const DoaSettings &settings)
    {
        const int q_y = settings.q_y > 0 ? settings.q_y : std::max(1, panel.cols_y - 1);
        const int q_z = settings.q_z > 0 ? settings.q_z : std::max(1, panel.rows_z - 1);
        return enumerate_micro_surfaces(panel, q_y, q_z, settings.n_micro);
    }

    AoaPairSet estimate_aoa_pairs(const SnapshotBlock &snapshots, const Scene &scene, int users,
                                  const DoaSettings &settings, int block)
    {
        const MicroSurfaceSet ms = micro_surfaces_for(scene.geometry_of(snapshots.panel), settings);
        const CovarianceEstimate cov = fbss_covariance(snapshots, ms, users + 1);
        const auto cu = esprit_axis(cov, ms, Axis::Y);
        const auto cv = esprit_axis(cov, ms, Axis::Z);
        return exclude_inter_irs(music_pair(cu, cv, cov, ms), snapshots.panel, scene, block);
    }

} // namespace irsisac
