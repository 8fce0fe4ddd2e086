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

#include "irsisac/kernels.hpp"

#include <omp.h>

namespace irsisac::kernels
{
    namespace
    {
        void check_maps(const CMat &samples, const std::vector<std::vector<int>> &maps)
        {
            if (samples.cols() < 1)
                throw Error(ErrorKind::InsufficientData, "covariance needs at least one snapshot");
            if (maps.empty() || maps.front().empty())
                throw Error(ErrorKind::InvalidConfiguration, "no sub-arrays to smooth over");
            for (const auto &m : maps)
            {
                if (m.size() != maps.front().size())
                    throw Error(ErrorKind::InvalidConfiguration, "sub-arrays differ in size");
                for (int idx : m)
                    if (idx < 0 || idx >= samples.rows())
                        throw Error(ErrorKind::InvalidConfiguration, "sub-array index outside the panel");
            }
        }
    } // namespace

    CMat fbss_covariance(const CMat &samples, const std::vector<std::vector<int>> &maps)
    {
        check_maps(samples, maps);
        const int n_sub = static_cast<int>(maps.size());
        const Eigen::Index len = static_cast<Eigen::Index>(maps.front().size());
        const Eigen::Index slots = samples.cols();

        // one forward outer-product sum per sub-array, summed afterwards in order
        std::vector<CMat> partial(n_sub);
#pragma omp parallel for schedule(static)
        for (int m = 0; m < n_sub; ++m)
        {
            CMat x(len, slots);
            for (Eigen::Index j = 0; j < len; ++j)
                x.row(j) = samples.row(maps[m][j]);
            partial[m] = x * x.adjoint();
        }

        CMat forward = CMat::Zero(len, len);
        for (const auto &p : partial)
            forward += p;
        forward /= static_cast<double>(slots) * n_sub;

        // backward term J conj(F) J, entry (i, j) = conj(F(L-1-i, L-1-j))
        CMat r(len, len);
        for (Eigen::Index j = 0; j < len; ++j)
            for (Eigen::Index i = 0; i < len; ++i)
                r(i, j) = 0.5 * (forward(i, j) + std::conj(forward(len - 1 - i, len - 1 - j)));
        return r;
    }

} // namespace irsisac::kernels
