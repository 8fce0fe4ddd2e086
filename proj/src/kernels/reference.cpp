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

#include <limits>

namespace irsisac::kernels
{
    namespace reference
    {
        CMat fbss_covariance(const CMat &samples, const std::vector<std::vector<int>> &maps)
        {
            if (samples.cols() < 1)
                throw Error(ErrorKind::InsufficientData, "covariance needs at least one snapshot");
            if (maps.empty() || maps.front().empty())
                throw Error(ErrorKind::InvalidConfiguration, "no sub-arrays to smooth over");
            const Eigen::Index len = static_cast<Eigen::Index>(maps.front().size());
            const Eigen::Index slots = samples.cols();
            CMat exchange = CMat::Zero(len, len);
            for (Eigen::Index i = 0; i < len; ++i)
                exchange(i, len - 1 - i) = 1.0;

            CMat r = CMat::Zero(len, len);
            CVec x(len);
            for (Eigen::Index t = 0; t < slots; ++t)
                for (const auto &map : maps)
                {
                    for (Eigen::Index j = 0; j < len; ++j)
                        x(j) = samples(map.at(j), t);
                    r += x * x.adjoint();
                    r += exchange * x.conjugate() * x.transpose() * exchange;
                }
            return r / (2.0 * static_cast<double>(slots) * static_cast<double>(maps.size()));
        }

        void score_candidates(const ScoringProblem &problem, const IndexMatrix &candidates, RVec &scores)
        {
            problem.validate();
            if (candidates.cols() != problem.elements())
                throw Error(ErrorKind::InvalidDimension, "candidate width differs from the element count");
            scores.resize(candidates.rows());
            for (Eigen::Index s = 0; s < candidates.rows(); ++s)
                scores(s) = score_candidate(problem, candidates.row(s).data());
        }

        OffsetSearchResult exhaustive_offset_search(const OffsetProblem &problem)
        {
            problem.validate();
            const auto table = offset_power_table(problem);
            const int users = problem.users();
            const int levels = problem.levels();
            const std::uint64_t total = offset_candidate_count(users, levels);
            double best = std::numeric_limits<double>::infinity();
            std::uint64_t best_idx = 0;
            for (std::uint64_t c = 0; c < total; ++c)
            {
                const double f = offset_objective(problem, table, decode_offsets(c, users, levels));
                if (f < best)
                {
                    best = f;
                    best_idx = c;
                }
            }
            return {decode_offsets(best_idx, users, levels), best, total};
        }
    } // namespace reference

} // namespace irsisac::kernels
