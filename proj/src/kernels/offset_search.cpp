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

#include <cmath>
#include <limits>

#include <omp.h>

namespace irsisac::kernels
{
    void OffsetProblem::validate() const
    {
        if (terms.empty())
            throw Error(ErrorKind::InvalidDimension, "offset problem needs at least one user");
        if (measured.size() < 1)
            throw Error(ErrorKind::InsufficientData, "no recorded power measurements");
        if (phasor.empty())
            throw Error(ErrorKind::InvalidArgument, "empty offset grid");
        for (const auto &t : terms)
            if (t.rows() != measured.size() || t.cols() != 3)
                throw Error(ErrorKind::InvalidDimension, "offset terms must be C x 3 per user");
    }

    std::vector<RMat> offset_power_table(const OffsetProblem &problem)
    {
        const int levels = problem.levels();
        const int slots = problem.slots();
        std::vector<RMat> table(problem.users());
        for (int k = 0; k < problem.users(); ++k)
        {
            const CMat &z = problem.terms[k];
            RMat tab(levels * levels, slots);
            for (int d2 = 0; d2 < levels; ++d2)
                for (int d3 = 0; d3 < levels; ++d3)
                    for (int t = 0; t < slots; ++t)
                        tab(d2 * levels + d3, t) =
                            problem.rho * std::norm(z(t, 0) + problem.phasor[d2] * z(t, 1) + problem.phasor[d3] * z(t, 2));
            table[k] = std::move(tab);
        }
        return table;
    }

    std::vector<int> decode_offsets(std::uint64_t candidate, int users, int levels)
    {
        std::vector<int> digits(2 * users);
        for (int j = 2 * users - 1; j >= 0; --j)
        {
            digits[j] = static_cast<int>(candidate % static_cast<std::uint64_t>(levels));
            candidate /= static_cast<std::uint64_t>(levels);
        }
        return digits;
    }

    double offset_objective(const OffsetProblem &problem, const std::vector<RMat> &table,
                            const std::vector<int> &digits)
    {
        const int users = problem.users();
        const int levels = problem.levels();
        double f = 0.0;
        for (int t = 0; t < problem.slots(); ++t)
        {
            double p = problem.sigma2;
            for (int k = 0; k < users; ++k)
                p += table[k](digits[k] * levels + digits[users + k], t);
            f += std::abs(p - problem.measured(t));
        }
        return f;
    }

    std::uint64_t offset_candidate_count(int users, int levels)
    {
        std::uint64_t total = 1;
        for (int j = 0; j < 2 * users; ++j)
        {
            if (total > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(levels))
                throw Error(ErrorKind::InvalidConfiguration, "offset search space overflows");
            total *= static_cast<std::uint64_t>(levels);
        }
        return total;
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
#pragma omp parallel
        {
            double local = std::numeric_limits<double>::infinity();
            std::uint64_t local_idx = 0;
#pragma omp for schedule(static)
            for (std::int64_t c = 0; c < static_cast<std::int64_t>(total); ++c)
            {
                const double f = offset_objective(problem, table, decode_offsets(c, users, levels));
                if (f < local)
                {
                    local = f;
                    local_idx = static_cast<std::uint64_t>(c);
                }
            }
#pragma omp critical(irsisac_offset_min)
            {
                if (local < best || (local == best && local_idx < best_idx))
                {
                    best = local;
                    best_idx = local_idx;
                }
            }
        }
        return {decode_offsets(best_idx, users, levels), best, total};
    }

} // namespace irsisac::kernels
