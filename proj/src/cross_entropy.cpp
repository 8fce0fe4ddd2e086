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

#include "irsisac/cross_entropy.hpp"

#include <algorithm>
#include <numeric>

namespace irsisac
{
    void CeParams::validate() const
    {
        if (samples < 1 || elites < 1 || elites > samples)
            throw Error(ErrorKind::InvalidConfiguration, "CE needs 1 <= elites <= samples");
        if (!(kappa > 0.0))
            throw Error(ErrorKind::InvalidConfiguration, "CE stop threshold must be positive");
        if (max_iterations < 1)
            throw Error(ErrorKind::InvalidConfiguration, "CE needs at least one iteration");
        if (bits < 1 || bits > 16)
            throw Error(ErrorKind::InvalidConfiguration, "CE bit depth must be in 1..16");
    }

    CeState CeState::uniform(int bits, int elements)
    {
        const int levels = 1 << bits;
        CeState s;
        s.p = RMat::Constant(levels, elements, 1.0 / levels);
        return s;
    }

    namespace
    {
        constexpr std::size_t kScanLimit = 16;

        // Vose alias table over entries [b, b+n) of `mass`; fills accept and
        // alias (local indices) in the same range.
        void build_alias(const std::vector<double> &mass, std::size_t b, std::size_t n, std::vector<double> &accept,
                         std::vector<int> &alias)
        {
            double total = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                total += mass[b + j];
            std::vector<double> scaled(n);
            std::vector<int> small, large;
            for (std::size_t j = 0; j < n; ++j)
            {
                scaled[j] = mass[b + j] * static_cast<double>(n) / total;
                (scaled[j] < 1.0 ? small : large).push_back(static_cast<int>(j));
            }
            while (!small.empty() && !large.empty())
            {
                const int lo = small.back();
                small.pop_back();
                const int hi = large.back();
                accept[b + lo] = scaled[lo];
                alias[b + lo] = hi;
                scaled[hi] -= 1.0 - scaled[lo];
                if (scaled[hi] < 1.0)
                {
                    large.pop_back();
                    small.push_back(hi);
                }
            }
            for (int j : large)
                accept[b + j] = 1.0, alias[b + j] = j;
            for (int j : small) // leftovers from rounding
                accept[b + j] = 1.0, alias[b + j] = j;
        }
    } // namespace

    IndexMatrix sample_candidates(const CeState &state, int count, Rng &rng)
    {
        const Eigen::Index levels = state.p.rows();
        const Eigen::Index elements = state.p.cols();
        // per column: the levels with mass and either a cumulative table
        // (few levels, last entry pinned to 1) or an alias table
        std::vector<int> level;
        std::vector<double> mass;
        std::vector<std::size_t> start(elements + 1, 0);
        for (Eigen::Index m = 0; m < elements; ++m)
        {
            for (Eigen::Index l = 0; l < levels; ++l)
                if (state.p(l, m) > 0.0)
                {
                    level.push_back(static_cast<int>(l));
                    mass.push_back(state.p(l, m));
                }
            if (level.size() == start[m])
                throw Error(ErrorKind::InvalidArgument, "probability column without mass");
            start[m + 1] = level.size();
        }
        std::vector<double> table(mass.size());
        std::vector<int> alias(mass.size());
        for (Eigen::Index m = 0; m < elements; ++m)
        {
            const std::size_t b = start[m];
            const std::size_t n = start[m + 1] - b;
            if (n > kScanLimit)
                build_alias(mass, b, n, table, alias);
            else
            {
                double acc = 0.0;
                for (std::size_t j = 0; j < n; ++j)
                    table[b + j] = (acc += mass[b + j]);
                table[b + n - 1] = 1.0;
            }
        }

        // element-major draws keep one column's table hot in cache
        Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic> draws(count, elements);
        for (Eigen::Index m = 0; m < elements; ++m)
        {
            const std::size_t b = start[m];
            const std::size_t n = start[m + 1] - b;
            const double *col = table.data() + b;
            for (int s = 0; s < count; ++s)
            {
                if (n == 1)
                {
                    draws(s, m) = level[b];
                    continue;
                }
                const double r = static_cast<double>(rng() >> 11) * 0x1.0p-53; // [0, 1)
                std::size_t pick = 0;
                if (n <= kScanLimit)
                    for (std::size_t j = 0; j + 1 < n; ++j)
                        pick += col[j] <= r; // branch-free count
                else
                {
                    const double u = r * static_cast<double>(n);
                    const std::size_t j = std::min(static_cast<std::size_t>(u), n - 1);
                    pick = (u - static_cast<double>(j)) < col[j] ? j : static_cast<std::size_t>(alias[b + j]);
                }
                draws(s, m) = level[b + pick];
            }
        }
        return IndexMatrix(draws);
    }

    std::vector<int> elite_indices(const RVec &scores, int elites)
    {
        std::vector<int> order(scores.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return scores(a) > scores(b); });
        order.resize(std::min<std::size_t>(order.size(), static_cast<std::size_t>(elites)));
        return order;
    }

    void update_state(CeState &state, const IndexMatrix &candidates, const std::vector<int> &elite)
    {
        if (elite.empty())
            throw Error(ErrorKind::InvalidArgument, "empty elite set");
        state.p.setZero();
        const double w = 1.0 / static_cast<double>(elite.size());
        for (int s : elite)
            for (Eigen::Index m = 0; m < candidates.cols(); ++m)
                state.p(candidates(s, m), m) += w;
        // exact counts keep columns on the simplex despite rounding
        for (Eigen::Index m = 0; m < state.p.cols(); ++m)
            for (Eigen::Index l = 0; l < state.p.rows(); ++l)
                state.p(l, m) = std::round(state.p(l, m) * elite.size()) / static_cast<double>(elite.size());
        ++state.iteration;
    }

    CeResult cross_entropy_optimize(const kernels::ScoringProblem &problem, const CeParams &params, Rng &rng)
    {
        params.validate();
        problem.validate();
        if (static_cast<int>(problem.phasor.size()) != (1 << params.bits))
            throw Error(ErrorKind::InvalidConfiguration, "scoring alphabet does not match the CE bit depth");

        CeState state = CeState::uniform(params.bits, problem.elements());
        CeResult result;
        result.best.bits = params.bits;
        result.best_score = -1.0;
        RVec scores;
        for (int it = 0; it < params.max_iterations; ++it)
        {
            const IndexMatrix cands = sample_candidates(state, params.samples, rng);
            kernels::score_candidates(problem, cands, scores);
            Eigen::Index arg = 0;
            const double top = scores.maxCoeff(&arg);
            if (top > result.best_score)
            {
                result.best_score = top;
                result.best.indices.assign(cands.row(arg).data(), cands.row(arg).data() + cands.cols());
            }
            const double spread = top - scores.minCoeff();
            result.best_history.push_back(result.best_score);
            result.spread_history.push_back(spread);
            result.iterations = it + 1;
            if (spread < params.kappa)
            {
                result.converged = true;
                break;
            }
            update_state(state, cands, elite_indices(scores, params.elites));
        }
        kernels::score_candidate(problem, result.best.indices.data(), &result.combiner);
        return result;
    }

} // namespace irsisac
