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

#ifndef IRSISAC_CROSS_ENTROPY_HPP
#define IRSISAC_CROSS_ENTROPY_HPP

#include <vector>

#include "irsisac/common.hpp"
#include "irsisac/kernels.hpp"
#include "irsisac/signal.hpp"

namespace irsisac
{
    struct CeParams
    {
        int samples = 1500;
        int elites = 300;
        double kappa = 1e-3; // stop when max - min of an iteration's scores < kappa
        int max_iterations = 50;
        int bits = 3;

        void validate() const;
    };

    // Column m is the categorical distribution of element m's phase index.
    struct CeState
    {
        RMat p; // 2^b x M
        int iteration = 0;

        static CeState uniform(int bits, int elements);
    };

    /// Draws `count` candidates, element by element, from the columns of p.
    IndexMatrix sample_candidates(const CeState &state, int count, Rng &rng);

    /// Indices of the `elites` highest scores; ties keep sampling order.
    std::vector<int> elite_indices(const RVec &scores, int elites);

    /// Sets p to the elite empirical frequencies.
    void update_state(CeState &state, const IndexMatrix &candidates, const std::vector<int> &elite);

    struct CeResult
    {
        PhaseShiftConfig best;
        double best_score = 0.0;
        CMat combiner; // combiner of the best candidate
        bool converged = false;
        int iterations = 0;
        std::vector<double> best_history;   // best-so-far after each iteration
        std::vector<double> spread_history; // max - min of each iteration
    };

    /// Generic CE loop over the candidates of a scoring problem.
    CeResult cross_entropy_optimize(const kernels::ScoringProblem &problem, const CeParams &params, Rng &rng);

} // namespace irsisac

#endif
