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

#ifndef IRSISAC_KERNELS_HPP
#define IRSISAC_KERNELS_HPP

#include <cstdint>
#include <vector>

#include "irsisac/common.hpp"

// Hot loops of the simulator. Every kernel has an OpenMP version (the default
// namespace) and a plain serial version in `reference` used as a test oracle.
// Parallel loops only split independent work items and every reduction runs
// afterwards in a fixed order, so results never depend on the thread count.
// Scoring and offset search match the reference bitwise; the covariance
// kernel matches it to rounding (different summation order).
namespace irsisac::kernels
{
    // ---- forward/backward smoothed covariance -------------------------------

    /// Smoothed covariance of `samples` (elements x slots) over the sub-arrays
    /// given by `maps` (each a list of parent element indices).
    CMat fbss_covariance(const CMat &samples, const std::vector<std::vector<int>> &maps);

    // ---- cross-entropy candidate scoring ------------------------------------

    enum class CombinerMode
    {
        Fixed,      // use `combiner` as given
        ZeroForcing // recompute ZF for every candidate
    };

    // Sum-rate scoring of phase candidates for rank-one reflecting links.
    // The effective channel of user k is
    //   H_eq(:, k) = sum_m steering(:, group[m]) * coef(m, k) * e^{j phase(m)}
    // which is H_I2B * Theta * h_k with H_I2B,i = alpha_i a_i b_i^H folded into
    // `coef` (coef(m, k) = alpha_i conj(b_i[m]) h_k[m]).
    struct ScoringProblem
    {
        CMat steering;            // N x P
        std::vector<int> group;   // length M, entries in 0..P-1
        CMat coef;                // M x K
        std::vector<cplx> phasor; // e^{j 2 pi l / 2^b}, l = 0..2^b-1
        CombinerMode mode = CombinerMode::Fixed;
        CMat combiner;            // N x K, used in Fixed mode
        double rho = 1.0;
        double sigma2 = 1.0;
        double zf_max_condition = 1e12;

        int elements() const { return static_cast<int>(coef.rows()); }
        int users() const { return static_cast<int>(coef.cols()); }
        int antennas() const { return static_cast<int>(steering.rows()); }
        void validate() const;
    };

    /// ZF combiner (H^H)^+ with unit-norm columns via SVD. Returns false and
    /// leaves `w` untouched when H is rank deficient or its condition number
    /// exceeds `max_condition`; `condition` always receives the estimate.
    bool zero_forcing(const CMat &h, double max_condition, CMat &w, double &condition);

    /// Effective channel (N x K) of one candidate.
    CMat effective_channel(const ScoringProblem &problem, const int *indices);

    /// Score of one candidate. In ZF mode a rank-deficient effective channel
    /// scores 0. When `combiner_out` is given it receives the combiner used.
    double score_candidate(const ScoringProblem &problem, const int *indices, CMat *combiner_out = nullptr);

    /// Scores every row of `candidates` into `scores`.
    void score_candidates(const ScoringProblem &problem, const IndexMatrix &candidates, RVec &scores);

    // ---- phase-offset grid search -------------------------------------------

    // Objective f(D) = sum_t | rho sum_k |z1 + e^{j d2k} z2 + e^{j d3k} z3|^2 + sigma2 - P_t |
    // where z_{t,k,i} = w_k^H H_I2B,i Theta_i(t) h_abs,i,k are precomputed.
    struct OffsetProblem
    {
        // terms[k](t, i) for panel i = 0..2, slot t = 0..C-1
        std::vector<CMat> terms;
        RVec measured; // P_t
        std::vector<cplx> phasor;
        double rho = 1.0;
        double sigma2 = 1.0;

        int users() const { return static_cast<int>(terms.size()); }
        int slots() const { return static_cast<int>(measured.size()); }
        int levels() const { return static_cast<int>(phasor.size()); }
        void validate() const;
    };

    // Per-user table of rho*|...|^2 for every (d2, d3) pair: [k](pair, t),
    // pair = d2 * levels + d3.
    std::vector<RMat> offset_power_table(const OffsetProblem &problem);

    // Candidate encoding: digits d2_1..d2_K, d3_1..d3_K in base `levels`, the
    // first digit most significant.
    std::vector<int> decode_offsets(std::uint64_t candidate, int users, int levels);

    // |grid|^(2K); throws when it overflows 64 bits.
    std::uint64_t offset_candidate_count(int users, int levels);

    double offset_objective(const OffsetProblem &problem, const std::vector<RMat> &table,
                            const std::vector<int> &digits);

    struct OffsetSearchResult
    {
        std::vector<int> digits; // d2_1..d2_K, d3_1..d3_K
        double objective = 0.0;
        std::uint64_t evaluated = 0;
    };

    /// Exhaustive minimization; ties resolve to the lowest candidate index.
    OffsetSearchResult exhaustive_offset_search(const OffsetProblem &problem);

    namespace reference
    {
        CMat fbss_covariance(const CMat &samples, const std::vector<std::vector<int>> &maps);
        void score_candidates(const ScoringProblem &problem, const IndexMatrix &candidates, RVec &scores);
        OffsetSearchResult exhaustive_offset_search(const OffsetProblem &problem);
    } // namespace reference

} // namespace irsisac::kernels

#endif
