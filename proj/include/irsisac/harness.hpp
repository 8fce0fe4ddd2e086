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

#ifndef IRSISAC_HARNESS_HPP
#define IRSISAC_HARNESS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "irsisac/localization.hpp"
#include "irsisac/scenario.hpp"

namespace irsisac
{
    // Independent random streams of one trial, all derived from the trial seed.
    enum class Stream : std::uint64_t
    {
        Placement = 1,
        Channels,
        Theta1,
        Symbols1,
        Noise2,
        Noise3,
        CeIsac,
        Symbols2,
        Noise2b,
        Noise3b,
        PowerSlots,
        CePc,
        Baseline,
        Genie
    };

    Rng stream_rng(std::uint64_t trial_seed, Stream stream);

    struct SensingTrial
    {
        bool ok = false;
        std::string failure; // error kind name when !ok
        std::string message;
        std::vector<Position> truth;
        std::vector<Position> estimate;
        double rmse = 0.0;     // after best assignment
        double rmse_raw = 0.0; // in label order
    };

    /// One sensing-only trial: random panel-1 phases, tau1 slots at panels 2/3.
    SensingTrial run_sensing_trial(const Scenario &scenario, std::uint64_t trial_seed);

    struct TrialOptions
    {
        bool baselines = true; // random-phase and perfect-knowledge references
    };

    struct TrialRecord
    {
        std::uint64_t seed = 0;
        bool ok = false;
        std::string failure;
        std::string message;
        std::vector<Position> truth;
        std::vector<Position> estimate1, estimate2; // block 1 and block 2 positions
        double rmse1 = 0.0, rmse2 = 0.0;

        // sum rates [bit/s/Hz]
        double rate_block1 = 0.0, rate_block2 = 0.0;
        double rate_isac = 0.0, rate_pc = 0.0, rate_total = 0.0;
        double rate_isac_random = 0.0, rate_pc_random = 0.0, rate_total_random = 0.0;
        double rate_isac_genie = 0.0, rate_pc_genie = 0.0, rate_total_genie = 0.0;

        int slots = 0; // tau1 + tau2 + C + (T2 - C)
        double seconds = 0.0;
        bool offsets_exhaustive = true;
        int ce_isac_iterations = 0, ce_pc_iterations = 0;
        bool ce_isac_converged = false, ce_pc_converged = false;
    };

    /// Full protocol: two ISAC blocks, C power-recording slots and the PC
    /// design, plus the random-phase and perfect-knowledge baselines. Pipeline
    /// errors end up in the record instead of propagating.
    TrialRecord run_trial(const Scenario &scenario, std::uint64_t trial_seed, const TrialOptions &options = {});

    /// Scalar metrics of a trial by name; NaN marks an unavailable value.
    std::map<std::string, double> trial_metrics(const TrialRecord &record);
    std::map<std::string, double> trial_metrics(const SensingTrial &record);

    struct SummaryRow
    {
        double sweep_value = 0.0;
        std::string metric;
        double mean = 0.0, p10 = 0.0, p50 = 0.0, p90 = 0.0;
        int trials = 0; // finite samples behind the statistics
        std::uint64_t seed = 0;
    };

    /// Linear-interpolated percentile of a non-empty sample, q in [0, 1].
    double percentile(std::vector<double> values, double q);

    struct SweepResult
    {
        std::vector<SummaryRow> rows;
        std::vector<std::string> failures; // "value,trial,kind,message"
    };

    /// Runs `spec.trials` trials at every sweep value on `workers` threads.
    /// Trial t uses derive_seed(seed, t) at every sweep point so the points
    /// share placements and channel phases. Output is worker-count invariant.
    SweepResult run_sweep(const Scenario &base, const SweepSpec &spec, std::uint64_t seed, int workers);

    std::string summary_csv(const std::vector<SummaryRow> &rows);

} // namespace irsisac

#endif
