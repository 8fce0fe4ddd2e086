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

#include "irsisac/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <tuple>

#include <fmt/format.h>
#include <omp.h>

#include "irsisac/beamforming.hpp"
#include "irsisac/signal.hpp"

namespace irsisac
{
    namespace
    {
        constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

        struct Sensed
        {
            SensingOutput output;
            double rmse = 0.0;
            double rmse_raw = 0.0;
        };

        Sensed sense_block(const Scenario &sc, const Scene &scene, const ChannelSet &ch, const PhaseShiftConfig &theta1,
                           int slots, int first_slot, std::uint64_t seed, Stream sym, Stream n2, Stream n3, int block)
        {
            Rng rs = stream_rng(seed, sym);
            Rng r2 = stream_rng(seed, n2);
            Rng r3 = stream_rng(seed, n3);
            const SymbolBlock s = generate_symbols(sc.users, slots, rs);
            const NoiseModel noise{sc.sigma2};
            const SnapshotBlock snap2 = receive_at_sub_irs(ch, theta1, s, sc.rho, noise, 2, r2, first_slot);
            const SnapshotBlock snap3 = receive_at_sub_irs(ch, theta1, s, sc.rho, noise, 3, r3, first_slot);
            Sensed out;
            out.output = sense_locations(snap2, snap3, scene, sc.users, sc.doa, sc.rho, sc.sigma2, block);
            out.rmse = rmse_assigned(out.output.estimate.positions, scene.users);
            out.rmse_raw = rmse_raw(out.output.estimate.positions, scene.users);
            return out;
        }

        CMat stacked_true(const ChannelSet &ch)
        {
            CMat h(ch.stacked_u2i(0).size(), ch.num_users());
            for (int k = 0; k < ch.num_users(); ++k)
                h.col(k) = ch.stacked_u2i(k);
            return h;
        }

        CMat panel_true(const ChannelSet &ch, int panel)
        {
            CMat h(ch.user_to_panel(panel, 0).size(), ch.num_users());
            for (int k = 0; k < ch.num_users(); ++k)
                h.col(k) = ch.user_to_panel(panel, k);
            return h;
        }

        // PC rate of phases `theta` with a ZF combiner on the true channels; a
        // rank-deficient effective channel carries no rate.
        double zf_rate(const ChannelSet &ch, const PhaseShiftConfig &theta, double rho, double sigma2)
        {
            const CMat h = effective_channels(ch, theta, Period::Pc);
            try
            {
                return sum_rate(zf_combiner(h), h, rho, sigma2);
            }
            catch (const Error &e)
            {
                if (e.kind() == ErrorKind::IllConditioned)
                    return 0.0;
                throw;
            }
        }

        double pc_rate(const ChannelSet &ch, const CeResult &ce, double rho, double sigma2)
        {
            if (ce.combiner.size() == 0)
                return 0.0;
            return sum_rate(ch, ce.combiner, ce.best, rho, sigma2, Period::Pc);
        }
    } // namespace

    Rng stream_rng(std::uint64_t trial_seed, Stream stream)
    {
        return Rng(derive_seed(trial_seed, static_cast<std::uint64_t>(stream)));
    }

    SensingTrial run_sensing_trial(const Scenario &sc, std::uint64_t seed)
    {
        SensingTrial rec;
        try
        {
            Rng rp = stream_rng(seed, Stream::Placement);
            const Scene scene = make_scene(sc, place_users(sc, rp));
            rec.truth = scene.users;
            Rng rc = stream_rng(seed, Stream::Channels);
            const ChannelSet ch = build_channels(scene, rc);
            Rng rt = stream_rng(seed, Stream::Theta1);
            const PhaseShiftConfig theta1 = PhaseShiftConfig::random(sc.bits, scene.geometry_of(1).total(), rt);
            const Sensed s = sense_block(sc, scene, ch, theta1, sc.tau1, 0, seed, Stream::Symbols1, Stream::Noise2,
                                         Stream::Noise3, 1);
            rec.estimate = s.output.estimate.positions;
            rec.rmse = s.rmse;
            rec.rmse_raw = s.rmse_raw;
            rec.ok = true;
        }
        catch (const Error &e)
        {
            rec.failure = to_string(e.kind());
            rec.message = e.what();
        }
        return rec;
    }

    TrialRecord run_trial(const Scenario &sc, std::uint64_t seed, const TrialOptions &options)
    {
        const auto started = std::chrono::steady_clock::now();
        TrialRecord rec;
        rec.seed = seed;
        try
        {
            const double rho = sc.rho;
            const double s2 = sc.sigma2;
            Rng rp = stream_rng(seed, Stream::Placement);
            const Scene scene = make_scene(sc, place_users(sc, rp));
            rec.truth = scene.users;
            Rng rc = stream_rng(seed, Stream::Channels);
            const ChannelSet ch = build_channels(scene, rc);
            const int m1 = scene.geometry_of(1).total();
            const int m_all = scene.total_elements();
            const CMat w_mrc = mrc_combiner(scene, sc.users);

            // ISAC block 1: random panel-1 phases, sensing over tau1 slots
            Rng rt = stream_rng(seed, Stream::Theta1);
            const PhaseShiftConfig theta_b1 = PhaseShiftConfig::random(sc.bits, m1, rt);
            const Sensed s1 = sense_block(sc, scene, ch, theta_b1, sc.tau1, 0, seed, Stream::Symbols1, Stream::Noise2,
                                          Stream::Noise3, 1);
            rec.estimate1 = s1.output.estimate.positions;
            rec.rmse1 = s1.rmse;
            rec.rate_block1 = sum_rate(ch, w_mrc, theta_b1, rho, s2, Period::Isac);

            // ISAC block 2: CE design from the block-1 locations, sensing again
            Rng rce = stream_rng(seed, Stream::CeIsac);
            const CMat h1_sensed = sensed_channels(rec.estimate1, 1, scene);
            const CeResult ce1 = ce_optimize_isac(ch, h1_sensed, w_mrc, sc.ce_isac, rho, s2, rce);
            rec.ce_isac_iterations = ce1.iterations;
            rec.ce_isac_converged = ce1.converged;
            const PhaseShiftConfig &theta_b2 = ce1.best;
            rec.rate_block2 = sum_rate(ch, w_mrc, theta_b2, rho, s2, Period::Isac);
            const Sensed s2b = sense_block(sc, scene, ch, theta_b2, sc.tau2(), sc.tau1, seed, Stream::Symbols2,
                                           Stream::Noise2b, Stream::Noise3b, 2);
            rec.estimate2 = s2b.output.estimate.positions;
            rec.rmse2 = s2b.rmse;
            rec.rate_isac = (sc.tau1 * rec.rate_block1 + sc.tau2() * rec.rate_block2) / sc.isac_slots;

            // PC period: power-recording slots, offset estimation, joint design
            Rng rpw = stream_rng(seed, Stream::PowerSlots);
            const auto records = record_powers_pc(ch, theta_b2, w_mrc, sc.power_slots, rho, s2, rpw);
            double recorded_sum = 0.0;
            for (const auto &r : records)
                recorded_sum += sum_rate(ch, w_mrc, r.theta, rho, s2, Period::Pc);
            // stream k of the BS is the sensed user nearest to true user k
            const std::vector<Position> labeled = align_to_truth(rec.estimate2, scene.users);
            const std::array<CMat, kNumPanels> sensed{sensed_channels(labeled, 1, scene),
                                                      sensed_channels(labeled, 2, scene),
                                                      sensed_channels(labeled, 3, scene)};
            const OffsetEstimate off =
                estimate_phase_offsets(records, sensed, ch, w_mrc, sc.bits_delta, rho, s2, sc.offset_budget);
            rec.offsets_exhaustive = off.exhaustive;
            Rng rcp = stream_rng(seed, Stream::CePc);
            const CeResult ce2 = ce_optimize_pc(ch, apply_offsets(sensed, off.delta), sc.ce_pc, rho, s2, rcp);
            rec.ce_pc_iterations = ce2.iterations;
            rec.ce_pc_converged = ce2.converged;
            const int t2 = sc.pc_slots();
            rec.rate_pc = (recorded_sum + (t2 - sc.power_slots) * pc_rate(ch, ce2, rho, s2)) / t2;

            const double t = sc.total_slots;
            auto total = [&](double isac, double pc) { return (sc.isac_slots * isac + t2 * pc) / t; };
            rec.rate_total = total(rec.rate_isac, rec.rate_pc);
            rec.slots = sc.tau1 + sc.tau2() + sc.power_slots + (t2 - sc.power_slots);
            rec.ok = true;
            if (!options.baselines)
            {
                rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
                return rec;
            }

            // random phases, MRC for ISAC and ZF for PC
            Rng rb = stream_rng(seed, Stream::Baseline);
            const PhaseShiftConfig rand1 = PhaseShiftConfig::random(sc.bits, m1, rb);
            const PhaseShiftConfig rand_all = PhaseShiftConfig::random(sc.bits, m_all, rb);
            rec.rate_isac_random = sum_rate(ch, w_mrc, rand1, rho, s2, Period::Isac);
            rec.rate_pc_random = zf_rate(ch, rand_all, rho, s2);
            rec.rate_total_random = total(rec.rate_isac_random, rec.rate_pc_random);

            // perfect channel knowledge with fine phase resolution
            Rng rg = stream_rng(seed, Stream::Genie);
            CeParams gi = sc.ce_isac;
            CeParams gp = sc.ce_pc;
            gi.bits = gp.bits = sc.genie_bits;
            const CeResult g1 = ce_optimize_isac(ch, panel_true(ch, 1), w_mrc, gi, rho, s2, rg);
            const CeResult g2 = ce_optimize_pc(ch, stacked_true(ch), gp, rho, s2, rg);
            rec.rate_isac_genie = sum_rate(ch, w_mrc, g1.best, rho, s2, Period::Isac);
            rec.rate_pc_genie = pc_rate(ch, g2, rho, s2);
            rec.rate_total_genie = total(rec.rate_isac_genie, rec.rate_pc_genie);
        }
        catch (const Error &e)
        {
            rec.ok = false;
            rec.failure = to_string(e.kind());
            rec.message = e.what();
        }
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        return rec;
    }

    std::map<std::string, double> trial_metrics(const TrialRecord &r)
    {
        std::map<std::string, double> m;
        m["failure_rate"] = r.ok ? 0.0 : 1.0;
        const auto v = [&](double x) { return r.ok ? x : kNaN; };
        m["rmse_block1"] = v(r.rmse1);
        m["rmse_block2"] = v(r.rmse2);
        m["rate_block1"] = v(r.rate_block1);
        m["rate_block2"] = v(r.rate_block2);
        m["rate_isac"] = v(r.rate_isac);
        m["rate_pc"] = v(r.rate_pc);
        m["rate_total"] = v(r.rate_total);
        m["rate_isac_random"] = v(r.rate_isac_random);
        m["rate_pc_random"] = v(r.rate_pc_random);
        m["rate_total_random"] = v(r.rate_total_random);
        m["rate_isac_genie"] = v(r.rate_isac_genie);
        m["rate_pc_genie"] = v(r.rate_pc_genie);
        m["rate_total_genie"] = v(r.rate_total_genie);
        return m;
    }

    std::map<std::string, double> trial_metrics(const SensingTrial &r)
    {
        return {{"failure_rate", r.ok ? 0.0 : 1.0},
                {"rmse", r.ok ? r.rmse : kNaN},
                {"rmse_raw", r.ok ? r.rmse_raw : kNaN}};
    }

    double percentile(std::vector<double> values, double q)
    {
        if (values.empty())
            throw Error(ErrorKind::InsufficientData, "percentile of an empty sample");
        std::sort(values.begin(), values.end());
        const double pos = q * (values.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        return values[lo] + (pos - lo) * (values[hi] - values[lo]);
    }

    SweepResult run_sweep(const Scenario &base, const SweepSpec &spec, std::uint64_t seed, int workers)
    {
        if (workers < 1)
            throw Error(ErrorKind::Usage, "--workers must be at least 1");
        if (spec.values.empty())
            throw Error(ErrorKind::Usage, "sweep has no values");
        const bool sensing = spec.mode == "sensing" || (spec.mode == "auto" && axis_is_sensing(spec.axis));

        std::vector<Scenario> points;
        for (double v : spec.values)
            points.push_back(apply_sweep_value(base, spec, v));

        const int n_values = static_cast<int>(points.size());
        const int jobs = n_values * spec.trials;
        std::vector<std::map<std::string, double>> metrics(jobs);
        std::vector<std::string> failures(jobs);

#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
        for (int j = 0; j < jobs; ++j)
        {
            const int vi = j / spec.trials;
            const int trial = j % spec.trials;
            const std::uint64_t ts = derive_seed(seed, static_cast<std::uint64_t>(trial));
            std::string kind, msg;
            if (sensing)
            {
                const SensingTrial r = run_sensing_trial(points[vi], ts);
                metrics[j] = trial_metrics(r);
                kind = r.failure;
                msg = r.message;
            }
            else
            {
                const TrialRecord r = run_trial(points[vi], ts);
                metrics[j] = trial_metrics(r);
                kind = r.failure;
                msg = r.message;
            }
            if (!kind.empty())
                failures[j] = fmt::format("{:.10g},{},{},{}", spec.values[vi], trial, kind, msg);
        }

        SweepResult out;
        for (int vi = 0; vi < n_values; ++vi)
        {
            std::map<std::string, std::vector<double>> samples;
            for (int t = 0; t < spec.trials; ++t)
                for (const auto &[name, x] : metrics[vi * spec.trials + t])
                {
                    auto &s = samples[name];
                    if (std::isfinite(x))
                        s.push_back(x);
                }
            for (const auto &[name, s] : samples)
            {
                SummaryRow row;
                row.sweep_value = spec.values[vi];
                row.metric = name;
                row.trials = static_cast<int>(s.size());
                row.seed = seed;
                if (s.empty())
                    row.mean = row.p10 = row.p50 = row.p90 = kNaN;
                else
                {
                    double sum = 0.0;
                    for (double x : s)
                        sum += x;
                    row.mean = sum / s.size();
                    row.p10 = percentile(s, 0.1);
                    row.p50 = percentile(s, 0.5);
                    row.p90 = percentile(s, 0.9);
                }
                out.rows.push_back(row);
            }
        }
        std::stable_sort(out.rows.begin(), out.rows.end(), [](const SummaryRow &a, const SummaryRow &b) {
            return std::tie(a.sweep_value, a.metric) < std::tie(b.sweep_value, b.metric);
        });
        for (auto &f : failures)
            if (!f.empty())
                out.failures.push_back(std::move(f));
        return out;
    }

    std::string summary_csv(const std::vector<SummaryRow> &rows)
    {
        std::string s = "sweep_value,metric,mean,p10,p50,p90,trials,seed\n";
        for (const auto &r : rows)
            s += fmt::format("{:.10g},{},{:.10g},{:.10g},{:.10g},{:.10g},{},{}\n", r.sweep_value, r.metric, r.mean,
                             r.p10, r.p50, r.p90, r.trials, r.seed);
        return s;
    }

} // namespace irsisac
