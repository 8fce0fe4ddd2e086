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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "irsisac/harness.hpp"
#include "irsisac/plot.hpp"

using namespace irsisac;

namespace
{
    struct Options
    {
        std::string config;
        std::optional<std::uint64_t> seed;
        int trials = -1;
        std::string axis;
        std::string out;
        int workers = 1;
        std::vector<std::string> inputs;
    };

    std::string read_text(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw Error(ErrorKind::InvalidConfiguration, "cannot open config file '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    Scenario scenario_from(const Options &o)
    {
        Scenario sc = o.config.empty() ? default_scenario() : parse_scenario(read_text(o.config));
        if (o.seed)
            sc.seed = *o.seed;
        return sc;
    }

    void write_file(const std::string &path, const std::string &text)
    {
        const auto parent = std::filesystem::path(path).parent_path();
        if (!parent.empty())
            std::filesystem::create_directories(parent);
        std::ofstream out(path);
        if (!out)
            throw Error(ErrorKind::Usage, "cannot write '" + path + "'");
        out << text;
    }

    std::string positions_csv(const std::vector<Position> &truth, const std::vector<Position> &est)
    {
        std::string s = "user,true_x,true_y,true_z,est_x,est_y,est_z\n";
        for (std::size_t k = 0; k < truth.size(); ++k)
        {
            const Position e = k < est.size() ? est[k] : Position{NAN, NAN, NAN};
            s += fmt::format("{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n", k + 1, truth[k].x, truth[k].y,
                             truth[k].z, e.x, e.y, e.z);
        }
        return s;
    }

    int cmd_sense(const Options &o)
    {
        const Scenario sc = scenario_from(o);
        const SensingTrial r = run_sensing_trial(sc, sc.seed);
        if (!r.ok)
        {
            std::cerr << "sensing failed (" << r.failure << "): " << r.message << "\n";
            return 1;
        }
        std::cout << positions_csv(r.truth, r.estimate);
        std::cout << fmt::format("rmse_m={:.6g} rmse_raw_m={:.6g}\n", r.rmse, r.rmse_raw);
        if (!o.out.empty())
            write_file(o.out, positions_csv(r.truth, r.estimate));
        return 0;
    }

    int cmd_trial(const Options &o)
    {
        const Scenario sc = scenario_from(o);
        const TrialRecord r = run_trial(sc, sc.seed);
        if (!r.ok)
        {
            std::cerr << "trial failed (" << r.failure << "): " << r.message << "\n";
            return 1;
        }
        std::string s = "metric,value\n";
        for (const auto &[name, v] : trial_metrics(r))
            s += fmt::format("{},{:.10g}\n", name, v);
        std::cout << s;
        if (!o.out.empty())
            write_file(o.out, s);
        return 0;
    }

    int cmd_sweep(const Options &o)
    {
        const Scenario sc = scenario_from(o);
        SweepSpec spec = o.config.empty() ? SweepSpec{} : parse_sweep(read_text(o.config));
        if (!o.axis.empty() && o.axis != spec.axis)
        {
            // the config's values belong to its own axis
            spec.axis = o.axis;
            spec.values = default_sweep_values(o.axis);
        }
        const auto &axes = sweep_axes();
        if (std::find(axes.begin(), axes.end(), spec.axis) == axes.end())
        {
            std::string list;
            for (const auto &a : axes)
                list += (list.empty() ? "" : ", ") + a;
            throw Error(ErrorKind::Usage, "unknown sweep axis '" + spec.axis + "' (valid: " + list + ")");
        }
        if (o.trials >= 0)
            spec.trials = o.trials;
        const SweepResult res = run_sweep(sc, spec, sc.seed, o.workers);
        const std::string dir = o.out.empty() ? "." : o.out;
        const std::string path = (std::filesystem::path(dir) / ("sweep_" + spec.axis + ".csv")).string();
        write_file(path, summary_csv(res.rows));
        if (!res.failures.empty())
        {
            std::string f = "sweep_value,trial,kind,message\n";
            for (const auto &line : res.failures)
                f += line + "\n";
            write_file((std::filesystem::path(dir) / ("failures_" + spec.axis + ".csv")).string(), f);
        }
        std::cout << path << "\n";
        return 0;
    }

    int cmd_plot(const Options &o)
    {
        if (o.inputs.empty())
            throw Error(ErrorKind::Usage, "plot needs at least one CSV input");
        const std::string dir = o.out.empty() ? "." : o.out;
        for (const auto &in : o.inputs)
            for (const auto &p : emit_plots(read_csv(in), dir, std::filesystem::path(in).stem().string()))
                std::cout << p << "\n";
        return 0;
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Location sensing and beamforming simulator for IRS-assisted ISAC"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App *sub) {
        sub->add_option("--config", o.config, "YAML scenario file")->check(CLI::ExistingFile);
        sub->add_option("--seed", o.seed, "master seed (overrides the config)");
        sub->add_option("--out", o.out, "output file or directory");
    };
    auto *sense = app.add_subcommand("sense", "one sensing trial; prints true and estimated positions");
    common(sense);
    auto *trial = app.add_subcommand("trial", "one full ISAC + PC trial; prints rates and RMSEs");
    common(trial);
    auto *sweep = app.add_subcommand("sweep", "Monte-Carlo sweep; writes <out>/sweep_<axis>.csv");
    common(sweep);
    sweep->add_option("--axis", o.axis, "rho | tau1 | users | M_semi | M_reflect | tau1_over_T1 | T1_over_T");
    sweep->add_option("--trials", o.trials, "trials per sweep value")->check(CLI::NonNegativeNumber);
    sweep->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
    auto *plot = app.add_subcommand("plot", "render SVG figures from sweep CSV files");
    plot->add_option("inputs", o.inputs, "sweep CSV files")->required();
    plot->add_option("--out", o.out, "output directory");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        // --help exits 0; every parse failure is a usage error
        return app.exit(e) == 0 ? 0 : 2;
    }

    try
    {
        if (*sense)
            return cmd_sense(o);
        if (*trial)
            return cmd_trial(o);
        if (*sweep)
            return cmd_sweep(o);
        return cmd_plot(o);
    }
    catch (const Error &e)
    {
        std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
        return e.kind() == ErrorKind::Usage ? 2 : 1;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
