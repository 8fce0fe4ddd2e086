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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "irsisac/harness.hpp"
#include "irsisac/plot.hpp"
#include "irsisac/scenario.hpp"
#include "test_util.hpp"

using namespace irsisac;

namespace
{
    std::string slurp(const std::string &path)
    {
        std::ifstream in(path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    int run_cli(const std::string &args)
    {
        const std::string cmd = std::string(IRSISAC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string temp_dir(const std::string &name)
    {
        const auto p = std::filesystem::temp_directory_path() / ("irsisac_test_" + name);
        std::filesystem::remove_all(p);
        std::filesystem::create_directories(p);
        return p.string();
    }
} // namespace

TEST_CASE("default scenario")
{
    const Scenario sc = default_scenario();
    CHECK(sc.users == 3);
    CHECK(sc.bs_antennas == 8);
    CHECK(sc.panel_geometry[0].total() == 1024);
    CHECK(sc.panel_geometry[1].total() == 144);
    CHECK(sc.panel_geometry[2].total() == 144);
    CHECK(std::abs(sc.rho - 0.1) < 1e-15);
    CHECK(std::abs(sc.sigma2 / 1e-11 - 1.0) < 1e-12);
    CHECK(sc.total_slots == 1200);
    CHECK(sc.isac_slots == 120);
    CHECK(sc.tau1 == 20);
    CHECK(sc.tau2() == 100);
    CHECK(sc.pc_slots() == 1080);
    CHECK(sc.power_slots == 4);
    CHECK(sc.bits == 3);
    CHECK(sc.bits_delta == 4);
    CHECK(std::abs(distance(sc.bs, sc.panels[1]) - 50.0) < 1e-9);
    CHECK_NOTHROW(sc.validate());
}

TEST_CASE("YAML overrides and validation")
{
    const Scenario sc = parse_scenario(R"(
power: {rho_dbm: 10, noise_dbm: -90}
protocol: {T1: 200, tau1: 50, C: 8}
arrays: {semi_passive: [8, 8]}
users: {count: 2, placement: ring, ring_distance_m: 12}
seed: 17
)");
    CHECK(std::abs(sc.rho - 0.01) < 1e-15);
    CHECK(std::abs(sc.sigma2 / 1e-12 - 1.0) < 1e-12);
    CHECK(sc.isac_slots == 200);
    CHECK(sc.tau1 == 50);
    CHECK(sc.power_slots == 8);
    CHECK(sc.panel_geometry[1].total() == 64);
    CHECK(sc.users == 2);
    CHECK(sc.placement.kind == UserPlacement::Kind::Ring);
    CHECK(sc.seed == 17);

    CHECK_ERROR_KIND(parse_scenario("powr: {rho_dbm: 1}"), ErrorKind::InvalidConfiguration);
    CHECK_ERROR_KIND(parse_scenario("power: {rho: 1}"), ErrorKind::InvalidConfiguration);
    CHECK_ERROR_KIND(parse_scenario("protocol: {tau1: 120}"), ErrorKind::InvalidConfiguration);
    CHECK_ERROR_KIND(parse_scenario("protocol: {C: 200}"), ErrorKind::InvalidConfiguration);
    CHECK_ERROR_KIND(parse_scenario("users: {count: 9}"), ErrorKind::InvalidConfiguration);
    CHECK_ERROR_KIND(parse_scenario("power: [1, 2"), ErrorKind::InvalidConfiguration);

    const SweepSpec spec = parse_sweep("sweep: {axis: tau1, values: [5, 10], trials: 3}");
    CHECK(spec.axis == "tau1");
    CHECK(spec.values == std::vector<double>{5, 10});
    CHECK(spec.trials == 3);
    CHECK_ERROR_KIND(parse_sweep("sweep: {mode: fast}"), ErrorKind::InvalidConfiguration);
}

TEST_CASE("the shipped config files parse")
{
    for (const char *name : {"default.yaml", "msemi16.yaml"})
    {
        const std::string text = slurp(std::string(IRSISAC_SOURCE_DIR) + "/configs/" + name);
        REQUIRE_FALSE(text.empty());
        CHECK_NOTHROW(parse_scenario(text));
        CHECK_NOTHROW(parse_sweep(text));
    }
    const Scenario d = parse_scenario(slurp(std::string(IRSISAC_SOURCE_DIR) + "/configs/default.yaml"));
    const Scenario ref = default_scenario();
    CHECK(d.rho == ref.rho);
    CHECK(d.sigma2 == ref.sigma2);
    CHECK(d.bs.x == ref.bs.x);
    CHECK(d.panel_geometry[0].total() == ref.panel_geometry[0].total());
}

TEST_CASE("user placement")
{
    Scenario sc = default_scenario();
    Rng rng(1);
    for (const Position &p : place_users(sc, rng))
    {
        CHECK(std::abs(p.x - 4.0) <= 5.0);
        CHECK(std::abs(p.y) <= 5.0);
        CHECK(p.z == 0.0);
    }
    sc.placement.kind = UserPlacement::Kind::Ring;
    for (const Position &p : place_users(sc, rng))
        CHECK(std::abs(distance(p, sc.panels[1]) - 10.0) < 1e-12);
}

TEST_CASE("sweep axes")
{
    const Scenario base = default_scenario();
    SweepSpec s;
    s.axis = "rho";
    CHECK(std::abs(apply_sweep_value(base, s, 30.0).rho - 1.0) < 1e-12);
    s.axis = "tau1";
    CHECK(apply_sweep_value(base, s, 40.0).tau1 == 40);
    s.axis = "M_semi";
    CHECK(apply_sweep_value(base, s, 64.0).panel_geometry[2].total() == 64);
    CHECK_ERROR_KIND(apply_sweep_value(base, s, 15.0), ErrorKind::Usage);
    s.axis = "M_reflect";
    CHECK(apply_sweep_value(base, s, 256.0).panel_geometry[0].total() == 256);
    s.axis = "tau1_over_T1";
    CHECK(apply_sweep_value(base, s, 0.5).tau1 == 60);
    s.axis = "T1_over_T";
    const Scenario t = apply_sweep_value(base, s, 0.5);
    CHECK(t.isac_slots == 600);
    CHECK(t.tau1 == 100);
    s.axis = "users";
    s.fixed_total_power = true;
    s.total_power_dbm = 20.0;
    const Scenario u = apply_sweep_value(base, s, 2.0);
    CHECK(u.users == 2);
    CHECK(std::abs(u.rho - 0.05) < 1e-12);
    s.axis = "bandwidth";
    CHECK_ERROR_KIND(apply_sweep_value(base, s, 1.0), ErrorKind::Usage);
    CHECK_ERROR_KIND(default_sweep_values("bandwidth"), ErrorKind::Usage);
    CHECK(sweep_axes().size() == 7);
}

TEST_CASE("percentile interpolates linearly")
{
    CHECK(percentile({1.0}, 0.9) == 1.0);
    CHECK(percentile({4.0, 1.0, 3.0, 2.0}, 0.5) == doctest::Approx(2.5));
    CHECK(percentile({0.0, 10.0}, 0.1) == doctest::Approx(1.0));
}

TEST_CASE("sensing trials are deterministic per seed")
{
    const Scenario sc = default_scenario();
    const SensingTrial a = run_sensing_trial(sc, 5);
    const SensingTrial b = run_sensing_trial(sc, 5);
    REQUIRE(a.ok);
    CHECK(a.rmse == b.rmse);
    CHECK(a.rmse < 0.5);
    CHECK(trial_metrics(a).at("failure_rate") == 0.0);
}

TEST_CASE("sweep output does not depend on the worker count")
{
    const Scenario sc = default_scenario();
    SweepSpec spec;
    spec.axis = "rho";
    spec.values = {10.0, 20.0};
    spec.trials = 3;
    const std::string a = summary_csv(run_sweep(sc, spec, 9, 1).rows);
    const std::string b = summary_csv(run_sweep(sc, spec, 9, 3).rows);
    CHECK(a == b);
    CHECK(a.rfind("sweep_value,metric,mean,p10,p50,p90,trials,seed\n", 0) == 0);

    spec.trials = 0;
    const SweepResult empty = run_sweep(sc, spec, 9, 2);
    CHECK(empty.rows.empty());
    CHECK(summary_csv(empty.rows) == "sweep_value,metric,mean,p10,p50,p90,trials,seed\n");
    CHECK_ERROR_KIND(run_sweep(sc, spec, 9, 0), ErrorKind::Usage);
}

TEST_CASE("a full trial at the defaults")
{
    const Scenario sc = default_scenario();
    const TrialRecord r = run_trial(sc, 3);
    REQUIRE_MESSAGE(r.ok, r.failure << ": " << r.message);
    CHECK(std::isfinite(r.rmse1));
    CHECK(std::isfinite(r.rmse2));
    CHECK(r.rate_pc > 0.0);
    CHECK(r.rate_isac > 0.0);
    CHECK(r.slots == sc.total_slots);
    CHECK(std::abs(r.rate_total - (sc.isac_slots * r.rate_isac + sc.pc_slots() * r.rate_pc) / sc.total_slots) <
          1e-12 * r.rate_total);

    TrialOptions fast;
    fast.baselines = false;
    const TrialRecord a = run_trial(sc, 3, fast);
    const TrialRecord b = run_trial(sc, 3, fast);
    CHECK(a.rate_total == b.rate_total);
    CHECK(a.rmse2 == b.rmse2);
    CHECK(a.rate_total == r.rate_total);
}

TEST_CASE("failures are reported, not thrown")
{
    Scenario sc = default_scenario();
    sc.power_slots = 0;
    const TrialRecord r = run_trial(sc, 1, TrialOptions{false});
    CHECK_FALSE(r.ok);
    CHECK_FALSE(r.failure.empty());
    CHECK_FALSE(r.message.empty());
    CHECK(std::isnan(trial_metrics(r).at("rate_pc")));
    CHECK(trial_metrics(r).at("failure_rate") == 1.0);
}

TEST_CASE("SVG plots")
{
    const std::string csv = "sweep_value,metric,mean,p10,p50,p90,trials,seed\n"
                            "0,rmse_block1,0.5,0.4,0.5,0.6,10,1\n"
                            "10,rmse_block1,0.1,0.1,0.1,0.2,10,1\n"
                            "20,rmse_block1,0.02,0.01,0.02,0.03,10,1\n"
                            "30,rmse_block1,0.004,0.003,0.004,0.005,10,1\n";
    const Dataset d = parse_csv(csv);
    PlotSpec spec;
    spec.log_y = true;
    const std::string svg = render_svg(d, spec);
    std::size_t markers = 0;
    for (std::size_t pos = svg.find("class=\"marker\""); pos != std::string::npos;
         pos = svg.find("class=\"marker\"", pos + 1))
        ++markers;
    CHECK(markers == 4);
    CHECK(svg == render_svg(parse_csv(csv), spec));

    CHECK_ERROR_KIND(render_svg(parse_csv("sweep_value,metric,mean\n"), spec), ErrorKind::Plotting);
    spec.y_column = "median";
    try
    {
        render_svg(d, spec);
        FAIL("missing column accepted");
    }
    catch (const Error &e)
    {
        CHECK(e.kind() == ErrorKind::Plotting);
        CHECK(std::string(e.what()).find("median") != std::string::npos);
    }

    const std::string dir = temp_dir("plots");
    const auto paths = emit_plots(d, dir, "sweep_rho");
    REQUIRE(paths.size() == 1);
    CHECK(std::filesystem::exists(paths[0]));
}

TEST_CASE("command-line exit codes")
{
    const std::string dir = temp_dir("cli");
    CHECK(run_cli("sweep --axis bandwidth --trials 1 --out " + dir) == 2);
    CHECK(run_cli("sweep --workers 0") == 2);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("sense --config /nonexistent.yaml") == 2);
    CHECK(run_cli("plot " + dir + "/missing.csv --out " + dir) == 1);
    CHECK(run_cli("sense --seed 4 --out " + dir + "/sense.csv") == 0);
    CHECK(slurp(dir + "/sense.csv").rfind("user,true_x", 0) == 0);
    CHECK(run_cli("sweep --axis tau1 --trials 2 --workers 2 --out " + dir) == 0);
    CHECK(run_cli("plot " + dir + "/sweep_tau1.csv --out " + dir) == 0);
    CHECK(std::filesystem::exists(dir + "/sweep_tau1_rmse.svg"));
}

TEST_CASE("lower noise helps the second sensing block" * doctest::skip(std::getenv("IRSISAC_SLOW") == nullptr))
{
    Scenario sc = default_scenario();
    sc.set_noise_dbm(sc.noise_dbm - 40.0);
    int better = 0, total = 0;
    for (std::uint64_t t = 0; t < 50; ++t)
    {
        const TrialRecord r = run_trial(sc, derive_seed(77, t), TrialOptions{false});
        REQUIRE_MESSAGE(r.ok, r.failure << ": " << r.message);
        ++total;
        better += (r.rmse2 <= r.rmse1) ? 1 : 0;
    }
    MESSAGE(better << "/" << total << " trials with block-2 RMSE <= block-1 RMSE");
    CHECK(better >= 45);
}
