// SPDX-License-Identifier: Apache-2.0
//
// risdeploy - RIS deployment planning for indoor dense mmWave networks
// Copyright (C) 2026 The risdeploy authors
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

#include "risdeploy/cli.hpp"

#include "risdeploy/channel.hpp"
#include "risdeploy/optimizer.hpp"
#include "risdeploy/radio.hpp"
#include "risdeploy/scene.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace risdeploy
{
    namespace fs = std::filesystem;

    namespace
    {
        class InputError : public std::runtime_error
        {
          public:
            using std::runtime_error::runtime_error;
        };

        std::string fmt(double v)
        {
            char buf[64];
            const auto res = std::to_chars(buf, buf + sizeof(buf), v);
            return std::string(buf, res.ptr);
        }

        std::string iso_now()
        {
            const auto now = std::chrono::system_clock::now();
            const std::time_t t = std::chrono::system_clock::to_time_t(now);
            char buf[32];
            std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
            return buf;
        }

        std::string read_file(const fs::path &path)
        {
            std::ifstream in(path, std::ios::binary);
            if (!in)
                throw InputError("cannot open " + path.string());
            std::ostringstream ss;
            ss << in.rdbuf();
            return ss.str();
        }

        std::ofstream open_out(const fs::path &path)
        {
            if (path.has_parent_path())
                fs::create_directories(path.parent_path());
            std::ofstream out(path, std::ios::binary);
            if (!out)
                throw InputError("cannot write " + path.string());
            return out;
        }

        struct ScenarioInputs
        {
            CabinScene scene;
            RadioConfig radio;
            bool have_scene = false;
        };

        ScenarioInputs load_config(const std::string &config_path, int ris_elements)
        {
            ScenarioInputs in;
            if (!config_path.empty())
            {
                if (!fs::exists(config_path))
                    throw InputError("config file not found: " + config_path);
                try
                {
                    load_scene(config_path, in.scene, in.radio);
                }
                catch (const std::exception &e)
                {
                    throw InputError(config_path + ": " + e.what());
                }
                in.have_scene = true;
            }
            else
            {
                in.scene = build_default_cabin(ris_elements, in.radio);
                in.have_scene = true;
            }
            const auto problems = validate(in.scene, in.radio);
            if (!problems.empty())
            {
                std::string msg = "invalid scene";
                if (!config_path.empty())
                    msg += " in " + config_path;
                for (const auto &p : problems)
                    msg += "\n  " + p;
                throw InputError(msg);
            }
            return in;
        }

        ChannelSet load_channels(const std::string &path)
        {
            try
            {
                return import_cir(path);
            }
            catch (const CirFormatError &)
            {
                throw;
            }
            catch (const std::exception &e)
            {
                throw InputError(e.what());
            }
        }

        std::string threshold_tag(double t)
        {
            std::ostringstream ss;
            ss << static_cast<long long>(std::llround(t));
            return ss.str();
        }

        std::vector<std::string> collect_argv(int argc, const char *const *argv)
        {
            std::vector<std::string> out;
            for (int i = 0; i < argc; ++i)
                out.emplace_back(argv[i]);
            return out;
        }

        double parse_value(std::string s)
        {
            double scale = 1.0;
            if (!s.empty())
            {
                const char suffix = s.back();
                if (suffix == 'k' || suffix == 'K')
                    scale = 1e3;
                else if (suffix == 'M')
                    scale = 1e6;
                else if (suffix == 'G')
                    scale = 1e9;
                if (scale != 1.0)
                    s.pop_back();
            }
            double v = 0.0;
            const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
            if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
                throw InputError("bad threshold value '" + s + "'");
            return v * scale;
        }
    }

    RunManifest::RunManifest(std::string command, std::vector<std::string> argv, fs::path path)
        : path_(std::move(path))
    {
        doc_["command"] = std::move(command);
        doc_["argv"] = std::move(argv);
        doc_["tool_version"] = kToolVersion;
        doc_["config"] = nlohmann::json::object();
        doc_["outputs"] = nlohmann::json::array();
        doc_["stages"] = nlohmann::json::object();
        doc_["started_at"] = iso_now();
    }

    void RunManifest::add_output(const fs::path &path) { doc_["outputs"].push_back(path.string()); }

    void RunManifest::begin_stage(const std::string &name)
    {
        end_stage();
        stage_ = name;
        stage_start_ = std::chrono::steady_clock::now();
    }

    void RunManifest::end_stage()
    {
        if (stage_.empty())
            return;
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - stage_start_).count();
        doc_["stages"][stage_] = secs;
        stage_.clear();
    }

    void RunManifest::write_initial()
    {
        doc_["status"] = "running";
        write();
    }

    void RunManifest::finalize(int exit_code, const std::string &message)
    {
        end_stage();
        doc_["exit_code"] = exit_code;
        doc_["status"] = exit_code == ExitSuccess ? "ok" : exit_code == ExitPartial ? "partial" : "failed";
        if (!message.empty())
            doc_["message"] = message;
        doc_["finished_at"] = iso_now();
        write();
    }

    void RunManifest::write() const
    {
        if (path_.empty())
            return;
        if (path_.has_parent_path())
            fs::create_directories(path_.parent_path());
        std::ofstream out(path_);
        out << doc_.dump(2) << '\n';
    }

    std::vector<double> parse_thresholds(const std::string &text)
    {
        std::vector<double> out;
        if (text.find(':') != std::string::npos)
        {
            std::vector<std::string> parts;
            std::stringstream ss(text);
            std::string p;
            while (std::getline(ss, p, ':'))
                parts.push_back(p);
            if (parts.size() != 3)
                throw InputError("threshold range must be start:stop:step");
            const double a = parse_value(parts[0]), b = parse_value(parts[1]), step = parse_value(parts[2]);
            if (!(step > 0.0) || b < a)
                throw InputError("threshold range needs step > 0 and stop >= start");
            const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9));
            for (long i = 0; i <= count; ++i)
                out.push_back(a + static_cast<double>(i) * step);
        }
        else
        {
            std::stringstream ss(text);
            std::string p;
            while (std::getline(ss, p, ','))
                if (!p.empty())
                    out.push_back(parse_value(p));
        }
        if (out.empty())
            throw InputError("no thresholds given");
        for (double v : out)
            if (v < 0.0)
                throw InputError("thresholds must be nonnegative");
        if (!std::is_sorted(out.begin(), out.end()))
            throw InputError("thresholds must be ascending");
        return out;
    }

    int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
    {
        CLI::App app{"RIS deployment planning for indoor dense mmWave cabins", "risdeploy"};
        app.require_subcommand(1);
        app.set_version_flag("--version", kToolVersion);

        // synth
        std::string synth_config, synth_out = "channels.cir", synth_scene_out;
        std::uint64_t synth_seed = 1;
        int synth_elements = 16;
        auto *synth = app.add_subcommand("synth", "Generate a synthetic cabin channel set as a CIR file");
        synth->add_option("--config", synth_config, "Scene JSON (default cabin when omitted)")->envname("RISDEPLOY_CONFIG");
        synth->add_option("--seed", synth_seed, "Seed for scatter rays")->envname("RISDEPLOY_SEED");
        synth->add_option("--ris-elements", synth_elements, "Elements per RIS side for the default cabin (8 or 16)")
            ->envname("RISDEPLOY_RIS_ELEMENTS");
        synth->add_option("--out", synth_out, "Output CIR path");
        synth->add_option("--scene-out", synth_scene_out, "Also write the resolved scene JSON");

        // optimize
        std::string opt_channels, opt_config, opt_thresholds = "10M:140M:10M", opt_out = "out";
        int opt_elements = 16, opt_max_iters = 30, opt_threads = 1;
        double opt_epsilon = 1e-3, opt_omega = 100.0;
        std::uint64_t opt_seed = 1;
        auto *optimize = app.add_subcommand("optimize", "Run FPP-SCA over a list of per-UE rate thresholds");
        optimize->add_option("--channels", opt_channels, "CIR file (synthesizes the default cabin when omitted)");
        optimize->add_option("--config", opt_config, "Scene JSON supplying radio parameters")->envname("RISDEPLOY_CONFIG");
        optimize->add_option("--thresholds", opt_thresholds, "Rates in bit/s: a,b,c or start:stop:step; k/M/G suffixes")
            ->envname("RISDEPLOY_THRESHOLDS");
        optimize->add_option("--ris-elements", opt_elements, "Elements per RIS side when synthesizing")
            ->envname("RISDEPLOY_RIS_ELEMENTS");
        optimize->add_option("--epsilon", opt_epsilon, "Convergence tolerance")->envname("RISDEPLOY_EPSILON");
        optimize->add_option("--omega", opt_omega, "Slack penalty")->envname("RISDEPLOY_OMEGA");
        optimize->add_option("--max-iters", opt_max_iters, "Outer iteration cap")->envname("RISDEPLOY_MAX_ITERS");
        optimize->add_option("--seed", opt_seed, "Seed of the random initial point")->envname("RISDEPLOY_SEED");
        optimize->add_option("--threads", opt_threads, "Concurrent thresholds")->envname("RISDEPLOY_THREADS");
        optimize->add_option("--out", opt_out, "Output directory");

        // snrmap
        std::string map_channels, map_config, map_solution, map_baseline, map_out = "snr.csv";
        std::uint64_t map_seed = 1;
        double map_threshold = 0.0;
        auto *snrmap = app.add_subcommand("snrmap", "Per-UE SNR for a deployment or a baseline");
        snrmap->add_option("--channels", map_channels, "CIR file")->required();
        snrmap->add_option("--config", map_config, "Scene JSON supplying radio parameters")->envname("RISDEPLOY_CONFIG");
        snrmap->add_option("--solution", map_solution, "Solution JSON from optimize");
        snrmap->add_option("--baseline", map_baseline, "no-ris or random-phase")
            ->check(CLI::IsMember({"no-ris", "random-phase"}));
        snrmap->add_option("--seed", map_seed, "Seed for random phases")->envname("RISDEPLOY_SEED");
        snrmap->add_option("--threshold", map_threshold, "Rate threshold for the feasible column (bit/s)");
        snrmap->add_option("--out", map_out, "Output CSV path");

        // replay
        std::string replay_manifest;
        auto *replay = app.add_subcommand("replay", "Re-run the command recorded in a run manifest");
        replay->add_option("manifest", replay_manifest, "Manifest JSON")->required();

        try
        {
            app.parse(argc, argv);
        }
        catch (const CLI::CallForHelp &e)
        {
            out << app.help();
            return ExitSuccess;
        }
        catch (const CLI::CallForVersion &)
        {
            out << kToolVersion << '\n';
            return ExitSuccess;
        }
        catch (const CLI::ParseError &e)
        {
            err << "error: " << e.what() << '\n';
            return ExitInputError;
        }

        const auto args = collect_argv(argc, argv);

        if (*replay)
        {
            try
            {
                const auto doc = nlohmann::json::parse(read_file(replay_manifest));
                const auto recorded = doc.at("argv").get<std::vector<std::string>>();
                std::vector<const char *> ptrs;
                for (const auto &s : recorded)
                    ptrs.push_back(s.c_str());
                return run_cli(static_cast<int>(ptrs.size()), ptrs.data(), out, err);
            }
            catch (const std::exception &e)
            {
                err << "error: " << e.what() << '\n';
                return ExitInputError;
            }
        }

        if (*synth)
        {
            RunManifest manifest("synth", args, fs::path(synth_out + ".manifest.json"));
            manifest.set_seed(synth_seed);
            manifest.config() = {{"config", synth_config}, {"ris_elements", synth_elements}, {"out", synth_out}};
            try
            {
                manifest.write_initial();
                manifest.begin_stage("scene");
                const ScenarioInputs in = load_config(synth_config, synth_elements);
                manifest.config()["scene"] = scene_to_json(in.scene, in.radio);
                manifest.begin_stage("channels");
                SynthModel model;
                model.seed = synth_seed;
                const ChannelSet set = synth_channel_set(in.scene, in.radio, model);
                manifest.begin_stage("export");
                export_cir(set, synth_out);
                manifest.add_output(synth_out);
                if (!synth_scene_out.empty())
                {
                    save_scene(synth_scene_out, in.scene, in.radio);
                    manifest.add_output(synth_scene_out);
                }
                const auto &d = set.dims();
                out << "wrote " << synth_out << " (K=" << d.K << " L=" << d.L << " M=" << d.M << " N=" << d.N << ")\n";
                manifest.finalize(ExitSuccess);
                return ExitSuccess;
            }
            catch (const InputError &e)
            {
                err << "error: " << e.what() << '\n';
                manifest.finalize(ExitInputError, e.what());
                return ExitInputError;
            }
            catch (const std::invalid_argument &e)
            {
                err << "error: " << e.what() << '\n';
                manifest.finalize(ExitInputError, e.what());
                return ExitInputError;
            }
            catch (const std::exception &e)
            {
                err << "internal error: " << e.what() << '\n';
                manifest.finalize(ExitInternalError, e.what());
                return ExitInternalError;
            }
        }

        if (*optimize)
        {
            const fs::path dir(opt_out);
            RunManifest manifest("optimize", args, dir / "manifest.json");
            manifest.set_seed(opt_seed);
            manifest.config() = {{"channels", opt_channels}, {"config", opt_config},   {"thresholds", opt_thresholds},
                                 {"ris_elements", opt_elements}, {"epsilon", opt_epsilon}, {"omega", opt_omega},
                                 {"max_iters", opt_max_iters},   {"threads", opt_threads}};
            try
            {
                manifest.write_initial();
                manifest.begin_stage("inputs");
                const std::vector<double> thresholds = parse_thresholds(opt_thresholds);
                if (opt_max_iters < 0 || !(opt_epsilon > 0.0) || !(opt_omega > 0.0))
                    throw InputError("need --max-iters >= 0, --epsilon > 0 and --omega > 0");
                ScenarioInputs in;
                ChannelSet set;
                if (opt_channels.empty())
                {
                    in = load_config(opt_config, opt_elements);
                    set = synth_channel_set(in.scene, in.radio, SynthModel{});
                }
                else
                {
                    if (!opt_config.empty())
                        in = load_config(opt_config, opt_elements);
                    set = load_channels(opt_channels);
                }

                manifest.begin_stage("sweep");
                FppScaConfig cfg;
                cfg.epsilon = opt_epsilon;
                cfg.omega = opt_omega;
                cfg.max_iters = opt_max_iters;
                cfg.seed = opt_seed;
                std::vector<FppScaResult> runs;
                const auto rows = run_threshold_sweep(set, thresholds, in.radio, cfg, opt_threads, &runs);

                manifest.begin_stage("write");
                fs::create_directories(dir);
                {
                    auto f = open_out(dir / "sweep.csv");
                    write_sweep_csv(f, rows);
                    manifest.add_output(dir / "sweep.csv");
                }
                int failed = 0;
                for (std::size_t i = 0; i < rows.size(); ++i)
                {
                    const std::string tag = threshold_tag(rows[i].threshold_bps);
                    if (runs[i].state.r > 0)
                    {
                        auto f = open_out(dir / ("convergence_" + tag + ".csv"));
                        write_convergence_csv(f, runs[i].state);
                        manifest.add_output(dir / ("convergence_" + tag + ".csv"));
                    }
                    if (rows[i].success)
                    {
                        auto f = open_out(dir / ("solution_" + tag + ".json"));
                        f << solution_to_json(runs[i].solution) << '\n';
                        manifest.add_output(dir / ("solution_" + tag + ".json"));
                        auto r = open_out(dir / ("report_" + tag + ".csv"));
                        write_report_csv(r, runs[i].report);
                        manifest.add_output(dir / ("report_" + tag + ".csv"));
                        out << "threshold " << fmt(rows[i].threshold_bps) << " bit/s: " << rows[i].num_ris
                            << " RIS, min rate " << fmt(rows[i].min_rate_bps) << " bit/s, " << rows[i].iters
                            << " iterations\n";
                    }
                    else
                    {
                        ++failed;
                        err << "threshold " << fmt(rows[i].threshold_bps) << " bit/s failed: " << rows[i].failure;
                        if (!runs[i].state.slack_trace.empty())
                        {
                            err << " [slack trace:";
                            for (double s : runs[i].state.slack_trace)
                                err << ' ' << fmt(s);
                            err << ']';
                        }
                        err << '\n';
                    }
                }
                const int code = failed == 0 ? ExitSuccess : ExitPartial;
                manifest.finalize(code, failed ? std::to_string(failed) + " threshold(s) failed" : std::string());
                return code;
            }
            catch (const InputError &e)
            {
                err << "error: " << e.what() << '\n';
                manifest.finalize(ExitInputError, e.what());
                return ExitInputError;
            }
            catch (const CirFormatError &e)
            {
                err << "error: " << e.what() << '\n';
                manifest.finalize(ExitInputError, e.what());
                return ExitInputError;
            }
            catch (const std::invalid_argument &e)
            {
                err << "error: " << e.what() << '\n';
                manifest.finalize(ExitInputError, e.what());
                return ExitInputError;
            }
            catch (const std::exception &e)
            {
                err << "internal error: " << e.what() << '\n';
                manifest.finalize(ExitInternalError, e.what());
                return ExitInternalError;
            }
        }

        // snrmap
        RunManifest manifest("snrmap", args, fs::path(map_out + ".manifest.json"));
        manifest.set_seed(map_seed);
        manifest.config() = {{"channels", map_channels}, {"config", map_config},     {"solution", map_solution},
                             {"baseline", map_baseline}, {"threshold", map_threshold}, {"out", map_out}};
        try
        {
            manifest.write_initial();
            manifest.begin_stage("inputs");
            if (map_solution.empty() == map_baseline.empty() && map_baseline != "random-phase")
                throw InputError("give exactly one of --solution or --baseline (random-phase also needs --solution)");
            if (map_baseline == "random-phase" && map_solution.empty())
                throw InputError("--baseline random-phase needs --solution for the RIS selection");
            ScenarioInputs in;
            if (!map_config.empty())
                in = load_config(map_config, 16);
            const ChannelSet set = load_channels(map_channels);
            const auto &d = set.dims();

            DeploymentSolution sol;
            if (!map_solution.empty())
            {
                sol = solution_from_json(read_file(map_solution));
                if (static_cast<int>(sol.alpha.size()) != d.L || static_cast<int>(sol.tau.size()) != d.K ||
                    (d.L > 0 && sol.phases.M() != d.M))
                    throw InputError("solution " + map_solution + " does not match the channel dimensions (K=" +
                                     std::to_string(d.K) + " L=" + std::to_string(d.L) + " M=" + std::to_string(d.M) + ")");
            }
            if (map_baseline == "no-ris")
            {
                sol.alpha.assign(d.L, false);
                sol.phases = PhaseConfig(d.L, d.K, d.M);
                sol.tau.assign(d.K, 1.0 / d.K);
            }
            else if (map_baseline == "random-phase")
                sol.phases = random_phases(map_seed, d.L, d.K, d.M);

            manifest.begin_stage("evaluate");
            const std::vector<double> thresholds(d.K, map_threshold);
            const auto report = evaluate_solution(set, sol, in.radio, thresholds);
            auto f = open_out(map_out);
            write_report_csv(f, report);
            manifest.add_output(map_out);
            out << "wrote " << map_out << '\n';
            manifest.finalize(ExitSuccess);
            return ExitSuccess;
        }
        catch (const InputError &e)
        {
            err << "error: " << e.what() << '\n';
            manifest.finalize(ExitInputError, e.what());
            return ExitInputError;
        }
        catch (const CirFormatError &e)
        {
            err << "error: " << e.what() << '\n';
            manifest.finalize(ExitInputError, e.what());
            return ExitInputError;
        }
        catch (const std::invalid_argument &e)
        {
            err << "error: " << e.what() << '\n';
            manifest.finalize(ExitInputError, e.what());
            return ExitInputError;
        }
        catch (const std::exception &e)
        {
            err << "internal error: " << e.what() << '\n';
            manifest.finalize(ExitInternalError, e.what());
            return ExitInternalError;
        }
    }
}
