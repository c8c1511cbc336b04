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

#include "risdeploy/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace risdeploy
{
    std::vector<SweepRow> run_threshold_sweep(const ChannelSet &set, const std::vector<double> &thresholds,
                                              const RadioConfig &radio, const FppScaConfig &config, int threads,
                                              std::vector<FppScaResult> *runs)
    {
        if (!std::is_sorted(thresholds.begin(), thresholds.end()))
            throw std::invalid_argument("run_threshold_sweep: thresholds must be ascending");
        const std::size_t n = thresholds.size();
        std::vector<SweepRow> rows(n);
        std::vector<FppScaResult> results(n);

        auto run_one = [&](std::size_t i) {
            SweepRow &row = rows[i];
            row.threshold_bps = thresholds[i];
            try
            {
                const std::vector<double> per_ue(set.dims().K, thresholds[i]);
                results[i] = fpp_sca(set, per_ue, radio, config);
                const FppScaResult &res = results[i];
                row.iters = res.iterations;
                row.success = res.success;
                row.failure = res.failure;
                row.final_slack = res.state.slack_trace.empty() ? 0.0 : res.state.slack_trace.back();
                if (!res.solution.alpha.empty())
                {
                    row.num_ris = res.solution.num_selected();
                    row.selected = res.solution.selected_indices();
                }
                if (!res.report.empty())
                {
                    row.min_rate_bps = res.report.front().rate_bps;
                    for (const auto &r : res.report)
                        row.min_rate_bps = std::min(row.min_rate_bps, r.rate_bps);
                }
            }
            catch (const std::exception &e)
            {
                row.success = false;
                row.failure = e.what();
            }
        };

        if (threads <= 1 || n <= 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                run_one(i);
        }
        else
        {
            std::atomic<std::size_t> next{0};
            std::vector<std::thread> pool;
            const auto count = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
            for (std::size_t t = 0; t < count; ++t)
                pool.emplace_back([&] {
                    for (std::size_t i = next++; i < n; i = next++)
                        run_one(i);
                });
            for (auto &th : pool)
                th.join();
        }
        if (runs)
            *runs = std::move(results);
        return rows;
    }

    void write_sweep_csv(std::ostream &out, const std::vector<SweepRow> &rows)
    {
        auto fmt = [](double v) {
            char buf[64];
            const auto res = std::to_chars(buf, buf + sizeof(buf), v);
            return std::string(buf, res.ptr);
        };
        out << "threshold_bps,num_ris,selected_indices,min_rate_bps,iters\n";
        for (const auto &r : rows)
        {
            out << fmt(r.threshold_bps) << ',' << r.num_ris << ',';
            for (std::size_t i = 0; i < r.selected.size(); ++i)
                out << (i ? ";" : "") << r.selected[i];
            out << ',' << fmt(r.min_rate_bps) << ',' << r.iters << '\n';
        }
    }

    std::vector<SweepRow> read_sweep_csv(std::istream &in)
    {
        std::string line;
        if (!std::getline(in, line) || line != "threshold_bps,num_ris,selected_indices,min_rate_bps,iters")
            throw std::invalid_argument("sweep CSV: missing header");
        auto num = [](const std::string &s) {
            double v = 0.0;
            const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
            if (res.ec != std::errc() || res.ptr != s.data() + s.size())
                throw std::invalid_argument("sweep CSV: bad number '" + s + "'");
            return v;
        };
        std::vector<SweepRow> rows;
        while (std::getline(in, line))
        {
            if (line.empty())
                continue;
            std::vector<std::string> f;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ','))
                f.push_back(cell);
            if (line.back() == ',')
                f.emplace_back();
            if (f.size() != 5)
                throw std::invalid_argument("sweep CSV: expected 5 fields in '" + line + "'");
            SweepRow r;
            r.threshold_bps = num(f[0]);
            r.num_ris = static_cast<int>(num(f[1]));
            std::stringstream sel(f[2]);
            while (std::getline(sel, cell, ';'))
                if (!cell.empty())
                    r.selected.push_back(static_cast<int>(num(cell)));
            r.min_rate_bps = num(f[3]);
            r.iters = static_cast<int>(num(f[4]));
            rows.push_back(std::move(r));
        }
        return rows;
    }
}
