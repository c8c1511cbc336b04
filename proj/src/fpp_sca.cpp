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

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

namespace risdeploy
{
    namespace
    {
        CVec random_unit_vector(std::mt19937_64 &rng, Eigen::Index n)
        {
            std::uniform_real_distribution<double> uni(0.0, kTwoPi);
            CVec v(n);
            for (Eigen::Index i = 0; i < n; ++i)
                v(i) = std::polar(1.0, uni(rng));
            return v;
        }

        PhaseConfig phases_from_z(const std::vector<CVec> &z, const std::vector<bool> &alpha, int M)
        {
            const int K = static_cast<int>(z.size());
            const int L = static_cast<int>(alpha.size());
            PhaseConfig phases(L, K, M);
            for (int k = 0; k < K; ++k)
                for (int l = 0; l < L; ++l)
                {
                    if (!alpha[l])
                        continue;
                    for (int m = 0; m < M; ++m)
                    {
                        const cd v = z[k](static_cast<Eigen::Index>(l) * M + m);
                        const double mag = std::abs(v);
                        phases.at(l, k)(m) = mag > 0.0 ? v / mag : cd(1.0, 0.0);
                    }
                }
            return phases;
        }

        std::string fmt(double v)
        {
            char buf[64];
            const auto res = std::to_chars(buf, buf + sizeof(buf), v);
            return std::string(buf, res.ptr);
        }
    }

    std::optional<std::vector<double>> repair_time_shares(const ChannelSet &set, const DeploymentSolution &sol,
                                                          std::span<const double> thresholds,
                                                          const RadioConfig &radio)
    {
        const int K = set.dims().K;
        if (static_cast<int>(thresholds.size()) != K)
            throw std::invalid_argument("repair_time_shares: one threshold per UE required");
        std::vector<double> tau(K, 0.0);
        double used = 0.0;
        for (int k = 0; k < K; ++k)
        {
            if (thresholds[k] == 0.0)
                continue;
            const double spectral = std::log2(1.0 + snr(effective_channel(set, sol.phases, sol.alpha, k), radio));
            if (!(spectral > 0.0))
                return std::nullopt;
            tau[k] = thresholds[k] / (radio.bandwidth_hz * spectral);
            used += tau[k];
        }
        if (used > 1.0)
            return std::nullopt;
        const double spare = (1.0 - used) / K;
        for (double &t : tau)
            t += spare;
        return tau;
    }

    FppScaResult fpp_sca(const ChannelSet &set, std::span<const double> thresholds, const RadioConfig &radio,
                         const FppScaConfig &config)
    {
        const auto &dims = set.dims();
        if (static_cast<int>(thresholds.size()) != dims.K)
            throw std::invalid_argument("fpp_sca: one threshold per UE required");
        for (double t : thresholds)
            if (!(t >= 0.0) || !std::isfinite(t))
                throw std::invalid_argument("fpp_sca: thresholds must be finite and nonnegative");
        if (!(config.omega > 0.0) || !(config.epsilon > 0.0) || config.max_iters < 0)
            throw std::invalid_argument("fpp_sca: need omega > 0, epsilon > 0 and max_iters >= 0");

        FppScaResult out;
        ScaState &state = out.state;
        state.omega = config.omega;
        state.epsilon = config.epsilon;
        state.max_iters = config.max_iters;

        const QuadData quad(set);
        std::mt19937_64 rng(config.seed);
        for (int k = 0; k < dims.K; ++k)
            state.z.push_back(random_unit_vector(rng, quad.LM()));

        if (config.max_iters == 0)
        {
            out.failure = "max_iters is 0: no iteration was run";
            return out;
        }

        std::optional<DeploymentSolution> best;
        DeploymentSolution last;
        bool have_last = false;
        double previous_objective = std::numeric_limits<double>::quiet_NaN();
        P3Options p3opt;
        p3opt.omega = config.omega;
        p3opt.explicit_z = config.explicit_z;

        for (int it = 1; it <= config.max_iters; ++it)
        {
            // a UE whose linearization point cancels its whole channel has no usable gradient
            for (int k = 0; k < dims.K; ++k)
                if ((quad.apply_H(k, state.z[k]) + quad.direct(k)).squaredNorm() == 0.0)
                    state.z[k] = random_unit_vector(rng, quad.LM());

            const P3Program p3 = build_p3(quad, state.z, thresholds, radio, p3opt);
            const BnbResult bnb = branch_and_bound(p3.prog, config.bnb);
            const ConicSolution &sol = bnb.solution;
            if (sol.primal.empty() || (sol.status != SolveStatus::Optimal && sol.status != SolveStatus::IterLimit))
            {
                out.failure = "iteration " + std::to_string(it) + ": subproblem " + to_string(sol.status);
                break;
            }

            std::vector<bool> alpha(dims.L);
            for (int l = 0; l < dims.L; ++l)
                alpha[l] = sol.primal[p3.alpha[l]] > 0.5;
            const std::vector<CVec> raw = recover_z(p3, sol.primal, dims.M);
            std::vector<CVec> z_new;
            double change = 0.0;
            double sum_slack = 0.0;
            for (int k = 0; k < dims.K; ++k)
            {
                z_new.push_back(normalize_z(raw[k], alpha, dims.M, config.normalize_delta));
                change += (z_new[k] - state.z[k]).squaredNorm();
                sum_slack += std::max(0.0, sol.primal[p3.s[k]]);
            }

            DeploymentSolution cand;
            cand.alpha = alpha;
            cand.phases = phases_from_z(z_new, alpha, dims.M);
            for (int k = 0; k < dims.K; ++k)
                cand.tau.push_back(std::max(0.0, sol.primal[p3.tau[k]]));
            certify(set, cand, radio);
            const auto report = evaluate_solution(set, cand, radio, thresholds);

            state.r = it;
            state.slack_trace.push_back(sum_slack);
            state.objective_trace.push_back(sol.objective_value);
            state.rate_trace.push_back(cand.certified_rates);
            state.min_rate_trace.push_back(cand.certified_rates.empty()
                                               ? 0.0
                                               : *std::min_element(cand.certified_rates.begin(),
                                                                   cand.certified_rates.end()));
            state.selected_trace.push_back(cand.num_selected());
            state.z = z_new;
            out.iterations = it;

            if (all_feasible(report) && (!best || cand.num_selected() <= best->num_selected()))
                best = cand;
            last = cand;
            have_last = true;

            const bool stalled = sum_slack <= 1e-8 && std::isfinite(previous_objective) &&
                                 std::abs(sol.objective_value - previous_objective) <=
                                     1e-9 * std::max(1.0, std::abs(sol.objective_value));
            previous_objective = sol.objective_value;
            if (change <= config.epsilon || stalled)
            {
                out.converged = true;
                break;
            }
        }

        if (out.converged && have_last)
        {
            auto report = evaluate_solution(set, last, radio, thresholds);
            if (!all_feasible(report))
            {
                if (auto tau = repair_time_shares(set, last, thresholds, radio))
                {
                    last.tau = *tau;
                    certify(set, last, radio);
                    report = evaluate_solution(set, last, radio, thresholds);
                    out.repaired = all_feasible(report);
                }
            }
            if (all_feasible(report) && (!best || last.num_selected() <= best->num_selected()))
                best = last;
        }

        if (best)
        {
            // unused frame time goes to every UE equally; rates can only grow
            double used = 0.0;
            for (double t : best->tau)
                used += t;
            if (used < 1.0 && !best->tau.empty())
            {
                const double extra = (1.0 - used) / static_cast<double>(best->tau.size());
                for (double &t : best->tau)
                    t = std::min(1.0, t + extra);
                certify(set, *best, radio);
            }
            out.solution = *best;
            out.report = evaluate_solution(set, out.solution, radio, thresholds);
            out.success = true;
            out.failure.clear();
            return out;
        }
        if (out.failure.empty())
        {
            out.failure = out.converged ? "converged without a certified-feasible deployment"
                                        : "max_iters reached without a certified-feasible deployment";
            if (!state.slack_trace.empty())
                out.failure += " (final slack " + fmt(state.slack_trace.back()) + ")";
        }
        if (have_last)
        {
            out.solution = last;
            out.report = evaluate_solution(set, last, radio, thresholds);
        }
        return out;
    }

    void write_convergence_csv(std::ostream &out, const ScaState &state)
    {
        out << "iter,sum_slack,objective,min_rate_bps,num_selected_ris\n";
        for (std::size_t i = 0; i < state.slack_trace.size(); ++i)
            out << (i + 1) << ',' << fmt(state.slack_trace[i]) << ',' << fmt(state.objective_trace[i]) << ','
                << fmt(state.min_rate_trace[i]) << ',' << state.selected_trace[i] << '\n';
    }

    std::string solution_to_json(const DeploymentSolution &sol)
    {
        nlohmann::json doc;
        doc["num_candidates"] = sol.alpha.size();
        doc["num_ues"] = sol.tau.size();
        doc["elements"] = sol.phases.M();
        doc["selected"] = sol.selected_indices();
        doc["tau"] = sol.tau;
        nlohmann::json phases = nlohmann::json::array();
        for (int l : sol.selected_indices())
            for (int k = 0; k < sol.phases.K(); ++k)
            {
                std::vector<double> rad(sol.phases.M());
                for (int m = 0; m < sol.phases.M(); ++m)
                    rad[m] = sol.phases.angle(l, k, m);
                phases.push_back({{"ris", l}, {"ue", k}, {"radians", rad}});
            }
        doc["phases"] = std::move(phases);
        if (!sol.certified_rates.empty())
            doc["certified_rates_bps"] = sol.certified_rates;
        return doc.dump(1);
    }

    DeploymentSolution solution_from_json(const std::string &text)
    {
        DeploymentSolution sol;
        try
        {
            const auto doc = nlohmann::json::parse(text);
            const int L = doc.at("num_candidates").get<int>();
            const int K = doc.at("num_ues").get<int>();
            const int M = doc.at("elements").get<int>();
            if (L < 0 || K < 0 || M < 0)
                throw std::invalid_argument("solution document: negative dimensions");
            sol.alpha.assign(L, false);
            for (int l : doc.at("selected").get<std::vector<int>>())
            {
                if (l < 0 || l >= L)
                    throw std::invalid_argument("solution document: selected index out of range");
                sol.alpha[l] = true;
            }
            sol.tau = doc.at("tau").get<std::vector<double>>();
            if (static_cast<int>(sol.tau.size()) != K)
                throw std::invalid_argument("solution document: tau must have one entry per UE");
            sol.phases = PhaseConfig(L, K, M);
            for (const auto &p : doc.at("phases"))
            {
                const int l = p.at("ris").get<int>(), k = p.at("ue").get<int>();
                const auto rad = p.at("radians").get<std::vector<double>>();
                if (l < 0 || l >= L || k < 0 || k >= K || static_cast<int>(rad.size()) != M)
                    throw std::invalid_argument("solution document: phase entry out of range");
                for (int m = 0; m < M; ++m)
                    sol.phases.at(l, k)(m) = std::polar(1.0, -rad[m]);
            }
            if (doc.contains("certified_rates_bps"))
                sol.certified_rates = doc["certified_rates_bps"].get<std::vector<double>>();
        }
        catch (const nlohmann::json::exception &e)
        {
            throw std::invalid_argument(std::string("solution document: ") + e.what());
        }
        return sol;
    }
}
