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
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>

namespace risdeploy
{
    namespace
    {
        struct QueueEntry
        {
            BnbNode node;
            long order = 0;
        };

        struct WorseFirst
        {
            bool operator()(const QueueEntry &a, const QueueEntry &b) const
            {
                if (a.node.relaxation_bound != b.node.relaxation_bound)
                    return a.node.relaxation_bound > b.node.relaxation_bound;
                return a.order > b.order;
            }
        };

        ConicSolution solve_node(ConicProgram &prog, const BnbNode &node, const SolverSettings &settings)
        {
            for (int v : node.fixed_zero)
                prog.fix(v, 0.0);
            for (int v : node.fixed_one)
                prog.fix(v, 1.0);
            ConicSolution sol = solve(prog, settings);
            for (int v : node.fixed_zero)
                prog.unfix(v);
            for (int v : node.fixed_one)
                prog.unfix(v);
            return sol;
        }

        // a stalled solve still counts when it is feasible and its certified gap is within the search tolerance
        bool usable(const ConicSolution &sol, const BnbSettings &settings)
        {
            if (sol.status == SolveStatus::Optimal)
                return true;
            return (sol.status == SolveStatus::NumericalFailure || sol.status == SolveStatus::IterLimit) &&
                   !sol.primal.empty() && sol.max_cone_violation <= settings.solver.feas_tol &&
                   sol.rel_gap * std::max(1.0, std::abs(sol.objective_value)) <= 0.1 * settings.gap_tol;
        }
    }

    BnbResult branch_and_bound(const ConicProgram &input, const BnbSettings &settings)
    {
        if (input.binary_marks().empty())
            throw std::invalid_argument("branch_and_bound: program has no binary marks");
        ConicProgram prog = input;
        std::vector<int> binaries = prog.binary_marks();
        std::sort(binaries.begin(), binaries.end());
        const double integral_tol = 1e-6;

        BnbResult result;
        std::optional<ConicSolution> incumbent;

        auto base_node = [&]() {
            BnbNode n;
            for (const auto &[v, val] : prog.fixings())
                if (std::find(binaries.begin(), binaries.end(), v) != binaries.end())
                    (val > 0.5 ? n.fixed_one : n.fixed_zero).push_back(v);
            return n;
        };

        // Integral point: re-solve with every binary pinned so the returned values are exactly 0 or 1.
        auto offer = [&](const BnbNode &node, const ConicSolution &sol) {
            BnbNode pinned = node;
            for (int v : binaries)
            {
                if (std::find(node.fixed_zero.begin(), node.fixed_zero.end(), v) != node.fixed_zero.end() ||
                    std::find(node.fixed_one.begin(), node.fixed_one.end(), v) != node.fixed_one.end())
                    continue;
                (sol.primal[v] > 0.5 ? pinned.fixed_one : pinned.fixed_zero).push_back(v);
            }
            ConicSolution snapped = solve_node(prog, pinned, settings.solver);
            ++result.nodes;
            if (!usable(snapped, settings))
                return;
            if (!incumbent || snapped.objective_value < incumbent->objective_value)
                incumbent = snapped;
        };

        auto branching_variable = [&](const ConicSolution &sol) {
            int best = -1;
            double best_frac = integral_tol;
            for (int v : binaries)
            {
                const double frac = std::min(sol.primal[v], 1.0 - sol.primal[v]);
                if (frac > best_frac + 1e-12)
                {
                    best_frac = frac;
                    best = v;
                }
            }
            return best;
        };

        std::priority_queue<QueueEntry, std::vector<QueueEntry>, WorseFirst> open;
        long order = 0;
        BnbNode root = base_node();
        root.relaxation_bound = -std::numeric_limits<double>::infinity();
        open.push({root, order++});
        bool root_done = false;
        bool limit_hit = false;

        while (!open.empty())
        {
            if (result.nodes >= settings.node_limit)
            {
                limit_hit = true;
                break;
            }
            QueueEntry entry = open.top();
            open.pop();
            if (incumbent && entry.node.relaxation_bound >= incumbent->objective_value - settings.gap_tol)
                continue;

            ConicSolution sol = solve_node(prog, entry.node, settings.solver);
            ++result.nodes;
            if (!usable(sol, settings))
            {
                if (sol.status != SolveStatus::Infeasible)
                    ++result.unreliable_nodes;
                if (!root_done && sol.status == SolveStatus::Unbounded)
                {
                    result.solution = sol;
                    return result;
                }
                root_done = true;
                continue;
            }
            if (incumbent && sol.objective_value >= incumbent->objective_value - settings.gap_tol)
            {
                root_done = true;
                continue;
            }

            const int branch = branching_variable(sol);
            if (branch < 0)
            {
                offer(entry.node, sol);
                root_done = true;
                continue;
            }

            if (!root_done && settings.rounding_heuristic)
            {
                BnbNode rounded = entry.node;
                for (int v : binaries)
                    if (sol.primal[v] > integral_tol)
                        rounded.fixed_one.push_back(v);
                    else
                        rounded.fixed_zero.push_back(v);
                offer(rounded, sol);
            }
            root_done = true;

            BnbNode down = entry.node, up = entry.node;
            down.fixed_zero.push_back(branch);
            up.fixed_one.push_back(branch);
            down.depth = up.depth = entry.node.depth + 1;
            down.relaxation_bound = up.relaxation_bound = sol.objective_value;
            // ties pop in insertion order: the rounded-up child first
            open.push({up, order++});
            open.push({down, order++});
        }

        if (incumbent)
        {
            result.solution = *incumbent;
            if (limit_hit)
                result.solution.status = SolveStatus::IterLimit;
        }
        else
        {
            result.solution.status = limit_hit ? SolveStatus::IterLimit
                                     : result.unreliable_nodes > 0 ? SolveStatus::NumericalFailure
                                                                   : SolveStatus::Infeasible;
        }
        return result;
    }
}
