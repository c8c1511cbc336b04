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

#pragma once

#include "risdeploy/channel.hpp"
#include "risdeploy/conic.hpp"
#include "risdeploy/radio.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace risdeploy
{
    /// Quadratic expansion ||h_k + H_k z||^2 = z^H A_k z + 2 Re(z^H b_k) + c_k with H_k = [H_{1,k}, ..., H_{L,k}].
    /// z is stacked per candidate: entry l * M + m. A_k is applied as H_k^H (H_k z) and only materialized on request.
    class QuadData
    {
      public:
        explicit QuadData(const ChannelSet &set);

        int K() const { return dims_.K; }
        int L() const { return dims_.L; }
        int M() const { return dims_.M; }
        int N() const { return dims_.N; }
        int LM() const { return dims_.L * dims_.M; }

        /// H_k z
        CVec apply_H(int k, const CVec &z) const;
        /// H_k^H v
        CVec apply_H_adjoint(int k, const CVec &v) const;
        /// A_k z
        CVec apply_A(int k, const CVec &z) const;

        const CVec &b(int k) const { return b_[k]; }
        double c(int k) const { return c_[k]; }
        const CVec &direct(int k) const { return set_->direct(k); }

        /// Dense H_k (N x LM) and A_k (LM x LM).
        CMat H(int k) const;
        CMat A(int k) const;

        /// z^H A_k z + 2 Re(z^H b_k) + c_k
        double expanded_norm2(int k, const CVec &z) const;

      private:
        const ChannelSet *set_;
        ChannelDims dims_;
        std::vector<CVec> b_;
        std::vector<double> c_;
    };

    /// Affine upper bound -2 Re(zeta^H A z) + zeta^H A zeta of -z^H A z for PSD A.
    double linearized_neg_quadratic(const CMat &A, const CVec &zeta, const CVec &z);

    /// Left-hand side of the convexified rate constraint: -2 Re(zeta^H A z) + zeta^H A zeta - 2 Re(z^H b).
    double surrogate_lhs(const QuadData &quad, int k, const CVec &zeta, const CVec &z);
    /// The exact counterpart -z^H A z - 2 Re(z^H b).
    double exact_lhs(const QuadData &quad, int k, const CVec &z);

    /// Entries of selected candidates are pushed onto the unit circle; entries of unselected candidates
    /// and entries with modulus <= delta become exactly zero.
    CVec normalize_z(const CVec &z, const std::vector<bool> &alpha, int M, double delta = 1e-8);

    // ---------------------------------------------------------------------------------------------
    // Per-iteration subproblem

    struct P3Options
    {
        double omega = 100.0;
        /// Keep the complex reflection variables z explicitly (K*L*M modulus cones). When false the inner
        /// maximization over z is done in closed form, leaving one linear row per UE.
        bool explicit_z = false;
        double zero_rate_tau_tilde_cap = 1e6;
    };

    struct P3Program
    {
        ConicProgram prog;
        std::vector<int> alpha, tau, tau_tilde, d, s;
        std::vector<ComplexVariables> z; // explicit form only
        std::vector<CVec> q;             // A_k zeta_k + b_k
        bool explicit_z = false;
    };

    /// zeta holds one length-LM vector per UE. Slack and the linearized row are expressed in SNR units
    /// (divided by B N0 / P). Throws std::invalid_argument on dimension inconsistency.
    P3Program build_p3(const QuadData &quad, const std::vector<CVec> &zeta, std::span<const double> thresholds,
                       const RadioConfig &radio, const P3Options &options = {});

    /// z_k from a P3 solution: read back in explicit form, alpha_l * q / |q| otherwise.
    std::vector<CVec> recover_z(const P3Program &p3, const std::vector<double> &primal, int M);

    // ---------------------------------------------------------------------------------------------
    // Branch-and-bound over the binary marks

    struct BnbNode
    {
        std::vector<int> fixed_zero;
        std::vector<int> fixed_one;
        double relaxation_bound = 0.0;
        int depth = 0;
    };

    struct BnbSettings
    {
        double gap_tol = 1e-6;
        long node_limit = 100000;
        SolverSettings solver;
        bool rounding_heuristic = true;
    };

    struct BnbResult
    {
        ConicSolution solution; // status IterLimit when the node limit stops the search
        long nodes = 0;
        long unreliable_nodes = 0; // relaxations that ended without an optimality certificate
    };

    BnbResult branch_and_bound(const ConicProgram &prog, const BnbSettings &settings = {});

    // ---------------------------------------------------------------------------------------------
    // FPP-SCA

    struct ScaState
    {
        int r = 0;
        std::vector<CVec> z;
        std::vector<double> slack_trace;
        std::vector<double> objective_trace;
        std::vector<std::vector<double>> rate_trace;
        std::vector<double> min_rate_trace;
        std::vector<int> selected_trace;
        double omega = 100.0;
        double epsilon = 1e-3;
        int max_iters = 30;
    };

    struct FppScaConfig
    {
        double omega = 100.0;
        double epsilon = 1e-3;
        int max_iters = 30;
        std::uint64_t seed = 1;
        double normalize_delta = 1e-8;
        bool explicit_z = false;
        BnbSettings bnb;
    };

    struct FppScaResult
    {
        bool success = false;   // returned solution certified feasible
        bool converged = false; // loop stopped by the convergence test
        bool repaired = false;  // time shares recomputed after certification failed
        int iterations = 0;
        DeploymentSolution solution;
        std::vector<UeReport> report;
        ScaState state;
        std::string failure;
    };

    FppScaResult fpp_sca(const ChannelSet &set, std::span<const double> thresholds, const RadioConfig &radio,
                         const FppScaConfig &config = {});

    /// Smallest time shares meeting every threshold for fixed channels, selections and phases, with the
    /// leftover spread evenly. Returns nullopt when they do not fit in one frame.
    std::optional<std::vector<double>> repair_time_shares(const ChannelSet &set, const DeploymentSolution &sol,
                                                          std::span<const double> thresholds,
                                                          const RadioConfig &radio);

    /// Writes iter,sum_slack,objective,min_rate_bps,num_selected_ris.
    void write_convergence_csv(std::ostream &out, const ScaState &state);

    /// Selected indices, per-UE tau and per-(l, k) phase vectors in radians.
    std::string solution_to_json(const DeploymentSolution &sol);
    DeploymentSolution solution_from_json(const std::string &text);

    // ---------------------------------------------------------------------------------------------
    // Threshold sweep

    struct SweepRow
    {
        double threshold_bps = 0.0;
        int num_ris = 0;
        std::vector<int> selected;
        double min_rate_bps = 0.0;
        int iters = 0;
        bool success = false;
        double final_slack = 0.0;
        std::string failure;

        bool operator==(const SweepRow &) const = default;
    };

    /// One fpp_sca run per threshold (applied to every UE). Thresholds must be ascending. Failures are
    /// recorded in the row and the sweep continues. threads > 1 runs thresholds concurrently.
    std::vector<SweepRow> run_threshold_sweep(const ChannelSet &set, const std::vector<double> &thresholds,
                                              const RadioConfig &radio, const FppScaConfig &config,
                                              int threads = 1, std::vector<FppScaResult> *runs = nullptr);

    /// threshold_bps,num_ris,selected_indices,min_rate_bps,iters ; selected indices are ';'-separated.
    void write_sweep_csv(std::ostream &out, const std::vector<SweepRow> &rows);
    std::vector<SweepRow> read_sweep_csv(std::istream &in);
}
