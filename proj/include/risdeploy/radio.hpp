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
#include "risdeploy/scene.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

namespace risdeploy
{
    /// Thrown when a precoder is requested for an all-zero effective channel.
    class OutageError : public std::runtime_error
    {
      public:
        using std::runtime_error::runtime_error;
    };

    /// RIS reflection coefficients phi_{l,k,m} = e^{-j varphi_{l,k,m}}, one length-M vector per (l, k).
    class PhaseConfig
    {
      public:
        PhaseConfig() = default;
        PhaseConfig(int L, int K, int M); // all ones

        int L() const { return L_; }
        int K() const { return K_; }
        int M() const { return M_; }

        CVec &at(int l, int k) { return phi_[index(l, k)]; }
        const CVec &at(int l, int k) const { return phi_[index(l, k)]; }

        /// Phase vectors of UE k in candidate order.
        std::span<const CVec> row(int k) const
        {
            return {phi_.data() + static_cast<std::size_t>(k) * L_, static_cast<std::size_t>(L_)};
        }

        /// varphi in [0, 2 pi) for entry (l, k, m).
        double angle(int l, int k, int m) const;

        /// Largest | |phi| - 1 | over all entries.
        double max_modulus_error() const;

        bool operator==(const PhaseConfig &) const = default;

      private:
        std::size_t index(int l, int k) const { return static_cast<std::size_t>(k) * L_ + l; }

        int L_ = 0, K_ = 0, M_ = 0;
        std::vector<CVec> phi_; // k-major
    };

    struct DeploymentSolution
    {
        std::vector<bool> alpha;
        PhaseConfig phases;
        std::vector<double> tau;
        std::vector<double> certified_rates;  // bit/s
        std::vector<double> certified_snr_db; // -inf for outage

        int num_selected() const;
        std::vector<int> selected_indices() const;
    };

    struct UeReport
    {
        int ue_index = 0;
        double snr_db = 0.0;
        double rate_bps = 0.0;
        double tau = 0.0;
        bool feasible = false;

        bool operator==(const UeReport &) const = default;
    };

    /// h_k + sum_l alpha_l H_{l,k} phi_{l,k}. Throws std::invalid_argument on size mismatch.
    CVec effective_channel(const CVec &direct, std::span<const CMat> cascaded_row, std::span<const CVec> phases,
                           const std::vector<bool> &alpha);
    CVec effective_channel(const ChannelSet &set, const PhaseConfig &phases, const std::vector<bool> &alpha, int k);

    /// conj(effective) / ||effective||. Throws OutageError for a zero channel.
    CVec mrt_precoder(const CVec &effective);

    /// ||effective||^2 P / (B N0).
    double snr(const CVec &effective, const RadioConfig &radio);

    /// tau B log2(1 + snr).
    double rate(double tau, double snr_linear, const RadioConfig &radio);

    /// 10 log10(snr), -inf for a zero SNR.
    double snr_to_db(double snr_linear);

    /// Co-phases every selected RIS element with the direct path of a single-antenna BS. Unselected
    /// candidates get all-ones vectors. Throws std::invalid_argument when N > 1.
    std::vector<CVec> aligned_phases_single_antenna(cd direct, std::span<const CMat> cascaded_row,
                                                    const std::vector<bool> &alpha);

    /// Uniform varphi in [0, 2 pi) per entry; reproducible per seed.
    PhaseConfig random_phases(std::uint64_t seed, int L, int K, int M);

    /// Recomputes SNR and rate of every UE from channels, selections, phases and time shares. A UE is
    /// feasible iff rate >= threshold * (1 - 1e-6). Empty thresholds are treated as zeros.
    std::vector<UeReport> evaluate_solution(const ChannelSet &set, const DeploymentSolution &sol,
                                            const RadioConfig &radio, std::span<const double> thresholds = {});

    /// Fills certified_rates / certified_snr_db of a solution from first principles.
    void certify(const ChannelSet &set, DeploymentSolution &sol, const RadioConfig &radio);

    bool all_feasible(const std::vector<UeReport> &report);

    // CSV: ue_index,snr_db,rate_bps,tau,feasible
    void write_report_csv(std::ostream &out, const std::vector<UeReport> &report);
    std::vector<UeReport> read_report_csv(std::istream &in);
}
