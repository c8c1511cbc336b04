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

#include "risdeploy/radio.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

namespace risdeploy
{
    PhaseConfig::PhaseConfig(int L, int K, int M)
        : L_(L), K_(K), M_(M), phi_(static_cast<std::size_t>(L) * K, CVec::Ones(M))
    {
    }

    double PhaseConfig::angle(int l, int k, int m) const
    {
        double a = -std::arg(at(l, k)(m));
        if (a < 0.0)
            a += kTwoPi;
        if (a >= kTwoPi)
            a -= kTwoPi;
        return a;
    }

    double PhaseConfig::max_modulus_error() const
    {
        double worst = 0.0;
        for (const auto &v : phi_)
            for (Eigen::Index m = 0; m < v.size(); ++m)
                worst = std::max(worst, std::abs(std::abs(v(m)) - 1.0));
        return worst;
    }

    int DeploymentSolution::num_selected() const
    {
        return static_cast<int>(std::count(alpha.begin(), alpha.end(), true));
    }

    std::vector<int> DeploymentSolution::selected_indices() const
    {
        std::vector<int> out;
        for (std::size_t l = 0; l < alpha.size(); ++l)
            if (alpha[l])
                out.push_back(static_cast<int>(l));
        return out;
    }

    CVec effective_channel(const CVec &direct, std::span<const CMat> cascaded_row, std::span<const CVec> phases,
                           const std::vector<bool> &alpha)
    {
        if (cascaded_row.size() != alpha.size() || phases.size() != alpha.size())
            throw std::invalid_argument("effective_channel: need one cascaded channel and phase vector per candidate");
        CVec eff = direct;
        for (std::size_t l = 0; l < alpha.size(); ++l)
        {
            if (!alpha[l])
                continue;
            const CMat &H = cascaded_row[l];
            if (H.rows() != direct.size() || H.cols() != phases[l].size())
                throw std::invalid_argument("effective_channel: dimension mismatch for candidate " + std::to_string(l));
            eff.noalias() += H * phases[l];
        }
        return eff;
    }

    CVec effective_channel(const ChannelSet &set, const PhaseConfig &phases, const std::vector<bool> &alpha, int k)
    {
        return effective_channel(set.direct(k), set.cascaded_row(k), phases.row(k), alpha);
    }

    CVec mrt_precoder(const CVec &effective)
    {
        const double norm = effective.norm();
        if (norm == 0.0)
            throw OutageError("mrt_precoder: UE in outage (zero effective channel)");
        return effective.conjugate() / norm;
    }

    double snr(const CVec &effective, const RadioConfig &radio)
    {
        return effective.squaredNorm() / radio.noise_scale();
    }

    double rate(double tau, double snr_linear, const RadioConfig &radio)
    {
        return tau * radio.bandwidth_hz * std::log2(1.0 + snr_linear);
    }

    double snr_to_db(double snr_linear)
    {
        if (snr_linear <= 0.0)
            return -std::numeric_limits<double>::infinity();
        return 10.0 * std::log10(snr_linear);
    }

    std::vector<CVec> aligned_phases_single_antenna(cd direct, std::span<const CMat> cascaded_row,
                                                    const std::vector<bool> &alpha)
    {
        if (cascaded_row.size() != alpha.size())
            throw std::invalid_argument("aligned_phases_single_antenna: one cascaded channel per candidate required");
        std::vector<CVec> out;
        out.reserve(alpha.size());
        const double reference = direct == 0.0 ? 0.0 : std::arg(direct);
        for (std::size_t l = 0; l < alpha.size(); ++l)
        {
            const CMat &H = cascaded_row[l];
            if (H.rows() != 1)
                throw std::invalid_argument("aligned_phases_single_antenna: requires a single-antenna BS (N = 1)");
            CVec phi = CVec::Ones(H.cols());
            if (alpha[l])
                for (Eigen::Index m = 0; m < H.cols(); ++m)
                    phi(m) = std::polar(1.0, reference - std::arg(H(0, m)));
            out.push_back(std::move(phi));
        }
        return out;
    }

    PhaseConfig random_phases(std::uint64_t seed, int L, int K, int M)
    {
        PhaseConfig cfg(L, K, M);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> uni(0.0, kTwoPi);
        for (int k = 0; k < K; ++k)
            for (int l = 0; l < L; ++l)
                for (int m = 0; m < M; ++m)
                    cfg.at(l, k)(m) = std::polar(1.0, -uni(rng));
        return cfg;
    }

    std::vector<UeReport> evaluate_solution(const ChannelSet &set, const DeploymentSolution &sol,
                                            const RadioConfig &radio, std::span<const double> thresholds)
    {
        const auto &d = set.dims();
        if (static_cast<int>(sol.alpha.size()) != d.L || static_cast<int>(sol.tau.size()) != d.K ||
            sol.phases.L() != d.L || sol.phases.K() != d.K || (d.L > 0 && sol.phases.M() != d.M))
            throw std::invalid_argument("evaluate_solution: solution dimensions do not match the channel set");
        if (!thresholds.empty() && static_cast<int>(thresholds.size()) != d.K)
            throw std::invalid_argument("evaluate_solution: one threshold per UE required");

        std::vector<UeReport> out(d.K);
        for (int k = 0; k < d.K; ++k)
        {
            const double s = snr(effective_channel(set, sol.phases, sol.alpha, k), radio);
            const double r = rate(sol.tau[k], s, radio);
            const double target = thresholds.empty() ? 0.0 : thresholds[k];
            out[k] = {k, snr_to_db(s), r, sol.tau[k], r >= target - 1e-6 * target};
        }
        return out;
    }

    void certify(const ChannelSet &set, DeploymentSolution &sol, const RadioConfig &radio)
    {
        const auto report = evaluate_solution(set, sol, radio);
        sol.certified_rates.resize(report.size());
        sol.certified_snr_db.resize(report.size());
        for (std::size_t k = 0; k < report.size(); ++k)
        {
            sol.certified_rates[k] = report[k].rate_bps;
            sol.certified_snr_db[k] = report[k].snr_db;
        }
    }

    bool all_feasible(const std::vector<UeReport> &report)
    {
        return std::all_of(report.begin(), report.end(), [](const UeReport &r) { return r.feasible; });
    }

    namespace
    {
        std::string format_double(double v)
        {
            if (std::isinf(v))
                return v < 0 ? "-inf" : "inf";
            char buf[64];
            const auto res = std::to_chars(buf, buf + sizeof(buf), v);
            return std::string(buf, res.ptr);
        }

        double parse_double_field(const std::string &s)
        {
            if (s == "-inf")
                return -std::numeric_limits<double>::infinity();
            if (s == "inf")
                return std::numeric_limits<double>::infinity();
            double v = 0.0;
            const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
            if (res.ec != std::errc() || res.ptr != s.data() + s.size())
                throw std::invalid_argument("report CSV: bad number '" + s + "'");
            return v;
        }
    }

    void write_report_csv(std::ostream &out, const std::vector<UeReport> &report)
    {
        out << "ue_index,snr_db,rate_bps,tau,feasible\n";
        for (const auto &r : report)
            out << r.ue_index << ',' << format_double(r.snr_db) << ',' << format_double(r.rate_bps) << ','
                << format_double(r.tau) << ',' << (r.feasible ? 1 : 0) << '\n';
    }

    std::vector<UeReport> read_report_csv(std::istream &in)
    {
        std::string line;
        if (!std::getline(in, line) || line != "ue_index,snr_db,rate_bps,tau,feasible")
            throw std::invalid_argument("report CSV: missing header");
        std::vector<UeReport> out;
        while (std::getline(in, line))
        {
            if (line.empty())
                continue;
            std::vector<std::string> f;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ','))
                f.push_back(cell);
            if (f.size() != 5)
                throw std::invalid_argument("report CSV: expected 5 fields in '" + line + "'");
            out.push_back({std::stoi(f[0]), parse_double_field(f[1]), parse_double_field(f[2]),
                           parse_double_field(f[3]), f[4] == "1"});
        }
        return out;
    }
}
