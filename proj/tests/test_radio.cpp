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

#include "catch_amalgamated.hpp"

#include "oracles.hpp"
#include "risdeploy/radio.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace risdeploy;

namespace
{
    DeploymentSolution no_ris_solution(const ChannelSet &set, double tau_each)
    {
        const auto d = set.dims();
        DeploymentSolution sol;
        sol.alpha.assign(d.L, false);
        sol.phases = PhaseConfig(d.L, d.K, d.M);
        sol.tau.assign(d.K, tau_each);
        return sol;
    }
}

TEST_CASE("effective channel")
{
    std::mt19937_64 rng(31);
    const ChannelSet set = oracle::random_set(rng, 2, 2, 3, 2, 1.0, {1});
    const PhaseConfig ph = random_phases(4, 2, 2, 3);

    CHECK(effective_channel(set, ph, {false, false}, 0) == set.direct(0));

    for (int k = 0; k < 2; ++k)
    {
        std::vector<CVec> phi{ph.at(0, k), ph.at(1, k)};
        const CVec ref = oracle::naive_effective(set, k, {true, true}, phi);
        CHECK((effective_channel(set, ph, {true, true}, k) - ref).norm() <= 1e-12 * ref.norm());
    }

    // zero direct, one single-element RIS with unit phase: the cascade column
    std::vector<CVec> direct{CVec::Zero(2)};
    std::vector<CMat> bs_ris{oracle::random_cmat(rng, 1, 2)};
    std::vector<std::vector<CVec>> ris_ue{{oracle::random_cvec(rng, 1)}};
    const ChannelSet single(direct, bs_ris, ris_ue);
    const CVec eff = effective_channel(single, PhaseConfig(1, 1, 1), {true}, 0);
    CHECK(eff == single.cascaded(0, 0).col(0));

    std::vector<CVec> bad_phases{CVec::Ones(2), CVec::Ones(3)};
    CHECK_THROWS_AS(effective_channel(set.direct(0), set.cascaded_row(0), bad_phases, {true, true}),
                    std::invalid_argument);
}

TEST_CASE("MRT precoder")
{
    CVec e1 = CVec::Zero(4);
    e1(0) = 1.0;
    CHECK((mrt_precoder(e1) - e1).norm() == 0.0);
    CHECK_THROWS_AS(mrt_precoder(CVec::Zero(3)), OutageError);

    std::mt19937_64 rng(32);
    for (int i = 0; i < 20; ++i)
    {
        const CVec h = oracle::random_cvec(rng, 5);
        const CVec w = mrt_precoder(h);
        CHECK(std::abs(w.norm() - 1.0) <= 1e-12);
        const double best = std::norm(h.transpose().dot(w.conjugate()));
        for (int j = 0; j < 1000; ++j)
        {
            const CVec v = oracle::random_cvec(rng, 5).normalized();
            CHECK(std::norm(h.transpose().dot(v.conjugate())) <= best * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("SNR and rate formulas")
{
    RadioConfig radio;
    CHECK(snr(CVec::Zero(3), radio) == 0.0);
    CVec unit = CVec::Zero(2);
    unit(0) = std::sqrt(radio.noise_scale());
    CHECK(snr(unit, radio) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(snr_to_db(1.0) == 0.0);
    CHECK(std::isinf(snr_to_db(0.0)));
    CHECK(snr_to_db(0.0) < 0.0);

    RadioConfig louder = radio;
    louder.tx_power_dbm = radio.tx_power_dbm + 10.0 * std::log10(2.0);
    CHECK(snr(unit, louder) == Catch::Approx(2.0).epsilon(1e-12));

    CHECK(rate(0.0, 5.0, radio) == 0.0);
    CHECK(rate(1.0, 1.0, radio) == Catch::Approx(1e9).epsilon(1e-15));
    CHECK(rate(0.5, 3.0, radio) == Catch::Approx(1e9).epsilon(1e-15));

    // global phase rotation leaves the SNR unchanged
    std::mt19937_64 rng(33);
    const CVec h = oracle::random_cvec(rng, 4, 1e-5);
    CHECK(snr(h * std::polar(1.0, 1.234), radio) == Catch::Approx(snr(h, radio)).epsilon(1e-12));
}

TEST_CASE("rate is monotone in each argument")
{
    RadioConfig radio;
    RadioConfig wider = radio;
    wider.bandwidth_hz *= 1.5;
    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i)
    {
        const double tau = u(rng), s = 100.0 * u(rng);
        CHECK(rate(std::min(1.0, tau + 0.1), s, radio) >= rate(tau, s, radio));
        CHECK(rate(tau, s + 1.0, radio) >= rate(tau, s, radio));
        CHECK(rate(tau, s, wider) >= rate(tau, s, radio));
    }
}

TEST_CASE("single-antenna alignment")
{
    // already aligned: positive real entries
    std::vector<CVec> direct{CVec::Constant(1, 2.0)};
    std::vector<CMat> bs_ris{CMat::Constant(3, 1, 1.5)};
    std::vector<std::vector<CVec>> ris_ue{{CVec::Constant(3, 0.5)}};
    const ChannelSet aligned(direct, bs_ris, ris_ue);
    const auto phases = aligned_phases_single_antenna(aligned.direct(0)(0), aligned.cascaded_row(0), {true});
    for (int m = 0; m < 3; ++m)
        CHECK(std::abs(phases[0](m) - cd(1.0, 0.0)) < 1e-15);

    std::mt19937_64 rng(35);
    for (int inst = 0; inst < 20; ++inst)
    {
        const ChannelSet set = oracle::random_set(rng, 1, 3, 2, 1, 1.0, inst % 4 == 0 ? std::vector<int>{0} : std::vector<int>{});
        const std::vector<bool> alpha{true, inst % 2 == 0, true};
        const auto phi = aligned_phases_single_antenna(set.direct(0)(0), set.cascaded_row(0), alpha);
        const CVec eff = effective_channel(set.direct(0), set.cascaded_row(0), phi, alpha);
        const double target = oracle::aligned_modulus(set, 0, alpha);
        CHECK(std::abs(std::abs(eff(0)) - target) <= 1e-9 * std::max(1.0, target));
        for (int s = 0; s < 1000; ++s)
        {
            std::vector<CVec> rnd;
            for (int l = 0; l < 3; ++l)
                rnd.push_back(oracle::random_unit_modulus(rng, 2));
            CHECK(std::abs(effective_channel(set.direct(0), set.cascaded_row(0), rnd, alpha)(0)) <=
                  std::abs(eff(0)) * (1.0 + 1e-12));
        }
    }

    const ChannelSet multi = oracle::random_set(rng, 1, 1, 2, 2, 1.0);
    CHECK_THROWS_AS(aligned_phases_single_antenna(multi.direct(0)(0), multi.cascaded_row(0), {true}),
                    std::invalid_argument);
}

TEST_CASE("random phases")
{
    const PhaseConfig a = random_phases(7, 2, 3, 4);
    CHECK(a == random_phases(7, 2, 3, 4));
    CHECK_FALSE(a == random_phases(8, 2, 3, 4));
    CHECK(a.max_modulus_error() <= 1e-12);
    for (int l = 0; l < 2; ++l)
        for (int k = 0; k < 3; ++k)
            for (int m = 0; m < 4; ++m)
            {
                const double ang = a.angle(l, k, m);
                CHECK(ang >= 0.0);
                CHECK(ang < kTwoPi);
                CHECK(std::abs(std::polar(1.0, -ang) - a.at(l, k)(m)) < 1e-12);
            }

    const PhaseConfig big = random_phases(1, 1, 1, 100000);
    CHECK(std::abs(big.at(0, 0).mean()) < 0.02);
}

TEST_CASE("evaluation and certification")
{
    const RadioConfig radio;
    std::mt19937_64 rng(36);
    const double amp = std::sqrt(radio.noise_scale());
    const ChannelSet set = oracle::random_set(rng, 3, 2, 2, 1, amp, {2});

    DeploymentSolution none = no_ris_solution(set, 1.0 / 3.0);
    const auto zero_report = evaluate_solution(set, none, radio, std::vector<double>(3, 0.0));
    CHECK(all_feasible(zero_report));
    CHECK(all_feasible(evaluate_solution(set, none, radio)));

    const auto report = evaluate_solution(set, none, radio, std::vector<double>(3, 1.0));
    CHECK_FALSE(report[2].feasible);
    CHECK(std::isinf(report[2].snr_db));
    CHECK(report[2].rate_bps == 0.0);
    CHECK(report[0].feasible);
    CHECK(report == evaluate_solution(set, none, radio, std::vector<double>(3, 1.0)));

    // feasibility boundary uses the relative allowance
    const double r0 = report[0].rate_bps;
    std::vector<double> tight{r0 * (1.0 + 0.5e-6), 0.0, 0.0};
    CHECK(evaluate_solution(set, none, radio, tight)[0].feasible);
    tight[0] = r0 * (1.0 + 2e-6);
    CHECK_FALSE(evaluate_solution(set, none, radio, tight)[0].feasible);

    certify(set, none, radio);
    REQUIRE(none.certified_rates.size() == 3);
    CHECK(none.certified_rates[0] == r0);
    CHECK(std::isinf(none.certified_snr_db[2]));

    DeploymentSolution with = none;
    with.alpha = {true, false};
    with.phases.at(0, 2) = CVec::Ones(2);
    certify(set, with, radio);
    CHECK(with.certified_rates[2] > 0.0);
    CHECK(with.num_selected() == 1);
    CHECK(with.selected_indices() == std::vector<int>{0});
}

TEST_CASE("report CSV round trip")
{
    std::vector<UeReport> rows{{0, 12.5, 1.25e8, 0.25, true},
                               {1, -std::numeric_limits<double>::infinity(), 0.0, 0.5, false},
                               {2, 0.1 + 0.2, 3.3e7, 0.25, true}};
    std::stringstream ss;
    write_report_csv(ss, rows);
    CHECK(ss.str().rfind("ue_index,snr_db,rate_bps,tau,feasible\n", 0) == 0);
    CHECK(read_report_csv(ss) == rows);

    std::stringstream bad("ue_index,snr_db\n1,2\n");
    CHECK_THROWS(read_report_csv(bad));
}
