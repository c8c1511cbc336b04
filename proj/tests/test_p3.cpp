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
#include "risdeploy/optimizer.hpp"

#include <cmath>
#include <random>

using namespace risdeploy;

namespace
{
    const RadioConfig kRadio;

    double amplitude() { return std::sqrt(kRadio.noise_scale()); }

    // The linearized rate row of UE k: the nonnegative block that mentions both s_k and d_k.
    const AffineRow &rate_row(const P3Program &p3, int k)
    {
        for (const auto &cone : p3.prog.cones())
        {
            if (cone.kind != ConeKind::Nonnegative || cone.rows.size() != 1)
                continue;
            bool has_s = false, has_d = false;
            for (const auto &[v, coef] : cone.rows[0].terms)
            {
                has_s = has_s || v == p3.s[k];
                has_d = has_d || v == p3.d[k];
            }
            if (has_s && has_d)
                return cone.rows[0];
        }
        throw std::runtime_error("no rate row");
    }
}

TEST_CASE("counting contract of the explicit form")
{
    std::mt19937_64 rng(61);
    const int K = 3, L = 2, M = 4;
    const ChannelSet set = oracle::random_set(rng, K, L, M, 2, amplitude());
    const QuadData quad(set);
    P3Options opt;
    opt.explicit_z = true;
    const P3Program p3 = build_p3(quad, oracle::random_zeta(rng, K, L * M), std::vector<double>(K, 1e8), kRadio, opt);
    CHECK(p3.prog.count_cones(ConeKind::Exponential) == K);
    CHECK(p3.prog.count_cones(ConeKind::SecondOrder) == K * L * M + K);
    CHECK(p3.prog.binary_marks().size() == static_cast<std::size_t>(L));
    CHECK(p3.prog.num_vars() == L + 4 * K + 2 * K * L * M);
    for (int l = 0; l < L; ++l)
        CHECK(p3.prog.objective()[p3.alpha[l]] == 1.0);
    for (int k = 0; k < K; ++k)
        CHECK(p3.prog.objective()[p3.s[k]] == 100.0);
    CHECK_NOTHROW(p3.prog.validate());

    const P3Program compact = build_p3(quad, oracle::random_zeta(rng, K, L * M), std::vector<double>(K, 1e8), kRadio);
    CHECK(compact.prog.count_cones(ConeKind::Exponential) == K);
    CHECK(compact.prog.count_cones(ConeKind::SecondOrder) == K);
    CHECK(compact.prog.num_vars() == L + 4 * K);
}

TEST_CASE("rate row at the linearization point")
{
    std::mt19937_64 rng(62);
    const int K = 2, L = 2, M = 3;
    const ChannelSet set = oracle::random_set(rng, K, L, M, 2, amplitude(), {1});
    const QuadData quad(set);
    const auto zeta = oracle::random_zeta(rng, K, L * M);
    P3Options opt;
    opt.explicit_z = true;
    const P3Program p3 = build_p3(quad, zeta, std::vector<double>(K, 5e7), kRadio, opt);
    const double beta = kRadio.noise_scale();
    for (int k = 0; k < K; ++k)
    {
        std::vector<double> x(static_cast<std::size_t>(p3.prog.num_vars()), 0.0);
        for (int j = 0; j < L * M; ++j)
        {
            x[p3.z[k].parts[j].first] = zeta[k](j).real();
            x[p3.z[k].parts[j].second] = zeta[k](j).imag();
        }
        x[p3.s[k]] = 0.25;
        x[p3.d[k]] = 3.0;
        // at z = zeta the surrogate is exact, so the row is s + 1 - d + ||h + H zeta||^2 / beta
        const double expected = 0.25 + 1.0 - 3.0 + quad.expanded_norm2(k, zeta[k]) / beta;
        CHECK(rate_row(p3, k).value(x) == Catch::Approx(expected).epsilon(1e-10));
        CHECK(surrogate_lhs(quad, k, zeta[k], zeta[k]) ==
              Catch::Approx(exact_lhs(quad, k, zeta[k])).epsilon(1e-12));
    }
}

TEST_CASE("surrogate majorizes the exact left-hand side")
{
    std::mt19937_64 rng(63);
    const ChannelSet set = oracle::random_set(rng, 2, 3, 2, 2, 1.0);
    const QuadData quad(set);
    for (int t = 0; t < 100; ++t)
        for (int k = 0; k < 2; ++k)
        {
            const CVec zeta = oracle::random_cvec(rng, 6);
            const CVec z = oracle::random_cvec(rng, 6);
            const double exact = exact_lhs(quad, k, z);
            CHECK(surrogate_lhs(quad, k, zeta, z) >= exact - 1e-9 * (1.0 + std::abs(exact)));
        }
}

TEST_CASE("compact and explicit forms have the same optimum")
{
    std::mt19937_64 rng(64);
    for (int inst = 0; inst < 4; ++inst)
    {
        const int K = 2, L = 2, M = 2;
        const ChannelSet set = oracle::random_set(rng, K, L, M, 1, amplitude(), {0}, 3.0 * amplitude());
        const QuadData quad(set);
        const auto zeta = oracle::random_zeta(rng, K, L * M);
        const std::vector<double> thr(K, 3e8);
        P3Options opt;
        opt.explicit_z = true;
        const P3Program expl = build_p3(quad, zeta, thr, kRadio, opt);
        const P3Program comp = build_p3(quad, zeta, thr, kRadio);
        const ConicSolution a = solve(expl.prog);
        const ConicSolution b = solve(comp.prog);
        REQUIRE(a.status == SolveStatus::Optimal);
        REQUIRE(b.status == SolveStatus::Optimal);
        CHECK(std::abs(a.objective_value - b.objective_value) <= 1e-6 * std::max(1.0, b.objective_value));

        // the recovered z attains the eliminated inner maximum
        const auto z = recover_z(comp, b.primal, M);
        for (int k = 0; k < K; ++k)
            for (int l = 0; l < L; ++l)
                for (int m = 0; m < M; ++m)
                    CHECK(std::abs(z[k](l * M + m)) <= b.primal[comp.alpha[l]] + 1e-12);
    }
}

TEST_CASE("zero thresholds need no slack")
{
    std::mt19937_64 rng(65);
    const ChannelSet set = oracle::random_set(rng, 2, 2, 2, 1, amplitude(), {0, 1});
    const QuadData quad(set);
    const P3Program p3 = build_p3(quad, oracle::random_zeta(rng, 2, 4), std::vector<double>(2, 0.0), kRadio);
    const ConicSolution s = solve(p3.prog);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.objective_value == Catch::Approx(0.0).margin(1e-6));
}

TEST_CASE("bad P3 input")
{
    std::mt19937_64 rng(66);
    const ChannelSet set = oracle::random_set(rng, 2, 2, 2, 1, 1.0);
    const QuadData quad(set);
    CHECK_THROWS_AS(build_p3(quad, oracle::random_zeta(rng, 1, 4), std::vector<double>(2, 1.0), kRadio),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_p3(quad, oracle::random_zeta(rng, 2, 3), std::vector<double>(2, 1.0), kRadio),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_p3(quad, oracle::random_zeta(rng, 2, 4), std::vector<double>{1.0, -1.0}, kRadio),
                    std::invalid_argument);
}
