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
#include "risdeploy/conic.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace risdeploy;

namespace
{
    bool soc_member(double tau, double tau_tilde)
    {
        ConicProgram p;
        const int a = p.add_variable("tau");
        const int b = p.add_variable("tau_tilde");
        add_time_allocation_soc(p, a, b);
        p.fix(a, tau);
        p.fix(b, tau_tilde);
        return p.max_violation({tau, tau_tilde}) <= 0.0;
    }

    void add_equality_row(ConicProgram &p, const AffineRow &row)
    {
        p.add_equality(row.terms, -row.constant);
    }
}

TEST_CASE("time-allocation cone examples")
{
    CHECK(soc_residual(2.0, {1.0, 1.0, std::sqrt(2.0)}) == Catch::Approx(0.0).margin(1e-15));
    CHECK(soc_member(1.0, 1.0));
    CHECK(soc_member(0.5, 2.0));
    CHECK_FALSE(soc_member(0.5, 1.0));
    CHECK_FALSE(soc_member(-1.0, -1.0));

    ConicProgram p;
    const int a = p.add_variable();
    const int b = p.add_variable();
    add_time_allocation_soc(p, a, b);
    CHECK(p.count_cones(ConeKind::SecondOrder) == 1);
    p.add_objective(a, 1.0);
    p.add_objective(b, 1.0);
    const ConicSolution s = solve(p);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.objective_value == Catch::Approx(2.0).margin(1e-6));
    CHECK(s.primal[a] == Catch::Approx(1.0).margin(1e-4));
    CHECK(s.primal[b] == Catch::Approx(1.0).margin(1e-4));
}

TEST_CASE("rate exponential cone examples")
{
    const double B = 1e9;
    auto boundary = [&](double x) {
        ConicProgram p;
        const int d = p.add_variable("d");
        const int tt = p.add_variable("tau_tilde");
        add_rate_expcone(p, d, tt, 2e8, B);
        p.add_equality({{tt, 1.0}}, x * B / 2e8);
        p.add_objective(d, 1.0);
        return solve(p);
    };
    const ConicSolution s0 = boundary(0.0);
    REQUIRE(s0.status == SolveStatus::Optimal);
    CHECK(s0.objective_value == Catch::Approx(1.0).margin(1e-6));
    const ConicSolution s1 = boundary(1.0);
    REQUIRE(s1.status == SolveStatus::Optimal);
    CHECK(s1.objective_value == Catch::Approx(2.0).margin(1e-6));
    const ConicSolution s3 = boundary(3.3219);
    REQUIRE(s3.status == SolveStatus::Optimal);
    CHECK(s3.objective_value == Catch::Approx(10.0).margin(1e-3));

    CHECK(exp_residual(std::log(2.0), 1.0, 2.0) == Catch::Approx(0.0).margin(1e-12));
    CHECK(exp_residual(std::log(2.0), 1.0, 1.9) < 0.0);
    CHECK(exp_residual(-1.0, 0.0, 0.5) >= 0.0);
}

TEST_CASE("infeasible and unbounded programs")
{
    ConicProgram p;
    const int x = p.add_variable();
    p.add_nonnegative(AffineRow::var(x, 1.0, -1.0));
    p.add_nonnegative(AffineRow::var(x, -1.0));
    p.add_objective(x, 1.0);
    CHECK(solve(p).status == SolveStatus::Infeasible);

    ConicProgram q;
    const int y = q.add_variable();
    q.add_nonnegative(AffineRow::var(y, -1.0, 3.0));
    q.add_objective(y, 1.0);
    CHECK(solve(q).status == SolveStatus::Unbounded);

    ConicProgram r;
    const int z = r.add_variable();
    r.add_equality({{z, 1.0}}, 2.0);
    r.fix(z, 1.0);
    CHECK(solve(r).status == SolveStatus::Infeasible);
}

TEST_CASE("random instances with analytic optima")
{
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.2, 5.0);
    std::uniform_real_distribution<double> ux(0.0, 6.0);
    for (int inst = 0; inst < 100; ++inst)
    {
        // min a tau + b tau_tilde + c d  s.t. tau tau_tilde >= 1, d >= 2^x with x pinned, tau <= cap
        const double a = u(rng), b = u(rng), c = u(rng), x = ux(rng);
        ConicProgram p;
        const int tau = p.add_variable(), tt = p.add_variable(), d = p.add_variable(), w = p.add_variable();
        add_time_allocation_soc(p, tau, tt);
        add_rate_expcone(p, d, w, 1e8, 1e9);
        p.add_equality({{w, 1.0}}, x * 10.0);
        p.add_nonnegative(AffineRow::var(tau, -1.0, 100.0));
        p.add_objective(tau, a);
        p.add_objective(tt, b);
        p.add_objective(d, c);
        const double expected = 2.0 * std::sqrt(a * b) + c * std::pow(2.0, x);
        const ConicSolution s = solve(p);
        REQUIRE(s.status == SolveStatus::Optimal);
        CHECK(std::abs(s.objective_value - expected) <= 1e-6);
        CHECK(s.primal[tau] == Catch::Approx(std::sqrt(b / a)).epsilon(1e-3));
        CHECK(s.max_cone_violation <= 1e-8);
        CHECK(s.rel_gap <= 1e-8);

        // reported gap agrees with the recomputed primal objective
        const double obj = p.objective_value(s.primal);
        CHECK(std::abs(obj - s.objective_value) <= 1e-9 * std::max(1.0, std::abs(obj)));
        const double recomputed = std::abs(obj - s.dual_objective) / std::max(1.0, std::abs(obj));
        CHECK(std::abs(recomputed - s.rel_gap) <= 1e-9);
    }
}

TEST_CASE("binary marks are relaxed and fixings respected")
{
    ConicProgram p;
    const int a = p.add_variable("alpha");
    const int x = p.add_variable("x");
    p.mark_binary(a);
    // x <= 0.3 + a, minimize -x + a / 2: the relaxation pushes a to its upper box
    p.add_nonnegative(AffineRow({{a, 1.0}, {x, -1.0}}, 0.3));
    p.add_nonnegative(AffineRow::var(x));
    p.add_objective(x, -1.0);
    p.add_objective(a, 0.5);
    const ConicSolution s = solve(p);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.primal[a] == Catch::Approx(1.0).margin(1e-6));
    CHECK(s.objective_value == Catch::Approx(-0.8).margin(1e-6));

    p.fix(a, 0.0);
    const ConicSolution f = solve(p);
    REQUIRE(f.status == SolveStatus::Optimal);
    CHECK(f.primal[a] == 0.0);
    CHECK(f.objective_value == Catch::Approx(-0.3).margin(1e-6));
    CHECK(p.max_violation({0.5, 0.0}) >= 0.5);
    p.unfix(a);
    CHECK(p.fixings().empty());
}

TEST_CASE("program validation and dump")
{
    ConicProgram p;
    const int x = p.add_variables(3, "x");
    CHECK(p.num_vars() == 3);
    CHECK(p.name(x + 1) == "x1");
    p.add_second_order({AffineRow::var(x), AffineRow::var(x + 1), AffineRow::var(x + 2, 2.0, 1.0)});
    p.add_exponential(AffineRow::var(x), AffineRow(1.0), AffineRow::var(x + 1));
    p.add_nonnegative(std::vector<AffineRow>{AffineRow::var(x), AffineRow::var(x + 2)});
    CHECK_NOTHROW(p.validate());
    CHECK(p.count_cones(ConeKind::Exponential) == 1);
    CHECK(p.count_cones(ConeKind::Nonnegative) == 1);

    std::ostringstream out;
    p.dump(out);
    const std::string text = out.str();
    CHECK(text.find("SOC dim=3") != std::string::npos);
    CHECK(text.find("EXP") != std::string::npos);
    CHECK(text.find("NONNEG dim=2") != std::string::npos);
    CHECK(text.find("2 2 2") != std::string::npos);

    CHECK_THROWS_AS(p.add_nonnegative(AffineRow::var(7)), std::invalid_argument);
    CHECK_THROWS_AS(p.add_second_order({AffineRow::var(x)}), std::invalid_argument);
}

TEST_CASE("complex lifting identities")
{
    ConicProgram p;
    const ComplexVariables z = add_complex_variables(p, 2, "z");
    REQUIRE(z.size() == 2);

    // real-only expression: zero imaginary part
    ComplexAffine real_expr;
    real_expr.terms = {{0, cd(2.0, 0.0)}};
    real_expr.constant = 1.5;
    const RealifiedRow rr = realify(real_expr, z);
    std::vector<double> x(static_cast<std::size_t>(p.num_vars()), 0.0);
    x[z.parts[0].first] = 3.0;
    CHECK(rr.re.value(x) == Catch::Approx(7.5));
    CHECK(rr.im.value(x) == 0.0);

    // |3 + 4j| <= alpha has residual alpha - 5
    const int alpha = p.add_variable("alpha");
    add_modulus_soc(p, z, 1, AffineRow::var(alpha));
    x.assign(static_cast<std::size_t>(p.num_vars()), 0.0);
    x[z.parts[1].first] = 3.0;
    x[z.parts[1].second] = 4.0;
    x[alpha] = 6.0;
    CHECK(soc_residual(6.0, {3.0, 4.0}) == Catch::Approx(1.0));
    CHECK(p.max_violation(x) == 0.0);
    x[alpha] = 4.0;
    CHECK(p.max_violation(x) == Catch::Approx(1.0));

    // Re(conj(u) w) for u = 1 + j, w = 2 - j
    CVec u(2);
    u << cd(1.0, 1.0), cd(0.0, 0.0);
    x.assign(static_cast<std::size_t>(p.num_vars()), 0.0);
    x[z.parts[0].first] = 2.0;
    x[z.parts[0].second] = -1.0;
    CHECK(real_inner(u, z).value(x) == Catch::Approx(1.0));
}

TEST_CASE("lifted complex least-norm problem")
{
    std::mt19937_64 rng(42);
    for (int inst = 0; inst < 10; ++inst)
    {
        const int n = 3;
        const CVec u = oracle::random_cvec(rng, n);
        const cd beta = oracle::complex_normal(rng);

        // min t  s.t. ||z|| <= t, u^H z = beta
        ConicProgram p;
        const ComplexVariables z = add_complex_variables(p, n);
        const int t = p.add_variable("t");
        std::vector<AffineRow> soc{AffineRow::var(t)};
        for (const auto &[re, im] : z.parts)
        {
            soc.push_back(AffineRow::var(re));
            soc.push_back(AffineRow::var(im));
        }
        p.add_second_order(soc);
        ComplexAffine constraint;
        for (int j = 0; j < n; ++j)
            constraint.terms.emplace_back(j, std::conj(u(j)));
        constraint.constant = -beta;
        const RealifiedRow row = realify(constraint, z);
        add_equality_row(p, row.re);
        add_equality_row(p, row.im);
        p.add_objective(t, 1.0);

        const ConicSolution s = solve(p);
        REQUIRE(s.status == SolveStatus::Optimal);
        const CVec expected = u * beta / u.squaredNorm();
        CHECK(std::abs(s.objective_value - expected.norm()) <= 1e-8);
        for (int j = 0; j < n; ++j)
        {
            const cd got(s.primal[z.parts[j].first], s.primal[z.parts[j].second]);
            CHECK(std::abs(got - expected(j)) <= 1e-6);
        }
    }
}
