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

#include "risdeploy/types.hpp"

#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace risdeploy
{
    /// sum_i coef_i * x[var_i] + constant
    struct AffineRow
    {
        std::vector<std::pair<int, double>> terms;
        double constant = 0.0;

        AffineRow() = default;
        explicit AffineRow(double c) : constant(c) {}
        AffineRow(std::vector<std::pair<int, double>> t, double c = 0.0) : terms(std::move(t)), constant(c) {}

        static AffineRow var(int index, double coef = 1.0, double c = 0.0) { return AffineRow({{index, coef}}, c); }

        AffineRow &add(int index, double coef)
        {
            terms.emplace_back(index, coef);
            return *this;
        }

        double value(const std::vector<double> &x) const;
        bool is_constant() const;
    };

    enum class ConeKind
    {
        Nonnegative, // every row >= 0
        SecondOrder, // (t, x): ||x||_2 <= t
        Exponential  // (a, b, c): c >= b exp(a / b), b > 0, plus its closure
    };

    struct ConeBlock
    {
        ConeKind kind = ConeKind::Nonnegative;
        std::vector<AffineRow> rows;
    };

    struct LinearEquality
    {
        std::vector<std::pair<int, double>> terms;
        double rhs = 0.0;
    };

    /// min objective^T x  s.t.  equalities, cone memberships of affine rows, binary marks.
    class ConicProgram
    {
      public:
        int add_variable(std::string name = {});
        /// Returns the index of the first new variable.
        int add_variables(int count, const std::string &prefix = {});
        int num_vars() const { return static_cast<int>(names_.size()); }
        const std::string &name(int var) const { return names_[var]; }

        void add_objective(int var, double coef);
        void add_objective_constant(double c) { objective_constant_ += c; }
        const std::vector<double> &objective() const { return objective_; }
        double objective_constant() const { return objective_constant_; }

        void add_equality(std::vector<std::pair<int, double>> terms, double rhs);
        void add_nonnegative(AffineRow row);
        void add_nonnegative(std::vector<AffineRow> rows);
        void add_second_order(std::vector<AffineRow> rows);
        void add_exponential(AffineRow a, AffineRow b, AffineRow c);

        void mark_binary(int var);
        const std::vector<int> &binary_marks() const { return binaries_; }

        /// Pins a variable to a value for the next solve. Used by branch-and-bound.
        void fix(int var, double value);
        void unfix(int var);
        const std::map<int, double> &fixings() const { return fixings_; }

        const std::vector<LinearEquality> &equalities() const { return equalities_; }
        const std::vector<ConeBlock> &cones() const { return cones_; }
        int count_cones(ConeKind kind) const;

        /// Throws std::invalid_argument on undeclared variables or malformed cone blocks.
        void validate() const;

        double objective_value(const std::vector<double> &x) const;

        /// Largest violation of equalities, cones, binary boxes [0, 1] and fixings at x.
        double max_violation(const std::vector<double> &x) const;

        /// One line per cone block (SOC dim=<d> / EXP / NONNEG dim=<d>) followed by its rows as
        /// "row var coef" triplets and "row const value" lines.
        void dump(std::ostream &out) const;

      private:
        void check_row(const std::vector<std::pair<int, double>> &terms) const;

        std::vector<std::string> names_;
        std::vector<double> objective_;
        double objective_constant_ = 0.0;
        std::vector<LinearEquality> equalities_;
        std::vector<ConeBlock> cones_;
        std::vector<int> binaries_;
        std::map<int, double> fixings_;
    };

    // Cone membership residuals: >= 0 inside the cone, negative amounts are violations.
    double soc_residual(double t, const std::vector<double> &x);
    double exp_residual(double a, double b, double c);

    /// ||(tau, tau_tilde, sqrt 2)|| <= tau + tau_tilde, i.e. tau * tau_tilde >= 1 with both nonnegative.
    void add_time_allocation_soc(ConicProgram &prog, int tau, int tau_tilde);

    /// d >= 2^(rate_threshold * tau_tilde / bandwidth) as (ln2 * rate_threshold * tau_tilde / bandwidth, 1, d).
    void add_rate_expcone(ConicProgram &prog, int d, int tau_tilde, double rate_threshold, double bandwidth);

    // ---------------------------------------------------------------------------------------------
    // Solving

    enum class SolveStatus
    {
        Optimal,
        Infeasible,
        Unbounded,
        IterLimit,
        NumericalFailure
    };

    const char *to_string(SolveStatus status);

    struct SolverSettings
    {
        double feas_tol = 1e-8;
        double gap_tol = 1e-8;
        int max_newton_steps = 2000;
        double barrier_growth = 10.0;
    };

    struct ConicSolution
    {
        SolveStatus status = SolveStatus::NumericalFailure;
        std::vector<double> primal;
        double objective_value = 0.0;
        double dual_objective = -std::numeric_limits<double>::infinity();
        double max_cone_violation = 0.0;
        double rel_gap = std::numeric_limits<double>::infinity();
        int newton_steps = 0;
    };

    /// Barrier interior-point solve of the continuous relaxation (binary marks relaxed to [0, 1],
    /// fixings substituted).
    ConicSolution solve(const ConicProgram &prog, const SolverSettings &settings = {});

    // ---------------------------------------------------------------------------------------------
    // Complex -> real lifting

    /// Real indices of complex variables: entry j holds (real part, imaginary part).
    struct ComplexVariables
    {
        std::vector<std::pair<int, int>> parts;

        int size() const { return static_cast<int>(parts.size()); }
    };

    ComplexVariables add_complex_variables(ConicProgram &prog, int count, const std::string &prefix = {});

    /// sum_j coef_j * z_j + constant over complex variables.
    struct ComplexAffine
    {
        std::vector<std::pair<int, cd>> terms;
        cd constant = 0.0;
    };

    struct RealifiedRow
    {
        AffineRow re;
        AffineRow im;
    };

    RealifiedRow realify(const ComplexAffine &expr, const ComplexVariables &vars);

    /// Re(u^H z) as a real affine row.
    AffineRow real_inner(const CVec &u, const ComplexVariables &vars);

    /// |z_j| <= bound as the 3-row SOC (bound, Re z_j, Im z_j).
    void add_modulus_soc(ConicProgram &prog, const ComplexVariables &vars, int j, AffineRow bound);
}
