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

#include "risdeploy/conic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace risdeploy
{
    double AffineRow::value(const std::vector<double> &x) const
    {
        double v = constant;
        for (const auto &[i, c] : terms)
            v += c * x[i];
        return v;
    }

    bool AffineRow::is_constant() const
    {
        return std::all_of(terms.begin(), terms.end(), [](const auto &t) { return t.second == 0.0; });
    }

    int ConicProgram::add_variable(std::string name)
    {
        if (name.empty())
            name = "x" + std::to_string(names_.size());
        names_.push_back(std::move(name));
        objective_.push_back(0.0);
        return num_vars() - 1;
    }

    int ConicProgram::add_variables(int count, const std::string &prefix)
    {
        const int first = num_vars();
        for (int i = 0; i < count; ++i)
            add_variable(prefix.empty() ? std::string() : prefix + std::to_string(i));
        return first;
    }

    void ConicProgram::check_row(const std::vector<std::pair<int, double>> &terms) const
    {
        for (const auto &t : terms)
        {
            if (t.first < 0 || t.first >= num_vars())
                throw std::invalid_argument("ConicProgram: reference to undeclared variable " + std::to_string(t.first));
            if (!std::isfinite(t.second))
                throw std::invalid_argument("ConicProgram: non-finite coefficient");
        }
    }

    void ConicProgram::add_objective(int var, double coef)
    {
        check_row({{var, coef}});
        objective_[var] += coef;
    }

    void ConicProgram::add_equality(std::vector<std::pair<int, double>> terms, double rhs)
    {
        check_row(terms);
        equalities_.push_back({std::move(terms), rhs});
    }

    void ConicProgram::add_nonnegative(AffineRow row)
    {
        check_row(row.terms);
        cones_.push_back({ConeKind::Nonnegative, {std::move(row)}});
    }

    void ConicProgram::add_nonnegative(std::vector<AffineRow> rows)
    {
        if (rows.empty())
            throw std::invalid_argument("ConicProgram: empty nonnegative block");
        for (const auto &r : rows)
            check_row(r.terms);
        cones_.push_back({ConeKind::Nonnegative, std::move(rows)});
    }

    void ConicProgram::add_second_order(std::vector<AffineRow> rows)
    {
        if (rows.size() < 2)
            throw std::invalid_argument("ConicProgram: second-order cone needs at least 2 rows");
        for (const auto &r : rows)
            check_row(r.terms);
        cones_.push_back({ConeKind::SecondOrder, std::move(rows)});
    }

    void ConicProgram::add_exponential(AffineRow a, AffineRow b, AffineRow c)
    {
        check_row(a.terms);
        check_row(b.terms);
        check_row(c.terms);
        cones_.push_back({ConeKind::Exponential, {std::move(a), std::move(b), std::move(c)}});
    }

    void ConicProgram::mark_binary(int var)
    {
        check_row({{var, 1.0}});
        if (std::find(binaries_.begin(), binaries_.end(), var) == binaries_.end())
            binaries_.push_back(var);
    }

    void ConicProgram::fix(int var, double value)
    {
        check_row({{var, value}});
        fixings_[var] = value;
    }

    void ConicProgram::unfix(int var) { fixings_.erase(var); }

    int ConicProgram::count_cones(ConeKind kind) const
    {
        return static_cast<int>(
            std::count_if(cones_.begin(), cones_.end(), [kind](const ConeBlock &b) { return b.kind == kind; }));
    }

    void ConicProgram::validate() const
    {
        for (const auto &e : equalities_)
            check_row(e.terms);
        for (const auto &b : cones_)
        {
            for (const auto &r : b.rows)
                check_row(r.terms);
            if (b.kind == ConeKind::Exponential && b.rows.size() != 3)
                throw std::invalid_argument("ConicProgram: exponential cone must have exactly 3 rows");
            if (b.kind == ConeKind::SecondOrder && b.rows.size() < 2)
                throw std::invalid_argument("ConicProgram: second-order cone needs at least 2 rows");
            if (b.rows.empty())
                throw std::invalid_argument("ConicProgram: empty cone block");
        }
    }

    double ConicProgram::objective_value(const std::vector<double> &x) const
    {
        double v = objective_constant_;
        for (int i = 0; i < num_vars(); ++i)
            v += objective_[i] * x[i];
        return v;
    }

    double ConicProgram::max_violation(const std::vector<double> &x) const
    {
        double worst = 0.0;
        for (const auto &e : equalities_)
        {
            double v = -e.rhs;
            for (const auto &[i, c] : e.terms)
                v += c * x[i];
            worst = std::max(worst, std::abs(v));
        }
        for (const auto &b : cones_)
        {
            switch (b.kind)
            {
            case ConeKind::Nonnegative:
                for (const auto &r : b.rows)
                    worst = std::max(worst, -r.value(x));
                break;
            case ConeKind::SecondOrder:
            {
                std::vector<double> tail;
                for (std::size_t i = 1; i < b.rows.size(); ++i)
                    tail.push_back(b.rows[i].value(x));
                worst = std::max(worst, -soc_residual(b.rows[0].value(x), tail));
                break;
            }
            case ConeKind::Exponential:
                worst = std::max(worst, -exp_residual(b.rows[0].value(x), b.rows[1].value(x), b.rows[2].value(x)));
                break;
            }
        }
        for (int v : binaries_)
            worst = std::max({worst, -x[v], x[v] - 1.0});
        for (const auto &[v, val] : fixings_)
            worst = std::max(worst, std::abs(x[v] - val));
        return worst;
    }

    void ConicProgram::dump(std::ostream &out) const
    {
        out << "VARS " << num_vars() << '\n';
        out << "OBJ";
        for (int i = 0; i < num_vars(); ++i)
            if (objective_[i] != 0.0)
                out << ' ' << i << ':' << objective_[i];
        out << " const:" << objective_constant_ << '\n';
        for (const auto &e : equalities_)
        {
            out << "EQ rhs=" << e.rhs << '\n';
            for (const auto &[i, c] : e.terms)
                out << "0 " << i << ' ' << c << '\n';
        }
        for (const auto &b : cones_)
        {
            switch (b.kind)
            {
            case ConeKind::Nonnegative:
                out << "NONNEG dim=" << b.rows.size() << '\n';
                break;
            case ConeKind::SecondOrder:
                out << "SOC dim=" << b.rows.size() << '\n';
                break;
            case ConeKind::Exponential:
                out << "EXP\n";
                break;
            }
            for (std::size_t r = 0; r < b.rows.size(); ++r)
            {
                for (const auto &[i, c] : b.rows[r].terms)
                    out << r << ' ' << i << ' ' << c << '\n';
                if (b.rows[r].constant != 0.0)
                    out << r << " const " << b.rows[r].constant << '\n';
            }
        }
        if (!binaries_.empty())
        {
            out << "BINARY";
            for (int v : binaries_)
                out << ' ' << v;
            out << '\n';
        }
    }

    double soc_residual(double t, const std::vector<double> &x)
    {
        double n2 = 0.0;
        for (double v : x)
            n2 += v * v;
        return t - std::sqrt(n2);
    }

    double exp_residual(double a, double b, double c)
    {
        if (b > 0.0)
        {
            const double e = a / b;
            if (e > 700.0)
                return -std::numeric_limits<double>::infinity();
            return c - b * std::exp(e);
        }
        // closure: b = 0, a <= 0, c >= 0
        return std::min({b, -a, c});
    }

    void add_time_allocation_soc(ConicProgram &prog, int tau, int tau_tilde)
    {
        prog.add_second_order({AffineRow({{tau, 1.0}, {tau_tilde, 1.0}}), AffineRow::var(tau), AffineRow::var(tau_tilde),
                               AffineRow(std::sqrt(2.0))});
    }

    void add_rate_expcone(ConicProgram &prog, int d, int tau_tilde, double rate_threshold, double bandwidth)
    {
        if (rate_threshold < 0.0 || !(bandwidth > 0.0))
            throw std::invalid_argument("add_rate_expcone: need rate_threshold >= 0 and bandwidth > 0");
        const double coef = std::log(2.0) * rate_threshold / bandwidth;
        AffineRow a = coef == 0.0 ? AffineRow(0.0) : AffineRow::var(tau_tilde, coef);
        prog.add_exponential(std::move(a), AffineRow(1.0), AffineRow::var(d));
    }

    const char *to_string(SolveStatus status)
    {
        switch (status)
        {
        case SolveStatus::Optimal:
            return "Optimal";
        case SolveStatus::Infeasible:
            return "Infeasible";
        case SolveStatus::Unbounded:
            return "Unbounded";
        case SolveStatus::IterLimit:
            return "IterLimit";
        case SolveStatus::NumericalFailure:
            return "NumericalFailure";
        }
        return "Unknown";
    }
}
