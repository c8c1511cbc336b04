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

#include <stdexcept>

namespace risdeploy
{
    ComplexVariables add_complex_variables(ConicProgram &prog, int count, const std::string &prefix)
    {
        ComplexVariables out;
        out.parts.reserve(count);
        for (int j = 0; j < count; ++j)
        {
            const std::string base = prefix.empty() ? std::string() : prefix + std::to_string(j);
            const int re = prog.add_variable(base.empty() ? base : base + ".re");
            const int im = prog.add_variable(base.empty() ? base : base + ".im");
            out.parts.emplace_back(re, im);
        }
        return out;
    }

    RealifiedRow realify(const ComplexAffine &expr, const ComplexVariables &vars)
    {
        // (p + jq)(x + jy) = (px - qy) + j(py + qx)
        RealifiedRow out{AffineRow(expr.constant.real()), AffineRow(expr.constant.imag())};
        for (const auto &[j, coef] : expr.terms)
        {
            if (j < 0 || j >= vars.size())
                throw std::invalid_argument("realify: unknown complex variable " + std::to_string(j));
            const auto [re, im] = vars.parts[j];
            if (coef.real() != 0.0)
            {
                out.re.add(re, coef.real());
                out.im.add(im, coef.real());
            }
            if (coef.imag() != 0.0)
            {
                out.re.add(im, -coef.imag());
                out.im.add(re, coef.imag());
            }
        }
        return out;
    }

    AffineRow real_inner(const CVec &u, const ComplexVariables &vars)
    {
        if (u.size() != vars.size())
            throw std::invalid_argument("real_inner: size mismatch");
        // Re(conj(u) z) = Re u Re z + Im u Im z
        AffineRow row;
        for (int j = 0; j < vars.size(); ++j)
        {
            if (u(j).real() != 0.0)
                row.add(vars.parts[j].first, u(j).real());
            if (u(j).imag() != 0.0)
                row.add(vars.parts[j].second, u(j).imag());
        }
        return row;
    }

    void add_modulus_soc(ConicProgram &prog, const ComplexVariables &vars, int j, AffineRow bound)
    {
        if (j < 0 || j >= vars.size())
            throw std::invalid_argument("add_modulus_soc: unknown complex variable");
        prog.add_second_order(
            {std::move(bound), AffineRow::var(vars.parts[j].first), AffineRow::var(vars.parts[j].second)});
    }
}
