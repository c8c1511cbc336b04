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

#include <stdexcept>

namespace risdeploy
{
    P3Program build_p3(const QuadData &quad, const std::vector<CVec> &zeta, std::span<const double> thresholds,
                       const RadioConfig &radio, const P3Options &options)
    {
        const int K = quad.K(), L = quad.L(), M = quad.M();
        if (static_cast<int>(zeta.size()) != K || static_cast<int>(thresholds.size()) != K)
            throw std::invalid_argument("build_p3: need one linearization point and one threshold per UE");
        for (const auto &zk : zeta)
            if (zk.size() != quad.LM())
                throw std::invalid_argument("build_p3: linearization points must have L*M entries");
        for (double r : thresholds)
            if (!(r >= 0.0) || !std::isfinite(r))
                throw std::invalid_argument("build_p3: thresholds must be finite and nonnegative");
        if (!(options.omega > 0.0))
            throw std::invalid_argument("build_p3: omega must be positive");

        P3Program p3;
        p3.explicit_z = options.explicit_z;
        ConicProgram &prog = p3.prog;
        const double beta = radio.noise_scale();

        for (int l = 0; l < L; ++l)
        {
            p3.alpha.push_back(prog.add_variable("alpha" + std::to_string(l)));
            prog.mark_binary(p3.alpha.back());
            prog.add_objective(p3.alpha.back(), 1.0);
        }
        for (int k = 0; k < K; ++k)
        {
            const std::string id = std::to_string(k);
            p3.tau.push_back(prog.add_variable("tau" + id));
            p3.tau_tilde.push_back(prog.add_variable("tau_tilde" + id));
            p3.d.push_back(prog.add_variable("d" + id));
            p3.s.push_back(prog.add_variable("s" + id));
            prog.add_objective(p3.s.back(), options.omega);
            if (options.explicit_z)
                p3.z.push_back(add_complex_variables(prog, quad.LM(), "z" + id + "_"));
        }

        // sum tau <= 1
        AffineRow budget(1.0);
        for (int k = 0; k < K; ++k)
            budget.add(p3.tau[k], -1.0);
        prog.add_nonnegative(std::move(budget));

        for (int k = 0; k < K; ++k)
        {
            prog.add_nonnegative(AffineRow::var(p3.s[k]));
            add_time_allocation_soc(prog, p3.tau[k], p3.tau_tilde[k]);
            add_rate_expcone(prog, p3.d[k], p3.tau_tilde[k], thresholds[k], radio.bandwidth_hz);

            const CVec Hzeta = quad.apply_H(k, zeta[k]);
            p3.q.push_back(quad.apply_H_adjoint(k, Hzeta + quad.direct(k)));
            const CVec &q = p3.q.back();

            if (options.explicit_z)
                for (int l = 0; l < L; ++l)
                    for (int m = 0; m < M; ++m)
                        add_modulus_soc(prog, p3.z[k], l * M + m, AffineRow::var(p3.alpha[l]));

            if (thresholds[k] == 0.0)
            {
                // no rate requirement: keep tau_tilde and d bounded instead of linking them to the channel
                prog.add_nonnegative(AffineRow::var(p3.tau_tilde[k], -1.0, options.zero_rate_tau_tilde_cap));
                prog.add_nonnegative(AffineRow::var(p3.d[k], -1.0, 2.0));
                continue;
            }

            // s + 1 - d + (2 Re(q^H z) - zeta^H A zeta + c) / beta >= 0
            AffineRow row(1.0 + (quad.c(k) - Hzeta.squaredNorm()) / beta);
            row.add(p3.s[k], 1.0).add(p3.d[k], -1.0);
            if (options.explicit_z)
            {
                AffineRow inner = real_inner(q, p3.z[k]);
                for (const auto &[v, coef] : inner.terms)
                    row.add(v, 2.0 * coef / beta);
            }
            else
            {
                for (int l = 0; l < L; ++l)
                {
                    const double w = q.segment(static_cast<Eigen::Index>(l) * M, M).cwiseAbs().sum();
                    if (w > 0.0)
                        row.add(p3.alpha[l], 2.0 * w / beta);
                }
            }
            prog.add_nonnegative(std::move(row));
        }
        return p3;
    }

    std::vector<CVec> recover_z(const P3Program &p3, const std::vector<double> &primal, int M)
    {
        const int K = static_cast<int>(p3.tau.size());
        const int L = static_cast<int>(p3.alpha.size());
        std::vector<CVec> out(K, CVec::Zero(static_cast<Eigen::Index>(L) * M));
        for (int k = 0; k < K; ++k)
        {
            if (p3.explicit_z)
            {
                for (int j = 0; j < p3.z[k].size(); ++j)
                    out[k](j) = cd(primal[p3.z[k].parts[j].first], primal[p3.z[k].parts[j].second]);
                continue;
            }
            for (int l = 0; l < L; ++l)
            {
                const double a = primal[p3.alpha[l]];
                for (int m = 0; m < M; ++m)
                {
                    const auto i = static_cast<Eigen::Index>(l) * M + m;
                    const double mag = std::abs(p3.q[k](i));
                    if (mag > 0.0)
                        out[k](i) = a * p3.q[k](i) / mag;
                }
            }
        }
        return out;
    }
}
