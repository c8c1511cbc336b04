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
    QuadData::QuadData(const ChannelSet &set) : set_(&set), dims_(set.dims())
    {
        b_.reserve(dims_.K);
        c_.reserve(dims_.K);
        for (int k = 0; k < dims_.K; ++k)
        {
            b_.push_back(apply_H_adjoint(k, set.direct(k)));
            c_.push_back(set.direct(k).squaredNorm());
        }
    }

    CVec QuadData::apply_H(int k, const CVec &z) const
    {
        if (z.size() != LM())
            throw std::invalid_argument("QuadData::apply_H: z must have L*M entries");
        CVec out = CVec::Zero(dims_.N);
        for (int l = 0; l < dims_.L; ++l)
            out.noalias() += set_->cascaded(l, k) * z.segment(static_cast<Eigen::Index>(l) * dims_.M, dims_.M);
        return out;
    }

    CVec QuadData::apply_H_adjoint(int k, const CVec &v) const
    {
        if (v.size() != dims_.N)
            throw std::invalid_argument("QuadData::apply_H_adjoint: v must have N entries");
        CVec out(LM());
        for (int l = 0; l < dims_.L; ++l)
            out.segment(static_cast<Eigen::Index>(l) * dims_.M, dims_.M).noalias() =
                set_->cascaded(l, k).adjoint() * v;
        return out;
    }

    CVec QuadData::apply_A(int k, const CVec &z) const { return apply_H_adjoint(k, apply_H(k, z)); }

    CMat QuadData::H(int k) const
    {
        CMat out(dims_.N, LM());
        for (int l = 0; l < dims_.L; ++l)
            out.middleCols(static_cast<Eigen::Index>(l) * dims_.M, dims_.M) = set_->cascaded(l, k);
        return out;
    }

    CMat QuadData::A(int k) const
    {
        const CMat h = H(k);
        return h.adjoint() * h;
    }

    double QuadData::expanded_norm2(int k, const CVec &z) const
    {
        const CVec Hz = apply_H(k, z);
        return Hz.squaredNorm() + 2.0 * z.dot(b_[k]).real() + c_[k];
    }

    double linearized_neg_quadratic(const CMat &A, const CVec &zeta, const CVec &z)
    {
        const CVec Azeta = A * zeta;
        return -2.0 * Azeta.dot(z).real() + zeta.dot(Azeta).real();
    }

    double surrogate_lhs(const QuadData &quad, int k, const CVec &zeta, const CVec &z)
    {
        const CVec Hzeta = quad.apply_H(k, zeta);
        const CVec Hz = quad.apply_H(k, z);
        return -2.0 * Hzeta.dot(Hz).real() + Hzeta.squaredNorm() - 2.0 * z.dot(quad.b(k)).real();
    }

    double exact_lhs(const QuadData &quad, int k, const CVec &z)
    {
        return -quad.apply_H(k, z).squaredNorm() - 2.0 * z.dot(quad.b(k)).real();
    }

    CVec normalize_z(const CVec &z, const std::vector<bool> &alpha, int M, double delta)
    {
        if (z.size() != static_cast<Eigen::Index>(alpha.size()) * M)
            throw std::invalid_argument("normalize_z: z must have L*M entries");
        CVec out = CVec::Zero(z.size());
        for (std::size_t l = 0; l < alpha.size(); ++l)
        {
            if (!alpha[l])
                continue;
            for (int m = 0; m < M; ++m)
            {
                const auto i = static_cast<Eigen::Index>(l) * M + m;
                const double mag = std::abs(z(i));
                if (mag > delta)
                    out(i) = z(i) / mag;
            }
        }
        return out;
    }
}
