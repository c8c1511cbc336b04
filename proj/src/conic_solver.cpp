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

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace risdeploy
{
    namespace
    {
        using Eigen::MatrixXd;
        using Eigen::VectorXd;
        using SpMat = Eigen::SparseMatrix<double>;
        using Triplet = Eigen::Triplet<double>;
        using SparseTerms = std::vector<std::pair<int, double>>;

        constexpr double kBoxScale = 1e8;

        struct Block
        {
            ConeKind kind = ConeKind::Nonnegative;
            std::vector<int> vars; // reduced indices
            MatrixXd G;            // dim x vars.size()
            VectorXd h;            // dim
        };

        struct Problem
        {
            int n = 0;
            VectorXd c;
            double c0 = 0.0;
            std::vector<SparseTerms> eq_rows;
            VectorXd b;
            std::vector<Block> blocks;
            double nu = 0.0;
        };

        double block_nu(const Block &blk)
        {
            switch (blk.kind)
            {
            case ConeKind::Nonnegative:
                return static_cast<double>(blk.h.size());
            case ConeKind::SecondOrder:
                return 2.0;
            case ConeKind::Exponential:
                return 3.0;
            }
            return 0.0;
        }

        Block make_block(ConeKind kind, const std::vector<SparseTerms> &rows, const std::vector<double> &constants)
        {
            Block blk;
            blk.kind = kind;
            for (const auto &r : rows)
                for (const auto &t : r)
                    blk.vars.push_back(t.first);
            std::sort(blk.vars.begin(), blk.vars.end());
            blk.vars.erase(std::unique(blk.vars.begin(), blk.vars.end()), blk.vars.end());
            blk.G = MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(blk.vars.size()));
            blk.h = Eigen::Map<const VectorXd>(constants.data(), static_cast<Eigen::Index>(constants.size()));
            for (std::size_t r = 0; r < rows.size(); ++r)
                for (const auto &[v, coef] : rows[r])
                {
                    const auto col = std::lower_bound(blk.vars.begin(), blk.vars.end(), v) - blk.vars.begin();
                    blk.G(static_cast<Eigen::Index>(r), col) += coef;
                }
            return blk;
        }

        VectorXd block_slack(const Block &blk, const VectorXd &x)
        {
            VectorXd s = blk.h;
            for (std::size_t j = 0; j < blk.vars.size(); ++j)
                s += blk.G.col(static_cast<Eigen::Index>(j)) * x(blk.vars[j]);
            return s;
        }

        VectorXd block_direction(const Block &blk, const VectorXd &dx)
        {
            VectorXd ds = VectorXd::Zero(blk.h.size());
            for (std::size_t j = 0; j < blk.vars.size(); ++j)
                ds += blk.G.col(static_cast<Eigen::Index>(j)) * dx(blk.vars[j]);
            return ds;
        }

        double soc_gap(const VectorXd &s)
        {
            const double nx = s.tail(s.size() - 1).norm();
            return (s(0) - nx) * (s(0) + nx);
        }

        double exp_psi(const VectorXd &s) { return s(1) * std::log(s(2) / s(1)) - s(0); }

        bool interior(ConeKind kind, const VectorXd &s)
        {
            if (!s.allFinite())
                return false;
            switch (kind)
            {
            case ConeKind::Nonnegative:
                return (s.array() > 0.0).all();
            case ConeKind::SecondOrder:
                return s(0) > 0.0 && s(0) > s.tail(s.size() - 1).norm();
            case ConeKind::Exponential:
                return s(1) > 0.0 && s(2) > 0.0 && exp_psi(s) > 0.0;
            }
            return false;
        }

        double barrier_value(ConeKind kind, const VectorXd &s)
        {
            switch (kind)
            {
            case ConeKind::Nonnegative:
                return -s.array().log().sum();
            case ConeKind::SecondOrder:
                return -std::log(soc_gap(s));
            case ConeKind::Exponential:
                return -std::log(exp_psi(s)) - std::log(s(1)) - std::log(s(2));
            }
            return 0.0;
        }

        void barrier_derivatives(ConeKind kind, const VectorXd &s, VectorXd &g, MatrixXd &H)
        {
            const auto d = s.size();
            switch (kind)
            {
            case ConeKind::Nonnegative:
                g = -s.cwiseInverse();
                H = s.cwiseAbs2().cwiseInverse().asDiagonal();
                break;
            case ConeKind::SecondOrder:
            {
                const double D = soc_gap(s);
                VectorXd Js = -s;
                Js(0) = s(0);
                g = -2.0 * Js / D;
                H = 4.0 * Js * Js.transpose() / (D * D);
                H(0, 0) -= 2.0 / D;
                for (Eigen::Index i = 1; i < d; ++i)
                    H(i, i) += 2.0 / D;
                break;
            }
            case ConeKind::Exponential:
            {
                const double a = s(0), b = s(1), c = s(2);
                const double psi = exp_psi(s);
                Eigen::Vector3d dpsi(-1.0, std::log(c / b) - 1.0, b / c);
                Eigen::Matrix3d d2psi = Eigen::Matrix3d::Zero();
                d2psi(1, 1) = -1.0 / b;
                d2psi(1, 2) = d2psi(2, 1) = 1.0 / c;
                d2psi(2, 2) = -b / (c * c);
                (void)a;
                g = -dpsi / psi;
                g(1) -= 1.0 / b;
                g(2) -= 1.0 / c;
                H = dpsi * dpsi.transpose() / (psi * psi) - d2psi / psi;
                H(1, 1) += 1.0 / (b * b);
                H(2, 2) += 1.0 / (c * c);
                break;
            }
            }
        }

        // Quasi-definite KKT system [H + dp I, A^T; A, -dd I], factorized by sparse LDL^T with a dense
        // LU fallback, refined against the unregularized matrix.
        class KktSolver
        {
          public:
            KktSolver(int n, const std::vector<SparseTerms> &eq_rows) : n_(n), m_(static_cast<int>(eq_rows.size()))
            {
                for (int i = 0; i < m_; ++i)
                    for (const auto &[v, coef] : eq_rows[i])
                        a_triplets_.emplace_back(n_ + i, v, coef);
            }

            bool factorize(const std::vector<Triplet> &h_triplets)
            {
                const int dim = n_ + m_;
                std::vector<Triplet> trips = h_triplets;
                trips.insert(trips.end(), a_triplets_.begin(), a_triplets_.end());
                for (const auto &t : a_triplets_)
                    trips.emplace_back(t.col(), t.row(), t.value());
                K0_.resize(dim, dim);
                K0_.setFromTriplets(trips.begin(), trips.end());

                VectorXd diag = K0_.diagonal();
                const double max_diag = diag.head(n_).cwiseAbs().maxCoeff();
                for (int i = 0; i < dim; ++i)
                    trips.emplace_back(i, i, i < n_ ? 1e-14 * std::abs(diag(i)) + 1e-300 : -1e-12);
                SpMat K(dim, dim);
                K.setFromTriplets(trips.begin(), trips.end());

                dense_ = false;
                if (!analyzed_)
                {
                    ldlt_.analyzePattern(K);
                    analyzed_ = true;
                }
                ldlt_.factorize(K);
                if (ldlt_.info() == Eigen::Success)
                    return true;
                dense_ = true;
                lu_.compute(MatrixXd(K0_) + MatrixXd(VectorXd::Constant(dim, 1e-12 * (1.0 + max_diag)).asDiagonal()));
                return true;
            }

            VectorXd solve(const VectorXd &rhs) const
            {
                VectorXd x = raw_solve(rhs);
                for (int it = 0; it < 3; ++it)
                {
                    const VectorXd r = rhs - K0_ * x;
                    if (!r.allFinite())
                        break;
                    x += raw_solve(r);
                }
                return x;
            }

          private:
            VectorXd raw_solve(const VectorXd &rhs) const { return dense_ ? VectorXd(lu_.solve(rhs)) : VectorXd(ldlt_.solve(rhs)); }

            int n_, m_;
            std::vector<Triplet> a_triplets_;
            SpMat K0_;
            Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
            Eigen::PartialPivLU<MatrixXd> lu_;
            bool analyzed_ = false;
            bool dense_ = false;
        };

        enum class BarrierStop
        {
            Converged,
            EarlyStop,
            IterLimit,
            Numerical
        };

        struct BarrierRun
        {
            BarrierStop stop = BarrierStop::Numerical;
            VectorXd x;
            VectorXd w;
            double t = 1.0;
            double primal = 0.0;
            double dual = -std::numeric_limits<double>::infinity(); // best certified lower bound
        };

        struct BarrierOptions
        {
            double t0 = 1.0;
            double growth = 10.0;
            std::function<double(double)> gap_target; // absolute gap target from objective
            std::function<bool(const VectorXd &)> early_stop;
        };

        BarrierRun run_barrier(const Problem &P, VectorXd x, const BarrierOptions &opt, int &steps_left)
        {
            BarrierRun run;
            KktSolver kkt(P.n, P.eq_rows);
            const int m = static_cast<int>(P.eq_rows.size());
            double t = opt.t0;

            std::vector<VectorXd> s(P.blocks.size()), g(P.blocks.size());
            std::vector<MatrixXd> H(P.blocks.size());
            VectorXd w = VectorXd::Zero(m);
            double dual_estimate = -std::numeric_limits<double>::infinity();

            auto eq_residual = [&](const VectorXd &xv) {
                VectorXd r = P.b;
                for (int i = 0; i < m; ++i)
                    for (const auto &[v, coef] : P.eq_rows[i])
                        r(i) -= coef * xv(v);
                return r;
            };

            for (int outer = 0; outer < 200; ++outer)
            {
                // centering
                bool centered = false;
                int inner = 0;
                while (!centered)
                {
                    ++inner;
                    if (steps_left-- <= 0)
                    {
                        run.stop = BarrierStop::IterLimit;
                        run.x = x;
                        run.t = t;
                        return run;
                    }
                    VectorXd grad = t * P.c;
                    std::vector<Triplet> trips;
                    double F0 = 0.0;
                    for (std::size_t bi = 0; bi < P.blocks.size(); ++bi)
                    {
                        const Block &blk = P.blocks[bi];
                        s[bi] = block_slack(blk, x);
                        F0 += barrier_value(blk.kind, s[bi]);
                        barrier_derivatives(blk.kind, s[bi], g[bi], H[bi]);
                        const VectorXd gl = blk.G.transpose() * g[bi];
                        const MatrixXd Hl = blk.G.transpose() * H[bi] * blk.G;
                        for (std::size_t i = 0; i < blk.vars.size(); ++i)
                        {
                            grad(blk.vars[i]) += gl(static_cast<Eigen::Index>(i));
                            for (std::size_t j = 0; j < blk.vars.size(); ++j)
                                trips.emplace_back(blk.vars[i], blk.vars[j],
                                                   Hl(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
                        }
                    }
                    if (!std::isfinite(F0) || !grad.allFinite())
                    {
                        run.stop = BarrierStop::Numerical;
                        run.x = x;
                        return run;
                    }
                    kkt.factorize(trips);
                    VectorXd rhs(P.n + m);
                    rhs.head(P.n) = -grad;
                    rhs.tail(m) = eq_residual(x);
                    const VectorXd sol = kkt.solve(rhs);
                    if (!sol.allFinite())
                    {
                        run.stop = BarrierStop::Numerical;
                        run.x = x;
                        return run;
                    }
                    const VectorXd dx = sol.head(P.n);
                    w = sol.tail(m);

                    std::vector<VectorXd> ds(P.blocks.size());
                    double lambda2 = 0.0;
                    for (std::size_t bi = 0; bi < P.blocks.size(); ++bi)
                    {
                        ds[bi] = block_direction(P.blocks[bi], dx);
                        lambda2 += ds[bi].dot(H[bi] * ds[bi]);
                    }
                    const double slope = grad.dot(dx);
                    const bool eq_ok = rhs.tail(m).lpNorm<Eigen::Infinity>() <= 1e-9 * (1.0 + P.b.lpNorm<Eigen::Infinity>());
                    // dual point from the Newton step: z = -(grad F + hess F ds) / t, y = -w / t
                    auto newton_dual = [&]() {
                        double d = P.c0;
                        if (m > 0)
                            d += P.b.dot(-w / t);
                        for (std::size_t bi = 0; bi < P.blocks.size(); ++bi)
                            d += P.blocks[bi].h.dot((g[bi] + H[bi] * ds[bi]) / t);
                        return d;
                    };
                    if (lambda2 < 0.25 && eq_ok)
                    {
                        // inside the Dikin ellipsoid the Newton dual is feasible, so its gap is a certificate
                        const double primal = P.c.dot(x) + P.c0;
                        const double dual = std::max(run.dual, std::min(newton_dual(), primal));
                        run.dual = dual;
                        if (primal - dual <= opt.gap_target(primal))
                        {
                            run.stop = BarrierStop::Converged;
                            run.x = x;
                            run.w = w;
                            run.t = t;
                            run.primal = primal;
                            run.dual = dual;
                            return run;
                        }
                    }
                    if ((lambda2 <= 2e-10 || (inner > 60 && lambda2 <= 1e-5)) && eq_ok)
                    {
                        dual_estimate = newton_dual();
                        centered = true;
                        break;
                    }

                    // largest interior step, then Armijo on t c^T x + F
                    double eta = 1.0;
                    auto all_interior = [&](double e) {
                        for (std::size_t bi = 0; bi < P.blocks.size(); ++bi)
                            if (!interior(P.blocks[bi].kind, s[bi] + e * ds[bi]))
                                return false;
                        return true;
                    };
                    int halvings = 0;
                    while (!all_interior(eta) && halvings < 100)
                    {
                        eta *= 0.5;
                        ++halvings;
                    }
                    if (halvings >= 100)
                    {
                        run.stop = BarrierStop::Numerical;
                        run.x = x;
                        return run;
                    }
                    const double tcdx = t * P.c.dot(dx);
                    bool accepted = false;
                    for (int ls = 0; ls < 60; ++ls)
                    {
                        double dF = eta * tcdx;
                        for (std::size_t bi = 0; bi < P.blocks.size(); ++bi)
                            dF += barrier_value(P.blocks[bi].kind, s[bi] + eta * ds[bi]) -
                                  barrier_value(P.blocks[bi].kind, s[bi]);
                        if (std::isfinite(dF) && (slope >= 0.0 || dF <= 0.25 * eta * slope))
                        {
                            accepted = true;
                            break;
                        }
                        eta *= 0.5;
                    }
                    if (!accepted)
                    {
                        if (lambda2 <= 1e-3 && eq_ok)
                        {
                            dual_estimate = newton_dual();
                            centered = true;
                            break;
                        }
                        run.stop = BarrierStop::Numerical;
                        run.x = x;
                        return run;
                    }
                    x += eta * dx;
                    if (opt.early_stop && opt.early_stop(x))
                    {
                        run.stop = BarrierStop::EarlyStop;
                        run.x = x;
                        run.t = t;
                        return run;
                    }
                }

                if (opt.early_stop && opt.early_stop(x))
                {
                    run.stop = BarrierStop::EarlyStop;
                    run.x = x;
                    run.t = t;
                    return run;
                }

                const double primal = P.c.dot(x) + P.c0;
                const double target = opt.gap_target(primal);
                if (P.nu / t <= target)
                {
                    const double dual = std::max(run.dual, std::min(dual_estimate, primal));
                    if (primal - dual <= target || t > 1e18)
                    {
                        run.stop = BarrierStop::Converged;
                        run.x = x;
                        run.w = w;
                        run.t = t;
                        run.primal = primal;
                        run.dual = dual;
                        return run;
                    }
                }
                // stop growing at the parameter whose central gap meets the target
                t = std::min(t * opt.growth, std::max(t * 1.5, 1.05 * P.nu / target));
            }
            run.stop = BarrierStop::Numerical;
            run.x = x;
            return run;
        }

        struct Presolved
        {
            bool infeasible = false;
            Problem P;
            std::vector<int> reduced_to_full;
            std::vector<double> full_values; // fixed values, NaN for free
        };

        Presolved presolve(const ConicProgram &prog, double tol)
        {
            Presolved out;
            const int nfull = prog.num_vars();
            out.full_values.assign(nfull, std::numeric_limits<double>::quiet_NaN());
            for (const auto &[v, val] : prog.fixings())
                out.full_values[v] = val;
            std::vector<int> full_to_reduced(nfull, -1);
            for (int v = 0; v < nfull; ++v)
                if (std::isnan(out.full_values[v]))
                {
                    full_to_reduced[v] = static_cast<int>(out.reduced_to_full.size());
                    out.reduced_to_full.push_back(v);
                }
            Problem &P = out.P;
            P.n = static_cast<int>(out.reduced_to_full.size());
            P.c = VectorXd::Zero(P.n);
            P.c0 = prog.objective_constant();
            for (int v = 0; v < nfull; ++v)
            {
                const double coef = prog.objective()[v];
                if (full_to_reduced[v] >= 0)
                    P.c(full_to_reduced[v]) += coef;
                else
                    P.c0 += coef * out.full_values[v];
            }

            auto reduce = [&](const std::vector<std::pair<int, double>> &terms, double &constant) {
                SparseTerms r;
                for (const auto &[v, coef] : terms)
                {
                    if (coef == 0.0)
                        continue;
                    if (full_to_reduced[v] >= 0)
                        r.emplace_back(full_to_reduced[v], coef);
                    else
                        constant += coef * out.full_values[v];
                }
                return r;
            };

            std::vector<double> rhs;
            auto add_eq = [&](SparseTerms terms, double value) {
                if (terms.empty())
                {
                    if (std::abs(value) > tol * std::max(1.0, std::abs(value)))
                        out.infeasible = true;
                    return;
                }
                P.eq_rows.push_back(std::move(terms));
                rhs.push_back(value);
            };
            auto add_nonneg = [&](SparseTerms terms, double constant) {
                if (terms.empty())
                {
                    if (constant < -tol)
                        out.infeasible = true;
                    return;
                }
                P.blocks.push_back(make_block(ConeKind::Nonnegative, {std::move(terms)}, {constant}));
            };

            for (const auto &e : prog.equalities())
            {
                double constant = 0.0;
                SparseTerms r = reduce(e.terms, constant);
                add_eq(std::move(r), e.rhs - constant);
            }

            for (const auto &blk : prog.cones())
            {
                std::vector<SparseTerms> rows;
                std::vector<double> consts;
                for (const auto &row : blk.rows)
                {
                    double constant = row.constant;
                    rows.push_back(reduce(row.terms, constant));
                    consts.push_back(constant);
                }
                switch (blk.kind)
                {
                case ConeKind::Nonnegative:
                    for (std::size_t i = 0; i < rows.size(); ++i)
                        add_nonneg(std::move(rows[i]), consts[i]);
                    break;
                case ConeKind::SecondOrder:
                {
                    bool tail_constant = true;
                    double tail_norm2 = 0.0;
                    for (std::size_t i = 1; i < rows.size(); ++i)
                    {
                        tail_constant = tail_constant && rows[i].empty();
                        tail_norm2 += consts[i] * consts[i];
                    }
                    if (rows[0].empty() && std::abs(consts[0]) <= tol)
                    {
                        // apex: every tail row must vanish
                        for (std::size_t i = 1; i < rows.size(); ++i)
                            add_eq(std::move(rows[i]), -consts[i]);
                    }
                    else if (rows[0].empty() && consts[0] < -tol)
                        out.infeasible = true;
                    else if (tail_constant)
                        add_nonneg(std::move(rows[0]), consts[0] - std::sqrt(tail_norm2));
                    else
                        P.blocks.push_back(make_block(ConeKind::SecondOrder, rows, consts));
                    break;
                }
                case ConeKind::Exponential:
                {
                    const bool all_constant = rows[0].empty() && rows[1].empty() && rows[2].empty();
                    if (all_constant)
                    {
                        if (exp_residual(consts[0], consts[1], consts[2]) < -tol)
                            out.infeasible = true;
                    }
                    else if (rows[1].empty() && std::abs(consts[1]) <= tol)
                    {
                        SparseTerms neg_a;
                        for (const auto &[v, coef] : rows[0])
                            neg_a.emplace_back(v, -coef);
                        add_nonneg(std::move(neg_a), -consts[0]);
                        add_nonneg(std::move(rows[2]), consts[2]);
                    }
                    else
                        P.blocks.push_back(make_block(ConeKind::Exponential, rows, consts));
                    break;
                }
                }
            }

            for (int v : prog.binary_marks())
                if (full_to_reduced[v] >= 0)
                {
                    add_nonneg({{full_to_reduced[v], 1.0}}, 0.0);
                    add_nonneg({{full_to_reduced[v], -1.0}}, 1.0);
                }

            P.b = Eigen::Map<const VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
            return out;
        }

        void add_boxes(Problem &P, double radius)
        {
            for (int v = 0; v < P.n; ++v)
            {
                P.blocks.push_back(make_block(ConeKind::Nonnegative, {{{v, 1.0}}}, {radius}));
                P.blocks.push_back(make_block(ConeKind::Nonnegative, {{{v, -1.0}}}, {radius}));
            }
        }

        void finalize_nu(Problem &P)
        {
            P.nu = 0.0;
            for (const auto &blk : P.blocks)
                P.nu += block_nu(blk);
        }

        /// Minimum-norm solution of the equality rows; NaN entries mean inconsistent.
        VectorXd min_norm_point(const Problem &P)
        {
            const int m = static_cast<int>(P.eq_rows.size());
            if (m == 0)
                return VectorXd::Zero(P.n);
            KktSolver kkt(P.n, P.eq_rows);
            std::vector<Triplet> eye;
            for (int i = 0; i < P.n; ++i)
                eye.emplace_back(i, i, 1.0);
            kkt.factorize(eye);
            VectorXd rhs = VectorXd::Zero(P.n + m);
            rhs.tail(m) = P.b;
            VectorXd x = kkt.solve(rhs).head(P.n);
            VectorXd r = P.b;
            for (int i = 0; i < m; ++i)
                for (const auto &[v, coef] : P.eq_rows[i])
                    r(i) -= coef * x(v);
            if (r.lpNorm<Eigen::Infinity>() > 1e-8 * (1.0 + P.b.lpNorm<Eigen::Infinity>()))
                x.setConstant(std::numeric_limits<double>::quiet_NaN());
            return x;
        }

        /// Direction e with s + sigma e interior for large sigma.
        VectorXd phase_one_direction(const Block &blk)
        {
            VectorXd e = VectorXd::Zero(blk.h.size());
            switch (blk.kind)
            {
            case ConeKind::Nonnegative:
                e.setOnes();
                break;
            case ConeKind::SecondOrder:
                e(0) = 1.0;
                break;
            case ConeKind::Exponential:
                e << -1.0, 1.0, 1.0;
                break;
            }
            return e;
        }

        bool all_interior(const Problem &P, const VectorXd &x)
        {
            for (const auto &blk : P.blocks)
                if (!interior(blk.kind, block_slack(blk, x)))
                    return false;
            return true;
        }
    }

    ConicSolution solve(const ConicProgram &prog, const SolverSettings &settings)
    {
        prog.validate();
        ConicSolution result;
        Presolved pre = presolve(prog, settings.feas_tol);

        auto expand = [&](const VectorXd &xr) {
            std::vector<double> full = pre.full_values;
            for (std::size_t i = 0; i < pre.reduced_to_full.size(); ++i)
                full[pre.reduced_to_full[i]] = xr(static_cast<Eigen::Index>(i));
            for (double &v : full)
                if (std::isnan(v))
                    v = 0.0;
            return full;
        };
        auto finish = [&](SolveStatus status, const VectorXd &xr) {
            result.status = status;
            result.primal = expand(xr);
            result.objective_value = prog.objective_value(result.primal);
            result.max_cone_violation = prog.max_violation(result.primal);
            return result;
        };

        if (pre.infeasible)
            return finish(SolveStatus::Infeasible, VectorXd::Zero(pre.P.n));

        Problem &P = pre.P;
        if (P.n == 0)
        {
            finish(SolveStatus::Optimal, VectorXd());
            result.dual_objective = result.objective_value;
            if (result.max_cone_violation > settings.feas_tol)
                result.status = SolveStatus::Infeasible;
            return result;
        }

        VectorXd x0 = min_norm_point(P);
        if (!x0.allFinite())
            return finish(SolveStatus::Infeasible, VectorXd::Zero(P.n));

        const double scale = std::max(1.0, x0.lpNorm<Eigen::Infinity>());
        const std::vector<Block> cone_blocks = P.blocks;
        const double radius = kBoxScale * scale;
        add_boxes(P, radius);
        finalize_nu(P);
        int steps_left = settings.max_newton_steps;

        if (!all_interior(P, x0))
        {
            // phase I: min sigma s.t. s(x) + sigma e in K, sigma >= -1, inside a box that widens on retry
            bool found = false;
            double sigma_star = 0.0;
            VectorXd last = x0;
            for (double box : {1e3, 1e6, kBoxScale})
            {
                Problem P1;
                P1.n = P.n + 1;
                P1.c = VectorXd::Zero(P1.n);
                P1.c(P.n) = 1.0;
                P1.eq_rows = P.eq_rows;
                P1.b = P.b;
                for (const auto &blk : cone_blocks)
                {
                    Block b1 = blk;
                    b1.vars.push_back(P.n);
                    b1.G.conservativeResize(Eigen::NoChange, b1.G.cols() + 1);
                    b1.G.col(b1.G.cols() - 1) = phase_one_direction(blk);
                    P1.blocks.push_back(std::move(b1));
                }
                for (int v = 0; v < P.n; ++v)
                {
                    P1.blocks.push_back(make_block(ConeKind::Nonnegative, {{{v, 1.0}}}, {box * scale}));
                    P1.blocks.push_back(make_block(ConeKind::Nonnegative, {{{v, -1.0}}}, {box * scale}));
                }
                P1.blocks.push_back(make_block(ConeKind::Nonnegative, {{{P.n, 1.0}}}, {1.0}));
                finalize_nu(P1);

                VectorXd x1(P1.n);
                x1.head(P.n) = x0;
                double sigma = 1.0;
                for (int it = 0; it < 400; ++it)
                {
                    x1(P.n) = sigma;
                    if (all_interior(P1, x1))
                        break;
                    sigma *= 2.0;
                }
                if (!all_interior(P1, x1))
                    return finish(SolveStatus::NumericalFailure, x0);

                BarrierOptions opt1;
                opt1.growth = settings.barrier_growth;
                opt1.t0 = 1.0;
                opt1.gap_target = [](double) { return 1e-10; };
                const int n = P.n;
                opt1.early_stop = [n](const VectorXd &x) { return x(n) < -1e-3; };
                BarrierRun r1 = run_barrier(P1, x1, opt1, steps_left);
                result.newton_steps = settings.max_newton_steps - steps_left;
                if (r1.stop == BarrierStop::IterLimit)
                    return finish(SolveStatus::IterLimit, r1.x.head(P.n));
                last = r1.x.head(P.n);
                sigma_star = r1.x(P.n);
                if (sigma_star < 0.0 && all_interior(P, last))
                {
                    found = true;
                    break;
                }
                if (r1.stop == BarrierStop::Numerical)
                    return finish(SolveStatus::NumericalFailure, last);
            }
            if (!found)
                return finish(sigma_star > settings.feas_tol ? SolveStatus::Infeasible : SolveStatus::NumericalFailure,
                              last);
            x0 = last;
        }

        BarrierOptions opt;
        opt.growth = settings.barrier_growth;
        opt.t0 = std::clamp(P.nu / std::max(1.0, std::abs(P.c.dot(x0) + P.c0)), 1e-6, 1.0);
        const double gap_tol = settings.gap_tol;
        opt.gap_target = [gap_tol](double obj) { return gap_tol * std::max(1.0, std::abs(obj)); };
        BarrierRun run = run_barrier(P, x0, opt, steps_left);
        result.newton_steps = settings.max_newton_steps - steps_left;

        if (run.x.size() == P.n && run.x.lpNorm<Eigen::Infinity>() > 0.1 * radius)
            return finish(SolveStatus::Unbounded, run.x);
        SolveStatus status = SolveStatus::Optimal;
        if (run.stop == BarrierStop::IterLimit)
            status = SolveStatus::IterLimit;
        else if (run.stop != BarrierStop::Converged)
            status = SolveStatus::NumericalFailure;
        finish(status, run.x);
        result.dual_objective = run.dual;
        result.rel_gap = std::isfinite(run.dual) ? std::abs(result.objective_value - run.dual) /
                                                       std::max(1.0, std::abs(result.objective_value))
                                                 : std::numeric_limits<double>::infinity();
        if (status == SolveStatus::Optimal &&
            (result.max_cone_violation > settings.feas_tol || result.rel_gap > settings.gap_tol))
            result.status = SolveStatus::NumericalFailure;
        return result;
    }
}
