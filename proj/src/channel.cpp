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

#include "risdeploy/channel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace risdeploy
{
    ChannelSet::ChannelSet(std::vector<CVec> direct, std::vector<CMat> bs_ris, std::vector<std::vector<CVec>> ris_ue)
        : direct_(std::move(direct)), bs_ris_(std::move(bs_ris))
    {
        dims_.K = static_cast<int>(direct_.size());
        dims_.L = static_cast<int>(bs_ris_.size());
        if (dims_.K == 0)
            throw std::invalid_argument("ChannelSet: at least one UE required");
        dims_.N = static_cast<int>(direct_[0].size());
        if (dims_.N == 0)
            throw std::invalid_argument("ChannelSet: BS must have at least one antenna");
        dims_.M = dims_.L > 0 ? static_cast<int>(bs_ris_[0].rows()) : 0;

        auto finite = [](const auto &m) { return m.allFinite(); };
        for (const auto &h : direct_)
            if (h.size() != dims_.N || !finite(h))
                throw std::invalid_argument("ChannelSet: direct channel size mismatch or non-finite entry");
        for (const auto &G : bs_ris_)
            if (G.rows() != dims_.M || G.cols() != dims_.N || !finite(G))
                throw std::invalid_argument("ChannelSet: BS-RIS channel size mismatch or non-finite entry");
        if (ris_ue.size() != static_cast<std::size_t>(dims_.L))
            throw std::invalid_argument("ChannelSet: RIS-UE channel list must have one entry per RIS");

        ris_ue_.reserve(static_cast<std::size_t>(dims_.L) * dims_.K);
        for (auto &per_ris : ris_ue)
        {
            if (per_ris.size() != static_cast<std::size_t>(dims_.K))
                throw std::invalid_argument("ChannelSet: RIS-UE channel list must have one entry per UE");
            for (auto &g : per_ris)
            {
                if (g.size() != dims_.M || !finite(g))
                    throw std::invalid_argument("ChannelSet: RIS-UE channel size mismatch or non-finite entry");
                ris_ue_.push_back(std::move(g));
            }
        }

        cascaded_.resize(static_cast<std::size_t>(dims_.L) * dims_.K);
        for (int k = 0; k < dims_.K; ++k)
            for (int l = 0; l < dims_.L; ++l)
                cascaded_[static_cast<std::size_t>(k) * dims_.L + l] = cascade(bs_ris_[l], this->ris_ue(l, k));
    }

    bool ChannelSet::operator==(const ChannelSet &other) const
    {
        if (!(dims_ == other.dims_))
            return false;
        for (std::size_t i = 0; i < direct_.size(); ++i)
            if (direct_[i] != other.direct_[i])
                return false;
        for (std::size_t i = 0; i < bs_ris_.size(); ++i)
            if (bs_ris_[i] != other.bs_ris_[i])
                return false;
        for (std::size_t i = 0; i < ris_ue_.size(); ++i)
            if (ris_ue_[i] != other.ris_ue_[i])
                return false;
        return true;
    }

    // ---------------------------------------------------------------------------------------------

    CVec steering_vector(std::pair<int, int> side_counts, double spacing, double wavelength, const Vec3 &direction)
    {
        if (std::abs(direction.norm() - 1.0) > 1e-9)
            throw std::invalid_argument("steering_vector: direction must be a unit vector");
        if (!(spacing > 0.0) || !(wavelength > 0.0))
            throw std::invalid_argument("steering_vector: spacing and wavelength must be positive");
        const auto [nu, nv] = side_counts;
        if (nu <= 0 || nv <= 0)
            throw std::invalid_argument("steering_vector: side counts must be positive");

        const double k0 = kTwoPi / wavelength;
        CVec a(static_cast<Eigen::Index>(nu) * nv);
        for (int j = 0; j < nv; ++j)
            for (int i = 0; i < nu; ++i)
            {
                const double proj = spacing * (i * direction.x() + j * direction.y());
                a(i + nu * j) = std::polar(1.0, -k0 * proj);
            }
        return a;
    }

    CVec steering_vector(std::pair<int, int> side_counts, double spacing, double wavelength, const ArrayFrame &frame,
                         const Vec3 &direction)
    {
        Vec3 local(direction.dot(frame.u), direction.dot(frame.v), direction.dot(frame.normal));
        // Re-normalize to absorb rounding in the frame projection.
        if (std::abs(direction.norm() - 1.0) > 1e-9)
            throw std::invalid_argument("steering_vector: direction must be a unit vector");
        local.normalize();
        return steering_vector(side_counts, spacing, wavelength, local);
    }

    ArrayFrame bs_array_frame() { return {Vec3::UnitX(), Vec3::UnitY(), -Vec3::UnitZ()}; }

    ArrayFrame ris_array_frame(const RisCandidate &ris)
    {
        const Vec3 n = ris.normal.normalized();
        Vec3 u = Vec3::UnitZ().cross(n);
        if (u.norm() < 1e-12) // horizontal surface
            u = Vec3::UnitX();
        u.normalize();
        const Vec3 v = n.cross(u);
        return {u, v, n};
    }

    double ris_area_amplitude_factor() { return std::sqrt(kPi / 4.0); }

    double ris_area_power_factor(double wavelength)
    {
        const double element_area = (wavelength / 4.0) * (wavelength / 4.0);
        const double isotropic_area = wavelength * wavelength / (4.0 * kPi);
        return element_area / isotropic_area;
    }

    void apply_ris_area_scaling(CMat &channel) { channel *= ris_area_amplitude_factor(); }
    void apply_ris_area_scaling(CVec &channel) { channel *= ris_area_amplitude_factor(); }

    CMat cascade(const CMat &bs_ris, const CVec &ris_ue)
    {
        if (bs_ris.rows() != ris_ue.size())
            throw std::invalid_argument("cascade: G has " + std::to_string(bs_ris.rows()) + " rows but g has " +
                                        std::to_string(ris_ue.size()) + " entries");
        return bs_ris.transpose() * ris_ue.asDiagonal();
    }

    cd free_space_gain(double distance, double wavelength)
    {
        return std::polar(wavelength / (4.0 * kPi * distance), -kTwoPi * distance / wavelength);
    }

    // ---------------------------------------------------------------------------------------------

    namespace
    {
        enum class LinkTag : std::uint64_t
        {
            Direct = 1,
            BsRis = 2,
            RisUe = 3
        };

        double path_loss_db(double distance, double wavelength)
        {
            return -20.0 * std::log10(wavelength / (4.0 * kPi * distance));
        }

        /// Scatter points for one link, drawn from a stream keyed by (seed, link, i, j).
        std::vector<Vec3> scatterers(const CabinScene &scene, const SynthModel &model, LinkTag tag, int i, int j)
        {
            std::vector<Vec3> pts;
            if (model.nlos_ray_count <= 0)
                return pts;
            std::seed_seq seq{static_cast<std::uint64_t>(model.seed), static_cast<std::uint64_t>(tag),
                              static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)};
            std::mt19937_64 rng(seq);
            std::uniform_real_distribution<double> ux(0.0, scene.cabin_length());
            std::uniform_real_distribution<double> uy(-scene.cabin_half_width(), scene.cabin_half_width());
            std::uniform_real_distribution<double> uz(0.0, scene.layout.cabin_height);
            for (int r = 0; r < model.nlos_ray_count; ++r)
                pts.emplace_back(ux(rng), uy(rng), uz(rng));
            return pts;
        }

        struct Endpoint
        {
            Vec3 position;
            std::pair<int, int> sides{1, 1};
            double spacing = 1.0;
            ArrayFrame frame;
            bool single = true;
        };

        CVec response(const Endpoint &e, double wavelength, const Vec3 &towards)
        {
            if (e.single)
                return CVec::Ones(1);
            return steering_vector(e.sides, e.spacing, wavelength, e.frame, towards);
        }

        /// Narrowband MIMO link rx x tx between two endpoints.
        CMat link(const Endpoint &tx, const Endpoint &rx, double wavelength, double extra_loss_db,
                  double floor_db, const std::vector<Vec3> &scatter, double reflection_loss_db)
        {
            const Vec3 delta = rx.position - tx.position;
            const double d = delta.norm();
            const Vec3 dir = delta / d;

            const CVec a_tx = response(tx, wavelength, dir);
            const CVec a_rx = response(rx, wavelength, -dir);
            CMat H = CMat::Zero(a_rx.size(), a_tx.size());

            if (path_loss_db(d, wavelength) + extra_loss_db <= floor_db)
            {
                const cd gain = free_space_gain(d, wavelength) * std::pow(10.0, -extra_loss_db / 20.0);
                H += gain * a_rx * a_tx.transpose();
            }
            for (const Vec3 &p : scatter)
            {
                const Vec3 d1 = p - tx.position;
                const Vec3 d2 = rx.position - p;
                const double len = d1.norm() + d2.norm();
                if (path_loss_db(len, wavelength) + reflection_loss_db > floor_db)
                    continue;
                const cd gain = free_space_gain(len, wavelength) * std::pow(10.0, -reflection_loss_db / 20.0);
                H += gain * response(rx, wavelength, -d2.normalized()) *
                     response(tx, wavelength, d1.normalized()).transpose();
            }
            return H;
        }
    }

    ChannelSet synth_channel_set(const CabinScene &scene, const RadioConfig &radio, const SynthModel &model)
    {
        const auto problems = validate(scene, radio);
        if (!problems.empty())
            throw std::invalid_argument("synth_channel_set: invalid scene: " + problems.front());
        if (model.blockage_loss_per_row_db < 0.0 || model.human_body_loss_db < 0.0 ||
            model.nlos_reflection_loss_db < 0.0)
            throw std::invalid_argument("synth_channel_set: losses must be non-negative");
        if (scene.ris_candidates.empty())
            throw std::invalid_argument("synth_channel_set: scene has no RIS candidates");

        const double lambda = radio.wavelength();
        const int K = static_cast<int>(scene.num_ues());
        const int L = static_cast<int>(scene.num_candidates());
        const int side = scene.ris_candidates.front().elements_per_side;
        for (const auto &c : scene.ris_candidates)
            if (c.elements_per_side != side)
                throw std::invalid_argument("synth_channel_set: all RIS candidates must have the same size");

        Endpoint bs{scene.bs_position,
                    {radio.bs_antennas_per_side, radio.bs_antennas_per_side},
                    radio.bs_spacing(),
                    bs_array_frame(),
                    false};

        std::vector<CVec> direct(K);
        for (int k = 0; k < K; ++k)
        {
            const Vec3 &ue = scene.ue_positions[k];
            const int between = scene.rows_between(scene.bs_position.x(), ue.x());
            const int blocking = std::max(0, between - model.unblocked_rows);
            const double loss = model.blockage_loss_per_row_db * blocking;
            Endpoint rx;
            rx.position = ue;
            const CMat H = link(bs, rx, lambda, loss, model.attenuation_floor_db,
                                scatterers(scene, model, LinkTag::Direct, k, 0), model.nlos_reflection_loss_db);
            direct[k] = H.row(0).transpose();
        }

        std::vector<CMat> bs_ris(L);
        std::vector<std::vector<CVec>> ris_ue(L, std::vector<CVec>(K));
        for (int l = 0; l < L; ++l)
        {
            const auto &cand = scene.ris_candidates[l];
            Endpoint ris{cand.center, {side, side}, cand.element_spacing, ris_array_frame(cand), false};

            if ((scene.bs_position - cand.center).dot(cand.normal) > 0.0)
                bs_ris[l] = link(bs, ris, lambda, 0.0, model.attenuation_floor_db,
                                 scatterers(scene, model, LinkTag::BsRis, l, 0), model.nlos_reflection_loss_db);
            else
                bs_ris[l] = CMat::Zero(cand.num_elements(), radio.num_bs_antennas());
            apply_ris_area_scaling(bs_ris[l]);

            for (int k = 0; k < K; ++k)
            {
                const Vec3 &ue = scene.ue_positions[k];
                CVec g = CVec::Zero(cand.num_elements());
                // Absorber-backed surface: only the reflective half-space is served.
                if ((ue - cand.center).dot(cand.normal) > 0.0)
                {
                    Endpoint rx;
                    rx.position = ue;
                    const CMat H = link(ris, rx, lambda, 0.0, model.attenuation_floor_db,
                                        scatterers(scene, model, LinkTag::RisUe, l, k), model.nlos_reflection_loss_db);
                    g = H.row(0).transpose();
                }
                if (model.ris_scaling == RisScaling::PerLink)
                    apply_ris_area_scaling(g);
                ris_ue[l][k] = std::move(g);
            }
        }
        return ChannelSet(std::move(direct), std::move(bs_ris), std::move(ris_ue));
    }
}
