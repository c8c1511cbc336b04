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

#include "risdeploy/scene.hpp"
#include "risdeploy/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace risdeploy
{
    struct ChannelDims
    {
        int K = 0; // UEs
        int L = 0; // RIS candidates
        int M = 0; // elements per RIS
        int N = 0; // BS antennas

        bool operator==(const ChannelDims &) const = default;
    };

    /// Deterministic narrowband channels of one scenario.
    ///   direct(k)    : BS -> UE k, length N
    ///   bs_ris(l)    : BS -> RIS l, M x N
    ///   ris_ue(l, k) : RIS l -> UE k, length M
    ///   cascaded(l,k): bs_ris(l)^T * diag(ris_ue(l, k)), N x M
    /// Immutable once constructed.
    class ChannelSet
    {
      public:
        ChannelSet() = default;

        /// ris_ue is indexed [l][k]. Throws std::invalid_argument on inconsistent sizes or non-finite entries.
        ChannelSet(std::vector<CVec> direct, std::vector<CMat> bs_ris, std::vector<std::vector<CVec>> ris_ue);

        const ChannelDims &dims() const { return dims_; }
        const CVec &direct(int k) const { return direct_[k]; }
        const CMat &bs_ris(int l) const { return bs_ris_[l]; }
        const CVec &ris_ue(int l, int k) const { return ris_ue_[static_cast<std::size_t>(l) * dims_.K + k]; }
        const CMat &cascaded(int l, int k) const { return cascaded_[static_cast<std::size_t>(k) * dims_.L + l]; }

        /// All cascaded channels of UE k in candidate order.
        std::span<const CMat> cascaded_row(int k) const
        {
            return {cascaded_.data() + static_cast<std::size_t>(k) * dims_.L, static_cast<std::size_t>(dims_.L)};
        }

        bool operator==(const ChannelSet &other) const;

      private:
        ChannelDims dims_;
        std::vector<CVec> direct_;
        std::vector<CMat> bs_ris_;
        std::vector<CVec> ris_ue_;   // l-major
        std::vector<CMat> cascaded_; // k-major
    };

    enum class RisScaling
    {
        PerLink,   // both BS->RIS and RIS->UE carry the element-area factor
        OncePerPath // only BS->RIS carries it
    };

    /// Geometric stand-in for ray-traced cabin channels: free-space LOS plus per-row seat blockage on the
    /// direct link, optional single-bounce scatter rays, and one-sided RIS visibility.
    struct SynthModel
    {
        double blockage_loss_per_row_db = 15.0;
        int unblocked_rows = 1;              // intervening rows that do not attenuate
        double human_body_loss_db = 30.0;    // reference value, informational
        double attenuation_floor_db = 180.0; // links attenuated beyond this are exactly zero
        int nlos_ray_count = 0;
        double nlos_reflection_loss_db = 10.0;
        RisScaling ris_scaling = RisScaling::PerLink;
        std::uint64_t seed = 1;
    };

    /// Local array geometry: elements at (i * spacing) along u and (j * spacing) along v, index i + nu * j.
    struct ArrayFrame
    {
        Vec3 u = Vec3::UnitX();
        Vec3 v = Vec3::UnitY();
        Vec3 normal = Vec3::UnitZ();
    };

    /// Planar-array response e^{-j 2 pi / lambda (p_i . direction)} for a direction in the array's local
    /// frame (array plane = local xy). Throws std::invalid_argument for non-unit directions (tol 1e-9).
    CVec steering_vector(std::pair<int, int> side_counts, double spacing, double wavelength, const Vec3 &direction);

    /// Same, with the direction given in world coordinates and the array oriented by frame.
    CVec steering_vector(std::pair<int, int> side_counts, double spacing, double wavelength, const ArrayFrame &frame,
                         const Vec3 &direction);

    ArrayFrame bs_array_frame();                         // ceiling mounted, facing the floor
    ArrayFrame ris_array_frame(const RisCandidate &ris); // vertical, facing along its normal

    /// Amplitude factor sqrt((lambda/4)^2 / (lambda^2 / (4 pi))) = sqrt(pi / 4).
    double ris_area_amplitude_factor();
    /// (lambda/4)^2 / (lambda^2 / (4 pi)); independent of lambda up to rounding.
    double ris_area_power_factor(double wavelength);

    void apply_ris_area_scaling(CMat &channel);
    void apply_ris_area_scaling(CVec &channel);

    /// G^T * diag(g). Throws std::invalid_argument when G.rows() != g.size().
    CMat cascade(const CMat &bs_ris, const CVec &ris_ue);

    /// Free-space complex gain lambda/(4 pi d) * e^{-j 2 pi d / lambda}.
    cd free_space_gain(double distance, double wavelength);

    ChannelSet synth_channel_set(const CabinScene &scene, const RadioConfig &radio, const SynthModel &model = {});

    // ---------------------------------------------------------------------------------------------
    // CIR text files

    class CirFormatError : public std::runtime_error
    {
      public:
        enum class Kind
        {
            MalformedHeader,
            MalformedRecord,
            DimensionMismatch,
            NonFinite,
            DuplicateRecord,
            MissingRecords
        };

        CirFormatError(Kind kind, std::size_t line, const std::string &message, const std::string &source = {});

        Kind kind() const { return kind_; }
        std::size_t line() const { return line_; }
        const std::string &message() const { return message_; }

      private:
        Kind kind_;
        std::size_t line_;
        std::string message_;
    };

    void write_cir(std::ostream &out, const ChannelSet &set);
    ChannelSet read_cir(std::istream &in);

    void export_cir(const ChannelSet &set, const std::filesystem::path &path);
    ChannelSet import_cir(const std::filesystem::path &path);

    /// Record count a header declares: K*N + L*M*N + L*K*M.
    std::size_t cir_record_count(const ChannelDims &dims);
}
