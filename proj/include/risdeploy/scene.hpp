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

#include "json.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace risdeploy
{
    /// Cabin dimensions used by the default generator and by the blockage model.
    /// Rows run along +x starting at x = 0; the corridor axis is y = 0; the floor is z = 0.
    struct CabinLayout
    {
        double seat_pitch = 0.8;
        double seat_width = 0.5;
        double corridor_width = 0.5;
        double cabin_height = 2.2;
        double ue_height = 1.1;
        double ris_height = 1.7;
        double bs_height = 2.0;
    };

    /// Dielectric description of a cabin material. Carried as scene metadata only.
    struct Material
    {
        double permittivity = 1.0;
        double conductivity = 0.0;
        double thickness_cm = 0.0;
    };

    struct RisCandidate
    {
        Vec3 center = Vec3::Zero();
        Vec3 normal = Vec3::UnitX(); // reflective side
        int elements_per_side = 16;
        double element_spacing = 0.0; // meters

        int num_elements() const { return elements_per_side * elements_per_side; }
    };

    struct CabinScene
    {
        int rows = 0;
        int seats_per_row = 0;
        Vec3 bs_position = Vec3::Zero();
        std::vector<Vec3> ue_positions;
        std::vector<RisCandidate> ris_candidates;
        CabinLayout layout;
        std::map<std::string, Material> materials;

        std::size_t num_ues() const { return ue_positions.size(); }
        std::size_t num_candidates() const { return ris_candidates.size(); }

        double cabin_length() const { return rows * layout.seat_pitch; }
        double cabin_half_width() const;

        /// Number of seat rows whose centers lie strictly between the two longitudinal positions.
        int rows_between(double x_a, double x_b) const;

        /// Row index containing the longitudinal position x (clamped to the cabin).
        int row_of(double x) const;
    };

    /// Link-budget parameters. Noise PSD is thermal density plus receiver noise figure.
    struct RadioConfig
    {
        double carrier_hz = 28e9;
        double bandwidth_hz = 1e9;
        double tx_power_dbm = 25.0;
        double noise_figure_db = 7.0;
        double thermal_noise_dbm_per_hz = -174.0;
        int bs_antennas_per_side = 8;
        double bs_spacing_wavelengths = 0.5;

        double wavelength() const { return kSpeedOfLight / carrier_hz; }
        double tx_power_w() const { return 1e-3 * db_to_linear(tx_power_dbm); }
        double noise_psd_w_per_hz() const { return 1e-3 * db_to_linear(thermal_noise_dbm_per_hz + noise_figure_db); }
        double bs_spacing() const { return bs_spacing_wavelengths * wavelength(); }
        int num_bs_antennas() const { return bs_antennas_per_side * bs_antennas_per_side; }

        /// B * N0 / P: the squared channel norm that yields an SNR of one.
        double noise_scale() const { return bandwidth_hz * noise_psd_w_per_hz() / tx_power_w(); }
    };

    std::map<std::string, Material> default_materials();

    /// Seated cabin with a ceiling BS at the center of the middle row and two RIS candidates per row
    /// mounted above the middle seats on both sides of the corridor, reflective side toward the BS.
    /// Throws std::invalid_argument for element counts other than 8 or 16.
    CabinScene build_default_cabin(int ris_elements_per_side, const RadioConfig &radio = {},
                                   int rows = 11, int seats_per_row = 6, const CabinLayout &layout = {});

    /// Returns human-readable violations; empty means the scene and radio are usable.
    std::vector<std::string> validate(const CabinScene &scene, const RadioConfig &radio);

    // Scene documents (JSON). Field names are part of the file format.
    nlohmann::json scene_to_json(const CabinScene &scene, const RadioConfig &radio);
    void scene_from_json(const nlohmann::json &doc, CabinScene &scene, RadioConfig &radio);

    void save_scene(const std::filesystem::path &path, const CabinScene &scene, const RadioConfig &radio);
    void load_scene(const std::filesystem::path &path, CabinScene &scene, RadioConfig &radio);
}
