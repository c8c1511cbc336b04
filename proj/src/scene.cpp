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

#include "risdeploy/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace risdeploy
{
    double CabinScene::cabin_half_width() const
    {
        return 0.5 * layout.corridor_width + 0.5 * seats_per_row * layout.seat_width;
    }

    int CabinScene::rows_between(double x_a, double x_b) const
    {
        const double lo = std::min(x_a, x_b);
        const double hi = std::max(x_a, x_b);
        int count = 0;
        for (int r = 0; r < rows; ++r)
        {
            const double center = (r + 0.5) * layout.seat_pitch;
            if (center > lo + 1e-9 && center < hi - 1e-9)
                ++count;
        }
        return count;
    }

    int CabinScene::row_of(double x) const
    {
        const int r = static_cast<int>(std::floor(x / layout.seat_pitch));
        return std::clamp(r, 0, std::max(rows - 1, 0));
    }

    std::map<std::string, Material> default_materials()
    {
        // Relative permittivity, conductivity (S/m) and thickness (cm) at 28 GHz.
        return {
            {"abs", {2.4, 0.028, 0.3}},
            {"glass", {6.27, 0.15, 0.3}},
            {"nylon", {3.01, 0.03, 0.25}},
            {"skin", {19.3, 30.40, 0.1}},
        };
    }

    CabinScene build_default_cabin(int ris_elements_per_side, const RadioConfig &radio, int rows, int seats_per_row,
                                   const CabinLayout &layout)
    {
        if (ris_elements_per_side != 8 && ris_elements_per_side != 16)
            throw std::invalid_argument("build_default_cabin: RIS elements per side must be 8 or 16, got " +
                                        std::to_string(ris_elements_per_side));
        if (rows < 1)
            throw std::invalid_argument("build_default_cabin: rows must be positive");
        if (seats_per_row < 2 || seats_per_row % 2 != 0)
            throw std::invalid_argument("build_default_cabin: seats_per_row must be even and at least 2");

        CabinScene scene;
        scene.rows = rows;
        scene.seats_per_row = seats_per_row;
        scene.layout = layout;
        scene.materials = default_materials();

        const double pitch = layout.seat_pitch;
        const int per_side = seats_per_row / 2;
        const double aisle_offset = 0.5 * layout.corridor_width;

        // Lateral seat centers, window seat first on the negative side.
        std::vector<double> seat_y;
        for (int s = per_side - 1; s >= 0; --s)
            seat_y.push_back(-(aisle_offset + (s + 0.5) * layout.seat_width));
        for (int s = 0; s < per_side; ++s)
            seat_y.push_back(aisle_offset + (s + 0.5) * layout.seat_width);

        const int bs_row = rows / 2;
        scene.bs_position = Vec3((bs_row + 0.5) * pitch, 0.0, layout.bs_height);

        for (int r = 0; r < rows; ++r)
            for (double y : seat_y)
                scene.ue_positions.emplace_back((r + 0.5) * pitch, y, layout.ue_height);

        const double middle_y = aisle_offset + (0.5 * (per_side - 1) + 0.5) * layout.seat_width;
        const double spacing = 0.25 * radio.wavelength();
        for (int r = 0; r < rows; ++r)
        {
            // Mounted on the row edge away from the BS so the row itself is on the reflective side.
            const double row_center = (r + 0.5) * pitch;
            const double x = row_center > scene.bs_position.x() + 1e-9 ? (r + 1) * pitch : r * pitch;
            for (double side : {-1.0, 1.0})
            {
                RisCandidate c;
                c.center = Vec3(x, side * middle_y, layout.ris_height);
                Vec3 towards = scene.bs_position - c.center;
                towards.z() = 0.0;
                c.normal = towards.normalized();
                c.elements_per_side = ris_elements_per_side;
                c.element_spacing = spacing;
                scene.ris_candidates.push_back(c);
            }
        }
        return scene;
    }

    namespace
    {
        bool finite3(const Vec3 &v) { return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z()); }
    }

    std::vector<std::string> validate(const CabinScene &scene, const RadioConfig &radio)
    {
        std::vector<std::string> out;
        if (scene.rows <= 0)
            out.push_back("rows must be positive");
        if (scene.seats_per_row <= 0)
            out.push_back("seats_per_row must be positive");
        if (scene.ue_positions.empty())
            out.push_back("scene has no UEs");
        if (!(scene.layout.seat_pitch > 0.0) || !(scene.layout.seat_width > 0.0) || !(scene.layout.cabin_height > 0.0))
            out.push_back("cabin dimensions must be positive");

        if (!finite3(scene.bs_position))
            out.push_back("bs_position is not finite");
        else
        {
            const Vec3 &b = scene.bs_position;
            const double hw = scene.cabin_half_width();
            const bool inside = b.x() > 0.0 && b.x() < scene.cabin_length() && b.y() > -hw && b.y() < hw &&
                                b.z() > 0.0 && b.z() < scene.layout.cabin_height;
            if (!inside)
                out.push_back("bs_position must lie strictly inside the cabin");
        }

        for (std::size_t i = 0; i < scene.ue_positions.size(); ++i)
        {
            if (!finite3(scene.ue_positions[i]))
            {
                out.push_back("ue_positions[" + std::to_string(i) + "] is not finite");
                continue;
            }
            for (std::size_t j = 0; j < i; ++j)
                if ((scene.ue_positions[i] - scene.ue_positions[j]).norm() < 1e-9)
                {
                    out.push_back("ue_positions[" + std::to_string(i) + "] duplicates ue_positions[" +
                                  std::to_string(j) + "]");
                    break;
                }
        }

        for (std::size_t l = 0; l < scene.ris_candidates.size(); ++l)
        {
            const auto &c = scene.ris_candidates[l];
            const std::string tag = "ris_candidates[" + std::to_string(l) + "]";
            if (!finite3(c.center) || !finite3(c.normal))
                out.push_back(tag + " is not finite");
            else if (std::abs(c.normal.norm() - 1.0) > 1e-9)
                out.push_back(tag + ".normal must be a unit vector");
            if (c.elements_per_side <= 0)
                out.push_back(tag + ".elements_per_side must be positive");
            if (!(c.element_spacing > 0.0))
                out.push_back(tag + ".element_spacing must be positive");
            for (std::size_t j = 0; j < l; ++j)
                if ((c.center - scene.ris_candidates[j].center).norm() < 1e-9)
                {
                    out.push_back(tag + " duplicates ris_candidates[" + std::to_string(j) + "]");
                    break;
                }
        }

        if (!(radio.carrier_hz > 0.0) || !std::isfinite(radio.carrier_hz))
            out.push_back("carrier frequency must be positive");
        if (!(radio.bandwidth_hz > 0.0) || !std::isfinite(radio.bandwidth_hz))
            out.push_back("bandwidth must be positive");
        if (!std::isfinite(radio.tx_power_dbm))
            out.push_back("transmit power must be finite");
        if (!std::isfinite(radio.noise_figure_db) || !std::isfinite(radio.thermal_noise_dbm_per_hz))
            out.push_back("noise density must be finite");
        if (radio.bs_antennas_per_side <= 0)
            out.push_back("bs_antennas_per_side must be positive");
        if (!(radio.bs_spacing_wavelengths > 0.0))
            out.push_back("bs antenna spacing must be positive");
        return out;
    }

    // ---------------------------------------------------------------------------------------------
    // JSON documents

    namespace
    {
        nlohmann::json vec_json(const Vec3 &v) { return nlohmann::json::array({v.x(), v.y(), v.z()}); }

        Vec3 json_vec(const nlohmann::json &j, const std::string &what)
        {
            if (!j.is_array() || j.size() != 3)
                throw std::invalid_argument(what + " must be an array of 3 numbers");
            return Vec3(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>());
        }
    }

    nlohmann::json scene_to_json(const CabinScene &scene, const RadioConfig &radio)
    {
        nlohmann::json doc;
        doc["rows"] = scene.rows;
        doc["seats_per_row"] = scene.seats_per_row;
        doc["bs_position"] = vec_json(scene.bs_position);
        doc["ue_positions"] = nlohmann::json::array();
        for (const auto &p : scene.ue_positions)
            doc["ue_positions"].push_back(vec_json(p));
        doc["ris_candidates"] = nlohmann::json::array();
        for (const auto &c : scene.ris_candidates)
            doc["ris_candidates"].push_back({{"center", vec_json(c.center)},
                                             {"normal", vec_json(c.normal)},
                                             {"elements_per_side", c.elements_per_side},
                                             {"element_spacing", c.element_spacing}});
        doc["carrier_hz"] = radio.carrier_hz;
        doc["bandwidth_hz"] = radio.bandwidth_hz;
        doc["tx_power_dbm"] = radio.tx_power_dbm;
        doc["noise_figure_db"] = radio.noise_figure_db;
        doc["thermal_noise_dbm_per_hz"] = radio.thermal_noise_dbm_per_hz;
        doc["bs_antennas_per_side"] = radio.bs_antennas_per_side;
        doc["bs_spacing_wavelengths"] = radio.bs_spacing_wavelengths;

        const auto &l = scene.layout;
        doc["layout"] = {{"seat_pitch", l.seat_pitch},         {"seat_width", l.seat_width},
                         {"corridor_width", l.corridor_width}, {"cabin_height", l.cabin_height},
                         {"ue_height", l.ue_height},           {"ris_height", l.ris_height},
                         {"bs_height", l.bs_height}};
        doc["materials"] = nlohmann::json::object();
        for (const auto &[name, m] : scene.materials)
            doc["materials"][name] = {
                {"permittivity", m.permittivity}, {"conductivity", m.conductivity}, {"thickness_cm", m.thickness_cm}};
        return doc;
    }

    void scene_from_json(const nlohmann::json &doc, CabinScene &scene, RadioConfig &radio)
    {
        CabinScene s;
        RadioConfig r;
        try
        {
            s.rows = doc.at("rows").get<int>();
            s.seats_per_row = doc.at("seats_per_row").get<int>();
            s.bs_position = json_vec(doc.at("bs_position"), "bs_position");
            for (const auto &p : doc.at("ue_positions"))
                s.ue_positions.push_back(json_vec(p, "ue_positions[]"));
            for (const auto &c : doc.at("ris_candidates"))
            {
                RisCandidate cand;
                cand.center = json_vec(c.at("center"), "ris_candidates[].center");
                cand.normal = json_vec(c.at("normal"), "ris_candidates[].normal");
                cand.elements_per_side = c.at("elements_per_side").get<int>();
                cand.element_spacing = c.at("element_spacing").get<double>();
                s.ris_candidates.push_back(cand);
            }
            r.carrier_hz = doc.value("carrier_hz", r.carrier_hz);
            r.bandwidth_hz = doc.value("bandwidth_hz", r.bandwidth_hz);
            r.tx_power_dbm = doc.value("tx_power_dbm", r.tx_power_dbm);
            r.noise_figure_db = doc.value("noise_figure_db", r.noise_figure_db);
            r.thermal_noise_dbm_per_hz = doc.value("thermal_noise_dbm_per_hz", r.thermal_noise_dbm_per_hz);
            r.bs_antennas_per_side = doc.value("bs_antennas_per_side", r.bs_antennas_per_side);
            r.bs_spacing_wavelengths = doc.value("bs_spacing_wavelengths", r.bs_spacing_wavelengths);

            if (doc.contains("layout"))
            {
                const auto &l = doc.at("layout");
                s.layout.seat_pitch = l.value("seat_pitch", s.layout.seat_pitch);
                s.layout.seat_width = l.value("seat_width", s.layout.seat_width);
                s.layout.corridor_width = l.value("corridor_width", s.layout.corridor_width);
                s.layout.cabin_height = l.value("cabin_height", s.layout.cabin_height);
                s.layout.ue_height = l.value("ue_height", s.layout.ue_height);
                s.layout.ris_height = l.value("ris_height", s.layout.ris_height);
                s.layout.bs_height = l.value("bs_height", s.layout.bs_height);
            }
            if (doc.contains("materials"))
                for (const auto &[name, m] : doc.at("materials").items())
                    s.materials[name] = {m.at("permittivity").get<double>(), m.at("conductivity").get<double>(),
                                         m.at("thickness_cm").get<double>()};
        }
        catch (const nlohmann::json::exception &e)
        {
            throw std::invalid_argument(std::string("scene document: ") + e.what());
        }
        scene = std::move(s);
        radio = r;
    }

    void save_scene(const std::filesystem::path &path, const CabinScene &scene, const RadioConfig &radio)
    {
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("cannot write scene file: " + path.string());
        out << scene_to_json(scene, radio).dump(2) << '\n';
    }

    void load_scene(const std::filesystem::path &path, CabinScene &scene, RadioConfig &radio)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open scene file: " + path.string());
        nlohmann::json doc;
        try
        {
            in >> doc;
        }
        catch (const nlohmann::json::parse_error &e)
        {
            throw std::invalid_argument(path.string() + ": " + e.what());
        }
        scene_from_json(doc, scene, radio);
    }
}
