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

#include "catch_amalgamated.hpp"

#include "risdeploy/scene.hpp"

#include <filesystem>

using namespace risdeploy;

TEST_CASE("default cabin sizes")
{
    const CabinScene s16 = build_default_cabin(16);
    CHECK(s16.num_ues() == 66);
    CHECK(s16.num_candidates() == 22);
    for (const auto &c : s16.ris_candidates)
    {
        CHECK(c.num_elements() == 256);
        CHECK(c.center.z() == Catch::Approx(1.7).margin(1e-12));
    }
    const CabinScene s8 = build_default_cabin(8);
    for (const auto &c : s8.ris_candidates)
        CHECK(c.num_elements() == 64);
    CHECK_THROWS_AS(build_default_cabin(12), std::invalid_argument);
}

TEST_CASE("candidates face the BS and mirror across the corridor")
{
    const CabinScene s = build_default_cabin(8);
    REQUIRE(s.num_candidates() == 2 * static_cast<std::size_t>(s.rows));
    for (int r = 0; r < s.rows; ++r)
    {
        const auto &a = s.ris_candidates[2 * r];
        const auto &b = s.ris_candidates[2 * r + 1];
        CHECK(a.center.x() == Catch::Approx(b.center.x()).margin(1e-9));
        CHECK(a.center.y() == Catch::Approx(-b.center.y()).margin(1e-9));
        CHECK(a.center.z() == Catch::Approx(b.center.z()).margin(1e-9));
        for (const auto *c : {&a, &b})
        {
            CHECK(c->normal.norm() == Catch::Approx(1.0).margin(1e-12));
            CHECK(c->normal.dot(s.bs_position - c->center) > 0.0);
        }
    }
}

TEST_CASE("radio defaults")
{
    const RadioConfig radio;
    CHECK(radio.wavelength() == Catch::Approx(kSpeedOfLight / 28e9).epsilon(1e-12));
    CHECK(radio.num_bs_antennas() == 64);
    CHECK(radio.tx_power_w() == Catch::Approx(std::pow(10.0, 2.5) * 1e-3).epsilon(1e-12));
    CHECK(radio.noise_psd_w_per_hz() == Catch::Approx(1e-3 * std::pow(10.0, (-174.0 + 7.0) / 10.0)).epsilon(1e-12));
}

TEST_CASE("validation report")
{
    const RadioConfig radio;
    CabinScene s = build_default_cabin(8);
    CHECK(validate(s, radio).empty());

    CabinScene dup = s;
    dup.ue_positions[5] = dup.ue_positions[2];
    const auto report = validate(dup, radio);
    REQUIRE(report.size() == 1);
    CHECK(report[0].find("ue_positions[5]") != std::string::npos);

    RadioConfig bad = radio;
    bad.bandwidth_hz = 0.0;
    const auto r2 = validate(s, bad);
    REQUIRE(r2.size() == 1);
    CHECK(r2[0] == "bandwidth must be positive");

    CabinScene outside = s;
    outside.bs_position.z() = 10.0;
    CHECK_FALSE(validate(outside, radio).empty());
}

TEST_CASE("row counting")
{
    const CabinScene s = build_default_cabin(8);
    const double pitch = s.layout.seat_pitch;
    CHECK(s.rows_between(0.5 * pitch, 0.5 * pitch) == 0);
    CHECK(s.rows_between(0.5 * pitch, 1.5 * pitch) == 0);
    CHECK(s.rows_between(0.5 * pitch, 3.5 * pitch) == 2);
    CHECK(s.row_of(2.3 * pitch) == 2);
    CHECK(s.row_of(-1.0) == 0);
    CHECK(s.row_of(1e3) == s.rows - 1);
}

TEST_CASE("scene document round trip")
{
    RadioConfig radio;
    radio.noise_figure_db = 9.0;
    const CabinScene s = build_default_cabin(16, radio);
    const auto doc = scene_to_json(s, radio);
    for (const char *key : {"rows", "seats_per_row", "bs_position", "ue_positions", "ris_candidates", "carrier_hz",
                            "bandwidth_hz", "tx_power_dbm", "noise_figure_db"})
        CHECK(doc.contains(key));
    CHECK(doc["ris_candidates"][0].contains("element_spacing"));

    const auto path = std::filesystem::temp_directory_path() / "risdeploy_scene_roundtrip.json";
    save_scene(path, s, radio);
    CabinScene back;
    RadioConfig radio_back;
    load_scene(path, back, radio_back);
    std::filesystem::remove(path);

    CHECK(back.rows == s.rows);
    CHECK(back.seats_per_row == s.seats_per_row);
    CHECK(back.bs_position == s.bs_position);
    CHECK(back.ue_positions == s.ue_positions);
    REQUIRE(back.ris_candidates.size() == s.ris_candidates.size());
    for (std::size_t l = 0; l < s.ris_candidates.size(); ++l)
    {
        CHECK(back.ris_candidates[l].center == s.ris_candidates[l].center);
        CHECK(back.ris_candidates[l].normal == s.ris_candidates[l].normal);
        CHECK(back.ris_candidates[l].elements_per_side == s.ris_candidates[l].elements_per_side);
        CHECK(back.ris_candidates[l].element_spacing == s.ris_candidates[l].element_spacing);
    }
    CHECK(radio_back.noise_figure_db == 9.0);
    CHECK(radio_back.carrier_hz == radio.carrier_hz);
    CHECK(back.materials.size() == s.materials.size());
    CHECK(scene_to_json(back, radio_back) == doc);
}

TEST_CASE("malformed scene document")
{
    CabinScene s;
    RadioConfig r;
    auto doc = scene_to_json(build_default_cabin(8), RadioConfig{});
    doc["bs_position"] = nlohmann::json::array({1.0, 2.0});
    CHECK_THROWS_AS(scene_from_json(doc, s, r), std::invalid_argument);
}
