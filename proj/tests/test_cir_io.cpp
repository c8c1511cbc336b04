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

#include "oracles.hpp"
#include "risdeploy/channel.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace risdeploy;

namespace
{
    std::string serialize(const ChannelSet &set)
    {
        std::ostringstream out;
        write_cir(out, set);
        return out.str();
    }

    CirFormatError::Kind parse_error_kind(const std::string &text, std::size_t *line = nullptr)
    {
        std::istringstream in(text);
        try
        {
            read_cir(in);
        }
        catch (const CirFormatError &e)
        {
            if (line)
                *line = e.line();
            return e.kind();
        }
        FAIL("no error raised");
        return CirFormatError::Kind::MalformedHeader;
    }
}

TEST_CASE("record count formula")
{
    CHECK(cir_record_count({2, 1, 4, 2}) == 2 * 2 + 1 * 4 * 2 + 1 * 2 * 4);
}

TEST_CASE("bit-exact round trip")
{
    std::mt19937_64 rng(21);
    const ChannelSet set = oracle::random_set(rng, 2, 1, 4, 2, 1e-5, {1});
    const std::string text = serialize(set);
    CHECK(text.rfind("CIR v1 K=2 L=1 M=4 N=2\n", 0) == 0);
    std::istringstream in(text);
    const ChannelSet back = read_cir(in);
    CHECK(back == set);
    CHECK(serialize(back) == text);

    // cascades are recomputed on import
    for (int k = 0; k < 2; ++k)
        CHECK(back.cascaded(0, k) == cascade(back.bs_ris(0), back.ris_ue(0, k)));
}

TEST_CASE("records in any order")
{
    std::mt19937_64 rng(22);
    const ChannelSet set = oracle::random_set(rng, 2, 2, 2, 1, 1.0);
    std::istringstream in(serialize(set));
    std::string header, line;
    std::getline(in, header);
    std::vector<std::string> records;
    while (std::getline(in, line))
        records.push_back(line);
    std::reverse(records.begin(), records.end());
    std::string shuffled = header + "\n";
    for (const auto &r : records)
        shuffled += r + "\n";
    std::istringstream in2(shuffled);
    CHECK(read_cir(in2) == set);
}

TEST_CASE("file round trip")
{
    const RadioConfig radio;
    const ChannelSet set = synth_channel_set(build_default_cabin(8, radio, 2), radio);
    const auto path = std::filesystem::temp_directory_path() / "risdeploy_cir_roundtrip.cir";
    export_cir(set, path);
    const ChannelSet back = import_cir(path);
    CHECK(back == set);
    export_cir(back, path.string() + ".2");
    std::ifstream a(path), b(path.string() + ".2");
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
    std::filesystem::remove(path);
    std::filesystem::remove(path.string() + ".2");
}

TEST_CASE("format errors carry kind and line")
{
    std::mt19937_64 rng(23);
    const ChannelSet set = oracle::random_set(rng, 2, 1, 4, 2, 1.0);
    const std::string good = serialize(set);
    const std::size_t total = cir_record_count(set.dims());

    // drop the last record
    std::string truncated = good.substr(0, good.rfind('\n', good.size() - 2) + 1);
    {
        std::istringstream in(truncated);
        try
        {
            read_cir(in);
            FAIL("accepted a truncated file");
        }
        catch (const CirFormatError &e)
        {
            CHECK(e.kind() == CirFormatError::Kind::MissingRecords);
            CHECK(e.message() == "expected " + std::to_string(total) + " records, found " + std::to_string(total - 1));
        }
    }

    CHECK(parse_error_kind("CIR v2 K=1 L=0 M=0 N=1\nD 0 0 1 0\n") == CirFormatError::Kind::MalformedHeader);
    CHECK(parse_error_kind("") == CirFormatError::Kind::MalformedHeader);

    std::size_t line = 0;
    CHECK(parse_error_kind("CIR v1 K=1 L=0 M=0 N=2\nD 0 0 1 0\nD 0 1 nan 0\n", &line) ==
          CirFormatError::Kind::NonFinite);
    CHECK(line == 3);
    CHECK(parse_error_kind("CIR v1 K=1 L=0 M=0 N=2\nD 0 5 1 0\n", &line) == CirFormatError::Kind::DimensionMismatch);
    CHECK(line == 2);
    CHECK(parse_error_kind("CIR v1 K=1 L=0 M=0 N=2\nD 0 0 1 0\nD 0 0 1 0\n", &line) ==
          CirFormatError::Kind::DuplicateRecord);
    CHECK(line == 3);
    CHECK(parse_error_kind("CIR v1 K=1 L=0 M=0 N=1\nX 0 0 1 0\n") == CirFormatError::Kind::MalformedRecord);
    CHECK(parse_error_kind("CIR v1 K=1 L=0 M=0 N=1\nD 0 0 1\n") == CirFormatError::Kind::MalformedRecord);
}

TEST_CASE("missing file names the path")
{
    try
    {
        import_cir("/nonexistent/dir/file.cir");
        FAIL("no error");
    }
    catch (const std::exception &e)
    {
        CHECK(std::string(e.what()).find("/nonexistent/dir/file.cir") != std::string::npos);
    }
}
