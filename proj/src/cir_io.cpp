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

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

namespace risdeploy
{
    CirFormatError::CirFormatError(Kind kind, std::size_t line, const std::string &message, const std::string &source)
        : std::runtime_error((source.empty() ? std::string() : source + ": ") + "line " + std::to_string(line) + ": " +
                             message),
          kind_(kind), line_(line), message_(message)
    {
    }

    std::size_t cir_record_count(const ChannelDims &d)
    {
        const auto K = static_cast<std::size_t>(d.K), L = static_cast<std::size_t>(d.L);
        const auto M = static_cast<std::size_t>(d.M), N = static_cast<std::size_t>(d.N);
        return K * N + L * M * N + L * K * M;
    }

    namespace
    {
        void put_double(std::ostream &out, double v)
        {
            char buf[64];
            const auto res = std::to_chars(buf, buf + sizeof(buf), v);
            out.write(buf, res.ptr - buf);
        }

        void put_complex(std::ostream &out, cd v)
        {
            out << ' ';
            put_double(out, v.real());
            out << ' ';
            put_double(out, v.imag());
            out << '\n';
        }

        std::vector<std::string_view> split(std::string_view line)
        {
            std::vector<std::string_view> out;
            std::size_t i = 0;
            while (i < line.size())
            {
                while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
                    ++i;
                const std::size_t start = i;
                while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
                    ++i;
                if (i > start)
                    out.push_back(line.substr(start, i - start));
            }
            return out;
        }

        bool parse_int(std::string_view s, long long &v)
        {
            const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
            return res.ec == std::errc() && res.ptr == s.data() + s.size();
        }

        bool parse_double(std::string_view s, double &v)
        {
            const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
            return res.ec == std::errc() && res.ptr == s.data() + s.size();
        }

        bool parse_key(std::string_view token, std::string_view key, long long &v)
        {
            if (token.size() <= key.size() + 1 || token.substr(0, key.size()) != key || token[key.size()] != '=')
                return false;
            return parse_int(token.substr(key.size() + 1), v) && v >= 0;
        }
    }

    void write_cir(std::ostream &out, const ChannelSet &set)
    {
        const auto &d = set.dims();
        out << "CIR v1 K=" << d.K << " L=" << d.L << " M=" << d.M << " N=" << d.N << '\n';
        for (int k = 0; k < d.K; ++k)
            for (int n = 0; n < d.N; ++n)
            {
                out << "D " << k << ' ' << n;
                put_complex(out, set.direct(k)(n));
            }
        for (int l = 0; l < d.L; ++l)
            for (int m = 0; m < d.M; ++m)
                for (int n = 0; n < d.N; ++n)
                {
                    out << "G " << l << ' ' << m << ' ' << n;
                    put_complex(out, set.bs_ris(l)(m, n));
                }
        for (int l = 0; l < d.L; ++l)
            for (int k = 0; k < d.K; ++k)
                for (int m = 0; m < d.M; ++m)
                {
                    out << "R " << l << ' ' << k << ' ' << m;
                    put_complex(out, set.ris_ue(l, k)(m));
                }
    }

    ChannelSet read_cir(std::istream &in)
    {
        using Kind = CirFormatError::Kind;
        std::string line;
        std::size_t lineno = 0;

        if (!std::getline(in, line))
            throw CirFormatError(Kind::MalformedHeader, 1, "empty file, expected 'CIR v1 K=<k> L=<l> M=<m> N=<n>'");
        lineno = 1;
        ChannelDims d;
        {
            const auto tok = split(line);
            long long K = 0, L = 0, M = 0, N = 0;
            if (tok.size() != 6 || tok[0] != "CIR" || tok[1] != "v1" || !parse_key(tok[2], "K", K) ||
                !parse_key(tok[3], "L", L) || !parse_key(tok[4], "M", M) || !parse_key(tok[5], "N", N))
                throw CirFormatError(Kind::MalformedHeader, 1, "malformed header, expected 'CIR v1 K=<k> L=<l> M=<m> N=<n>'");
            if (K < 1 || N < 1 || (L > 0 && M < 1))
                throw CirFormatError(Kind::MalformedHeader, 1, "header dimensions K, N (and M when L > 0) must be positive");
            d = {static_cast<int>(K), static_cast<int>(L), static_cast<int>(M), static_cast<int>(N)};
        }

        std::vector<CVec> direct(d.K, CVec::Zero(d.N));
        std::vector<CMat> bs_ris(d.L, CMat::Zero(d.M, d.N));
        std::vector<std::vector<CVec>> ris_ue(d.L, std::vector<CVec>(d.K, CVec::Zero(d.M)));
        std::vector<char> seen(cir_record_count(d), 0);
        const std::size_t g_base = static_cast<std::size_t>(d.K) * d.N;
        const std::size_t r_base = g_base + static_cast<std::size_t>(d.L) * d.M * d.N;
        std::size_t found = 0;

        while (std::getline(in, line))
        {
            ++lineno;
            const auto tok = split(line);
            if (tok.empty())
                continue;

            const std::string_view tag = tok[0];
            const std::size_t nidx = tag == "D" ? 2 : (tag == "G" || tag == "R") ? 3 : 0;
            if (nidx == 0)
                throw CirFormatError(Kind::MalformedRecord, lineno, "unknown record type '" + std::string(tag) + "'");
            if (tok.size() != nidx + 3)
                throw CirFormatError(Kind::MalformedRecord, lineno,
                                     "record '" + std::string(tag) + "' needs " + std::to_string(nidx) +
                                         " indices and 2 values");
            long long idx[3] = {0, 0, 0};
            for (std::size_t i = 0; i < nidx; ++i)
                if (!parse_int(tok[1 + i], idx[i]))
                    throw CirFormatError(Kind::MalformedRecord, lineno, "bad index '" + std::string(tok[1 + i]) + "'");
            double re = 0.0, im = 0.0;
            if (!parse_double(tok[nidx + 1], re) || !parse_double(tok[nidx + 2], im))
                throw CirFormatError(Kind::MalformedRecord, lineno, "bad complex value");
            if (!std::isfinite(re) || !std::isfinite(im))
                throw CirFormatError(Kind::NonFinite, lineno, "non-finite channel entry");

            auto in_range = [](long long v, int hi) { return v >= 0 && v < hi; };
            std::size_t slot = 0;
            const cd value(re, im);
            if (tag == "D")
            {
                if (!in_range(idx[0], d.K) || !in_range(idx[1], d.N))
                    throw CirFormatError(Kind::DimensionMismatch, lineno, "D index out of range for header dimensions");
                slot = static_cast<std::size_t>(idx[0]) * d.N + idx[1];
                direct[idx[0]](idx[1]) = value;
            }
            else if (tag == "G")
            {
                if (!in_range(idx[0], d.L) || !in_range(idx[1], d.M) || !in_range(idx[2], d.N))
                    throw CirFormatError(Kind::DimensionMismatch, lineno, "G index out of range for header dimensions");
                slot = g_base + (static_cast<std::size_t>(idx[0]) * d.M + idx[1]) * d.N + idx[2];
                bs_ris[idx[0]](idx[1], idx[2]) = value;
            }
            else
            {
                if (!in_range(idx[0], d.L) || !in_range(idx[1], d.K) || !in_range(idx[2], d.M))
                    throw CirFormatError(Kind::DimensionMismatch, lineno, "R index out of range for header dimensions");
                slot = r_base + (static_cast<std::size_t>(idx[0]) * d.K + idx[1]) * d.M + idx[2];
                ris_ue[idx[0]][idx[1]](idx[2]) = value;
            }
            if (seen[slot])
                throw CirFormatError(Kind::DuplicateRecord, lineno, "duplicate record");
            seen[slot] = 1;
            ++found;
        }

        if (found != seen.size())
            throw CirFormatError(Kind::MissingRecords, lineno,
                                 "expected " + std::to_string(seen.size()) + " records, found " + std::to_string(found));
        return ChannelSet(std::move(direct), std::move(bs_ris), std::move(ris_ue));
    }

    void export_cir(const ChannelSet &set, const std::filesystem::path &path)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write CIR file: " + path.string());
        write_cir(out, set);
        if (!out)
            throw std::runtime_error("failed writing CIR file: " + path.string());
    }

    ChannelSet import_cir(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot open CIR file: " + path.string());
        try
        {
            return read_cir(in);
        }
        catch (const CirFormatError &e)
        {
            throw CirFormatError(e.kind(), e.line(), e.message(), path.string());
        }
    }
}
