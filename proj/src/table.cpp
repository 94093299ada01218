// Copyright 2026 The Bighead Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bighead/table.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "bighead/errors.hpp"

namespace bighead {

std::string splice_bitstring(const QubitLayout &layout, const std::vector<int> &open_qubits, const std::string &s1,
                             const std::string &s2) {
    std::string out;
    out.reserve(layout.ids.size());
    std::size_t i1 = 0;
    std::size_t i2 = 0;
    for (int q : layout.ids) {
        const bool open = std::binary_search(open_qubits.begin(), open_qubits.end(), q);
        const std::string &src = open ? s2 : s1;
        std::size_t &pos = open ? i2 : i1;
        if (pos >= src.size()) {
            throw Error(Errc::length_mismatch, "s1/s2 too short for the layout");
        }
        out.push_back(src[pos++]);
    }
    if (i1 != s1.size() || i2 != s2.size()) {
        throw Error(Errc::length_mismatch, "s1/s2 longer than the layout allows");
    }
    return out;
}

std::string to_bits(std::uint64_t value, int width) {
    std::string s(static_cast<std::size_t>(width), '0');
    for (int k = 0; k < width; ++k) {
        if ((value >> (width - 1 - k)) & 1U) {
            s[static_cast<std::size_t>(k)] = '1';
        }
    }
    return s;
}

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

void write_table_tsv(std::ostream &os, const AmplitudeTable &t) {
    os << "# circuit_hash " << t.circuit_hash << '\n';
    os << "# n " << t.n << '\n';
    os << "# s1 " << (t.s1.empty() ? "-" : t.s1) << '\n';
    os << "# qubits";
    for (int q : t.qubits) {
        os << ' ' << q;
    }
    os << '\n';
    os << "# open_qubits";
    for (int q : t.open_qubits) {
        os << ' ' << q;
    }
    os << '\n';
    os << "bitstring\tamp_re\tamp_im\tprobability\n";
    for (const auto &r : t.rows) {
        os << r.bitstring << '\t' << fmt17(r.amplitude.real()) << '\t' << fmt17(r.amplitude.imag()) << '\t'
           << fmt17(r.probability) << '\n';
    }
}

AmplitudeTable read_table_tsv(std::istream &is) {
    AmplitudeTable t;
    std::string line;
    bool have_n = false;
    bool seen_columns = false;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::istringstream ss(line);
        if (line[0] == '#') {
            std::string hash, key;
            ss >> hash >> key;
            if (key == "circuit_hash") {
                ss >> t.circuit_hash;
            } else if (key == "n") {
                ss >> t.n;
                have_n = true;
            } else if (key == "s1") {
                ss >> t.s1;
                if (t.s1 == "-") {
                    t.s1.clear();
                }
            } else if (key == "qubits") {
                int q;
                while (ss >> q) {
                    t.qubits.push_back(q);
                }
            } else if (key == "open_qubits") {
                int q;
                while (ss >> q) {
                    t.open_qubits.push_back(q);
                }
            }
            continue;
        }
        if (!seen_columns) {
            seen_columns = true;
            if (line.rfind("bitstring", 0) == 0) {
                continue;
            }
        }
        AmplitudeRow r;
        double re = 0, im = 0;
        if (!(ss >> r.bitstring >> re >> im >> r.probability)) {
            throw Error(Errc::format_error, "table line " + std::to_string(lineno) + ": expected 4 columns");
        }
        r.amplitude = {re, im};
        t.rows.push_back(std::move(r));
    }
    if (!have_n) {
        t.n = t.rows.empty() ? 0 : static_cast<int>(t.rows.front().bitstring.size());
    }
    if (t.qubits.empty()) {
        for (int q = 0; q < t.n; ++q) {
            t.qubits.push_back(q);
        }
    }
    for (auto &r : t.rows) {
        if (static_cast<int>(r.bitstring.size()) != t.n) {
            throw Error(Errc::format_error, "bitstring " + r.bitstring + " does not have n bits");
        }
        r.s2.clear();
        for (std::size_t k = 0; k < t.qubits.size(); ++k) {
            if (std::binary_search(t.open_qubits.begin(), t.open_qubits.end(), t.qubits[k])) {
                r.s2.push_back(r.bitstring[k]);
            }
        }
    }
    return t;
}

std::vector<double> probabilities(const AmplitudeTable &t) {
    std::vector<double> p;
    p.reserve(t.rows.size());
    for (const auto &r : t.rows) {
        p.push_back(r.probability);
    }
    return p;
}

}  // namespace bighead
