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

#include <cstring>
#include <istream>
#include <ostream>

#include "bighead/engine.hpp"
#include "bighead/errors.hpp"

namespace bighead {

namespace {

constexpr char kMagic[4] = {'B', 'H', 'H', 'V'};
constexpr std::uint32_t kVersion = kPartialFormatVersion;

template <typename U>
void put(std::ostream &os, U v) {
    unsigned char buf[sizeof(U)];
    for (std::size_t i = 0; i < sizeof(U); ++i) {
        buf[i] = static_cast<unsigned char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff);
    }
    os.write(reinterpret_cast<const char *>(buf), sizeof(U));
}

void put_double(std::ostream &os, double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, 8);
    put(os, bits);
}

template <typename U>
U get(std::istream &is) {
    unsigned char buf[sizeof(U)];
    if (!is.read(reinterpret_cast<char *>(buf), sizeof(U))) {
        throw Error(Errc::format_error, "partial file truncated");
    }
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
        v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    }
    return static_cast<U>(v);
}

double get_double(std::istream &is) {
    const auto bits = get<std::uint64_t>(is);
    double d;
    std::memcpy(&d, &bits, 8);
    return d;
}

}  // namespace

// Layout (all little-endian):
//   char[4] "BHHV" | u32 version | u64 provenance | u32 n_c | u64 range_begin
//   u64 range_end | u64 total | u8 mode | u8 precision | u16 zero
//   u32 s1_len | s1 bytes | n_c x i32 cut index ids
//   u32 block_count | per block: u64 start, u64 size, 2^n_c x (f64 re, f64 im)
void write_partial(std::ostream &os, const HeadVector &hv) {
    os.write(kMagic, 4);
    put<std::uint32_t>(os, kVersion);
    put<std::uint64_t>(os, hv.provenance);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(hv.n_c()));
    put<std::uint64_t>(os, hv.range_begin);
    put<std::uint64_t>(os, hv.range_end);
    put<std::uint64_t>(os, hv.total);
    put<std::uint8_t>(os, static_cast<std::uint8_t>(hv.mode));
    put<std::uint8_t>(os, static_cast<std::uint8_t>(hv.precision));
    put<std::uint16_t>(os, 0);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(hv.s1.size()));
    os.write(hv.s1.data(), static_cast<std::streamsize>(hv.s1.size()));
    for (int i : hv.cut_indices) {
        put<std::uint32_t>(os, static_cast<std::uint32_t>(i));
    }
    put<std::uint32_t>(os, static_cast<std::uint32_t>(hv.blocks.size()));
    for (const auto &b : hv.blocks) {
        put<std::uint64_t>(os, b.start);
        put<std::uint64_t>(os, b.size);
        for (const auto &x : b.data) {
            put_double(os, x.real());
            put_double(os, x.imag());
        }
    }
    if (!os) {
        throw Error(Errc::io_error, "failed writing partial head vector");
    }
}

HeadVector read_partial(std::istream &is) {
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
        throw Error(Errc::format_error, "not a partial head vector file");
    }
    if (get<std::uint32_t>(is) != kVersion) {
        throw Error(Errc::format_error, "unsupported partial file version");
    }
    HeadVector hv;
    hv.provenance = get<std::uint64_t>(is);
    const auto n_c = get<std::uint32_t>(is);
    if (n_c > 40) {
        throw Error(Errc::format_error, "partial file n_c too large");
    }
    hv.range_begin = get<std::uint64_t>(is);
    hv.range_end = get<std::uint64_t>(is);
    hv.total = get<std::uint64_t>(is);
    const auto mode = get<std::uint8_t>(is);
    const auto prec = get<std::uint8_t>(is);
    if (mode > 1 || prec > 1) {
        throw Error(Errc::format_error, "partial file has an unknown mode or precision");
    }
    hv.mode = static_cast<Reduction>(mode);
    hv.precision = static_cast<Precision>(prec);
    get<std::uint16_t>(is);
    const auto s1_len = get<std::uint32_t>(is);
    hv.s1.resize(s1_len);
    if (s1_len > 0 && !is.read(hv.s1.data(), s1_len)) {
        throw Error(Errc::format_error, "partial file truncated");
    }
    for (std::uint32_t k = 0; k < n_c; ++k) {
        hv.cut_indices.push_back(static_cast<int>(get<std::uint32_t>(is)));
    }
    const auto nb = get<std::uint32_t>(is);
    const std::size_t len = std::size_t{1} << n_c;
    for (std::uint32_t k = 0; k < nb; ++k) {
        HeadBlock b;
        b.start = get<std::uint64_t>(is);
        b.size = get<std::uint64_t>(is);
        b.data.resize(len);
        for (auto &x : b.data) {
            const double re = get_double(is);
            const double im = get_double(is);
            x = {re, im};
        }
        hv.blocks.push_back(std::move(b));
    }
    return hv;
}

}  // namespace bighead
