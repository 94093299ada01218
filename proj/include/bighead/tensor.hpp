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

#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "bighead/errors.hpp"

namespace bighead {

/// Dense tensor with every index of dimension 2, row-major: the first index is
/// the most significant bit of the flat offset.
template <typename T>
struct Tensor {
    std::vector<int> indices;
    std::vector<std::complex<T>> data;

    int rank() const {
        return static_cast<int>(indices.size());
    }
    int position(int index) const {
        auto it = std::find(indices.begin(), indices.end(), index);
        return it == indices.end() ? -1 : static_cast<int>(it - indices.begin());
    }
};

template <typename To, typename From>
Tensor<To> tensor_cast(const Tensor<From> &t) {
    Tensor<To> out{t.indices, {}};
    out.data.reserve(t.data.size());
    for (const auto &x : t.data) {
        out.data.emplace_back(static_cast<To>(x.real()), static_cast<To>(x.imag()));
    }
    return out;
}

/// Reorders axes so that result.indices == order (a permutation of t.indices).
template <typename T>
Tensor<T> permute(const Tensor<T> &t, const std::vector<int> &order) {
    const int r = t.rank();
    if (static_cast<int>(order.size()) != r) {
        throw Error(Errc::shape_mismatch, "permute: rank mismatch");
    }
    if (order == t.indices) {
        return t;
    }
    // stride (in the source) of each destination axis
    std::vector<std::uint64_t> src_stride(static_cast<std::size_t>(r));
    for (int d = 0; d < r; ++d) {
        const int p = t.position(order[static_cast<std::size_t>(d)]);
        if (p < 0) {
            throw Error(Errc::shape_mismatch, "permute: unknown index");
        }
        src_stride[static_cast<std::size_t>(d)] = std::uint64_t{1} << (r - 1 - p);
    }
    Tensor<T> out{order, std::vector<std::complex<T>>(t.data.size())};
    std::vector<int> digit(static_cast<std::size_t>(r), 0);
    std::uint64_t src = 0;
    for (std::size_t dst = 0; dst < out.data.size(); ++dst) {
        out.data[dst] = t.data[src];
        // odometer increment over destination axes, last axis fastest
        for (int d = r - 1; d >= 0; --d) {
            auto &dg = digit[static_cast<std::size_t>(d)];
            if (dg == 0) {
                dg = 1;
                src += src_stride[static_cast<std::size_t>(d)];
                break;
            }
            dg = 0;
            src -= src_stride[static_cast<std::size_t>(d)];
        }
    }
    return out;
}

/// Fixes `index` to `bit` and drops the axis.
template <typename T>
Tensor<T> pin_index(const Tensor<T> &t, int index, int bit) {
    const int p = t.position(index);
    if (p < 0) {
        throw Error(Errc::shape_mismatch, "pin_index: index not on tensor");
    }
    const int r = t.rank();
    const std::uint64_t low = std::uint64_t{1} << (r - 1 - p);
    Tensor<T> out;
    out.indices = t.indices;
    out.indices.erase(out.indices.begin() + p);
    out.data.resize(t.data.size() / 2);
    for (std::uint64_t k = 0; k < out.data.size(); ++k) {
        const std::uint64_t hi = k / low;
        const std::uint64_t lo = k % low;
        out.data[k] = t.data[(hi * 2 + static_cast<std::uint64_t>(bit)) * low + lo];
    }
    return out;
}

/// Contracts every index shared by `a` and `b`. Result axes: free axes of `a`
/// in order, then free axes of `b`. Adds the number of complex
/// multiplications performed (2^(n_A + n_B + n_AB)) to *mults.
template <typename T>
Tensor<T> contract_pair(const Tensor<T> &a, const Tensor<T> &b, std::uint64_t *mults = nullptr) {
    std::vector<int> shared, free_a, free_b;
    for (int i : a.indices) {
        (b.position(i) >= 0 ? shared : free_a).push_back(i);
    }
    for (int i : b.indices) {
        if (a.position(i) < 0) {
            free_b.push_back(i);
        }
    }
    std::vector<int> order_a = free_a;
    order_a.insert(order_a.end(), shared.begin(), shared.end());
    std::vector<int> order_b = shared;
    order_b.insert(order_b.end(), free_b.begin(), free_b.end());
    const Tensor<T> pa = permute(a, order_a);
    const Tensor<T> pb = permute(b, order_b);

    const std::size_t m = std::size_t{1} << free_a.size();
    const std::size_t k = std::size_t{1} << shared.size();
    const std::size_t n = std::size_t{1} << free_b.size();
    Tensor<T> out;
    out.indices = free_a;
    out.indices.insert(out.indices.end(), free_b.begin(), free_b.end());
    out.data.assign(m * n, std::complex<T>(0));
    for (std::size_t i = 0; i < m; ++i) {
        std::complex<T> *row = out.data.data() + i * n;
        for (std::size_t s = 0; s < k; ++s) {
            const std::complex<T> x = pa.data[i * k + s];
            const std::complex<T> *brow = pb.data.data() + s * n;
            for (std::size_t j = 0; j < n; ++j) {
                row[j] += x * brow[j];
            }
        }
    }
    if (mults != nullptr) {
        *mults += static_cast<std::uint64_t>(m) * k * n;
    }
    return out;
}

}  // namespace bighead
