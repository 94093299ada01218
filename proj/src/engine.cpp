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

#include "bighead/engine.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "bighead/errors.hpp"
#include "bighead/hash.hpp"

namespace bighead {

const char *precision_name(Precision p) {
    return p == Precision::single ? "single" : "double";
}

const char *reduction_name(Reduction r) {
    return r == Reduction::free ? "free" : "fixed";
}

const std::vector<cplx> &HeadVector::data() const {
    if (!complete()) {
        throw Error(Errc::range_gap, "head vector covers slices [" + std::to_string(range_begin) + ", " +
                                         std::to_string(range_end) + ") of " + std::to_string(total));
    }
    return blocks.front().data;
}

std::uint64_t head_provenance(const ContractionPlan &plan, const std::string &s1) {
    return hash_combine(plan.hash(), fnv1a(s1));
}

double flop_estimate(const Complexity &cx) {
    return 8.0 * cx.tc;
}

namespace {

// Runs job(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::uint64_t count, int threads, const std::function<void(std::uint64_t)> &job) {
    if (threads <= 1 || count <= 1) {
        for (std::uint64_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex mu;
    std::vector<std::thread> pool;
    const int n = static_cast<int>(std::min<std::uint64_t>(count, static_cast<std::uint64_t>(threads)));
    for (int w = 0; w < n; ++w) {
        pool.emplace_back([&] {
            try {
                for (std::uint64_t i = next++; i < count; i = next++) job(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!failure) failure = std::current_exception();
                next = count;
            }
        });
    }
    for (auto &t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::vector<int> first_cut_indices(const TensorNetwork &tn, const ContractionTree &tree) {
    if (!tree.head_root || !tree.tail_root) {
        return {};
    }
    const auto b = boundary_sets(tn, tree);
    const auto &h = b[static_cast<std::size_t>(*tree.head_root)];
    const auto &t = b[static_cast<std::size_t>(*tree.tail_root)];
    std::vector<int> out;
    std::set_intersection(h.begin(), h.end(), t.begin(), t.end(), std::back_inserter(out));
    return out;
}

template <typename T>
std::vector<cplx> head_slice(const TensorNetwork &tn, const ContractionPlan &plan, const std::vector<int> &cut,
                             std::uint64_t assignment, EngineStats *stats) {
    const int ne = plan.slices.n_e();
    std::map<int, int> pins;
    for (int j = 0; j < ne; ++j) {
        pins[plan.slices.sliced_indices[static_cast<std::size_t>(j)]] =
            static_cast<int>((assignment >> (ne - 1 - j)) & 1U);
    }
    std::uint64_t mults = 0;
    const Tensor<T> t = permute(contract_tree<T>(tn, plan.tree, pins, plan.tree.head_root, &mults), cut);
    if (stats != nullptr) {
        stats->head_contractions += 1;
        stats->multiplications += mults;
    }
    std::vector<cplx> out(t.data.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = cplx(t.data[k].real(), t.data[k].imag());
    }
    return out;
}

void add_into(std::vector<cplx> &dst, const std::vector<cplx> &src) {
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
}

struct Level {
    int level;
    std::vector<cplx> data;
};

// Pairwise sum of one aligned power-of-two block of slices.
std::vector<cplx> fixed_block_sum(std::uint64_t start, std::uint64_t size, int threads,
                                  const std::function<std::vector<cplx>(std::uint64_t)> &slice) {
    std::vector<Level> stack;
    const std::uint64_t batch = threads > 1 ? static_cast<std::uint64_t>(threads) * 4 : 1;
    for (std::uint64_t b0 = 0; b0 < size; b0 += batch) {
        const std::uint64_t n = std::min(batch, size - b0);
        std::vector<std::vector<cplx>> results(n);
        parallel_for(n, threads, [&](std::uint64_t i) { results[i] = slice(start + b0 + i); });
        for (auto &r : results) {
            stack.push_back({0, std::move(r)});
            while (stack.size() >= 2 && stack[stack.size() - 1].level == stack[stack.size() - 2].level) {
                Level right = std::move(stack.back());
                stack.pop_back();
                add_into(stack.back().data, right.data);
                stack.back().level += 1;
            }
        }
    }
    return std::move(stack.front().data);
}

}  // namespace

HeadVector compute_head_vector(const TensorNetwork &tn, const ContractionPlan &plan, const RunOptions &opts,
                               std::optional<std::pair<std::uint64_t, std::uint64_t>> range, EngineStats *stats) {
    HeadVector hv;
    hv.s1 = tn.s1();
    hv.cut_indices = first_cut_indices(tn, plan.tree);
    hv.provenance = head_provenance(plan, hv.s1);
    hv.mode = opts.reduction;
    hv.precision = opts.precision;
    hv.total = plan.slices.subtask_count();
    auto [begin, end] = range.value_or(std::pair<std::uint64_t, std::uint64_t>{0, hv.total});
    if (begin >= end || end > hv.total) {
        throw Error(Errc::range_out_of_bounds, "slice range [" + std::to_string(begin) + ", " + std::to_string(end) +
                                                   ") outside [0, " + std::to_string(hv.total) + ")");
    }
    hv.range_begin = begin;
    hv.range_end = end;
    if (!plan.tree.head_root) {
        if (plan.slices.n_e() != 0) {
            throw Error(Errc::config_mismatch, "plan slices indices but has no head");
        }
        hv.blocks.push_back({0, 1, {cplx(1.0)}});
        return hv;
    }
    const auto head_leaves = plan.tree.leaves_under(*plan.tree.head_root);
    for (int i : plan.slices.sliced_indices) {
        const auto &ends = tn.index_endpoints.at(i);
        for (int e : ends) {
            if (!std::binary_search(head_leaves.begin(), head_leaves.end(), e)) {
                throw Error(Errc::config_mismatch, "sliced index " + std::to_string(i) + " leaves the head");
            }
        }
    }
    auto slice = [&](std::uint64_t a) {
        return opts.precision == Precision::single ? head_slice<float>(tn, plan, hv.cut_indices, a, stats)
                                                   : head_slice<double>(tn, plan, hv.cut_indices, a, stats);
    };
    if (opts.reduction == Reduction::free) {
        std::vector<cplx> acc(std::size_t{1} << hv.n_c());
        std::mutex mu;
        parallel_for(end - begin, opts.threads, [&](std::uint64_t i) {
            const auto v = slice(begin + i);
            std::lock_guard<std::mutex> lock(mu);
            add_into(acc, v);
        });
        hv.blocks.push_back({begin, end - begin, std::move(acc)});
        return hv;
    }
    for (std::uint64_t a = begin; a < end;) {
        std::uint64_t size = 1;
        while ((a % (size * 2)) == 0 && a + size * 2 <= end) size *= 2;
        hv.blocks.push_back({a, size, fixed_block_sum(a, size, opts.threads, slice)});
        a += size;
    }
    return hv;
}

int tail_chunk_bits(const TensorNetwork &tn, const ContractionPlan &plan) {
    if (!plan.tree.tail_root) {
        return 0;
    }
    const auto open = tn.open_qubits();
    std::set<int> removed;
    for (std::size_t k = 0;; ++k) {
        if (complexity_of(tn, plan.tree, removed, plan.tree.tail_root).sc <= plan.tail_space || k == open.size()) {
            return static_cast<int>(k);
        }
        removed.insert(tn.open_output_indices.at(open[k]));
    }
}

namespace {

template <typename T>
void tail_chunk(const TensorNetwork &tn, const ContractionPlan &plan, const std::vector<cplx> &head,
                const std::vector<int> &cut, const std::vector<int> &open_idx, int chunk_bits, std::uint64_t chunk,
                std::vector<cplx> &amps, EngineStats *stats) {
    const int n2 = static_cast<int>(open_idx.size());
    const int rem = n2 - chunk_bits;
    std::map<int, int> pins;
    for (int k = 0; k < chunk_bits; ++k) {
        pins[open_idx[static_cast<std::size_t>(k)]] = static_cast<int>((chunk >> (chunk_bits - 1 - k)) & 1U);
    }
    std::vector<int> order = cut;
    order.insert(order.end(), open_idx.begin() + chunk_bits, open_idx.end());
    std::uint64_t mults = 0;
    const Tensor<T> t = permute(contract_tree<T>(tn, plan.tree, pins, plan.tree.tail_root, &mults), order);
    if (stats != nullptr) {
        stats->tail_contractions += 1;
        stats->multiplications += mults;
    }
    const std::size_t rows = std::size_t{1} << rem;
    for (std::size_t r = 0; r < rows; ++r) {
        cplx acc = 0.0;
        for (std::size_t j = 0; j < head.size(); ++j) {
            const auto &x = t.data[j * rows + r];
            acc += head[j] * cplx(x.real(), x.imag());
        }
        amps[(chunk << rem) | r] = acc;
    }
}

}  // namespace

AmplitudeTable compute_tail_amplitudes(const TensorNetwork &tn, const ContractionPlan &plan, const HeadVector &head,
                                       const RunOptions &opts, EngineStats *stats) {
    if (head.provenance != head_provenance(plan, tn.s1())) {
        throw Error(Errc::provenance_mismatch, "head vector provenance " + to_hex(head.provenance) +
                                                   " does not match this plan and s1");
    }
    const auto cut = first_cut_indices(tn, plan.tree);
    if (cut != head.cut_indices) {
        throw Error(Errc::provenance_mismatch, "head vector cut indices differ from the plan's first cut");
    }
    const std::vector<cplx> &hv = head.data();
    const auto open = tn.open_qubits();
    std::vector<int> open_idx;
    for (int q : open) open_idx.push_back(tn.open_output_indices.at(q));
    const int n2 = static_cast<int>(open.size());
    std::vector<cplx> amps(std::size_t{1} << n2);
    if (!plan.tree.tail_root) {
        amps[0] = hv.at(0);
    } else {
        const int cb = tail_chunk_bits(tn, plan);
        parallel_for(std::uint64_t{1} << cb, opts.threads, [&](std::uint64_t chunk) {
            if (opts.precision == Precision::single) {
                tail_chunk<float>(tn, plan, hv, cut, open_idx, cb, chunk, amps, stats);
            } else {
                tail_chunk<double>(tn, plan, hv, cut, open_idx, cb, chunk, amps, stats);
            }
        });
    }
    AmplitudeTable table;
    table.circuit_hash = plan.circuit_hash;
    table.s1 = head.s1;
    table.open_qubits = open;
    table.n = tn.layout.count();
    table.qubits = tn.layout.ids;
    table.rows.reserve(amps.size());
    for (std::uint64_t v = 0; v < amps.size(); ++v) {
        AmplitudeRow row;
        row.s2 = to_bits(v, n2);
        row.bitstring = splice_bitstring(tn.layout, open, head.s1, row.s2);
        row.amplitude = amps[v];
        row.probability = std::norm(amps[v]);
        table.rows.push_back(std::move(row));
    }
    return table;
}

HeadVector reduce_partials(std::vector<HeadVector> partials) {
    if (partials.empty()) {
        throw Error(Errc::range_gap, "no partial head vectors to reduce");
    }
    const HeadVector &ref = partials.front();
    for (const auto &p : partials) {
        if (p.provenance != ref.provenance || p.mode != ref.mode || p.precision != ref.precision ||
            p.total != ref.total || p.cut_indices != ref.cut_indices || p.s1 != ref.s1) {
            throw Error(Errc::provenance_mismatch, "partials come from different plans, s1 or run modes");
        }
    }
    std::vector<HeadBlock> blocks;
    for (auto &p : partials) {
        for (auto &b : p.blocks) blocks.push_back(std::move(b));
    }
    std::sort(blocks.begin(), blocks.end(), [](const HeadBlock &a, const HeadBlock &b) { return a.start < b.start; });
    std::uint64_t at = 0;
    for (const auto &b : blocks) {
        if (b.start > at) {
            throw Error(Errc::range_gap, "slices [" + std::to_string(at) + ", " + std::to_string(b.start) +
                                             ") are missing");
        }
        if (b.start < at) {
            throw Error(Errc::range_overlap, "slice " + std::to_string(b.start) + " is covered twice");
        }
        at = b.start + b.size;
    }
    if (at != ref.total) {
        throw Error(Errc::range_gap, "slices [" + std::to_string(at) + ", " + std::to_string(ref.total) +
                                         ") are missing");
    }
    HeadVector out;
    out.s1 = ref.s1;
    out.cut_indices = ref.cut_indices;
    out.provenance = ref.provenance;
    out.mode = ref.mode;
    out.precision = ref.precision;
    out.total = ref.total;
    out.range_begin = 0;
    out.range_end = ref.total;
    if (ref.mode == Reduction::free) {
        HeadBlock acc{0, ref.total, std::vector<cplx>(blocks.front().data.size())};
        for (const auto &b : blocks) add_into(acc.data, b.data);
        out.blocks.push_back(std::move(acc));
        return out;
    }
    std::vector<HeadBlock> stack;
    for (auto &b : blocks) {
        if ((b.size & (b.size - 1)) != 0 || b.start % b.size != 0) {
            throw Error(Errc::format_error, "fixed-order block is not an aligned power of two");
        }
        stack.push_back(std::move(b));
        while (stack.size() >= 2) {
            HeadBlock &l = stack[stack.size() - 2];
            const HeadBlock &r = stack.back();
            if (l.size != r.size || l.start % (2 * l.size) != 0) break;
            add_into(l.data, r.data);
            l.size *= 2;
            stack.pop_back();
        }
    }
    if (stack.size() != 1) {
        throw Error(Errc::format_error, "fixed-order blocks do not form a complete pairwise tree");
    }
    out.blocks = std::move(stack);
    return out;
}

}  // namespace bighead
