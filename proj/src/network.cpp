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

#include "bighead/network.hpp"

#include <cstring>
#include <numeric>
#include <sstream>

#include "bighead/errors.hpp"
#include "bighead/hash.hpp"

namespace bighead {

namespace {

bool is_identity(const UnitaryMatrix &m) {
    for (int r = 0; r < m.dim; ++r) {
        for (int c = 0; c < m.dim; ++c) {
            if (m(r, c) != (r == c ? cplx(1) : cplx(0))) {
                return false;
            }
        }
    }
    return true;
}

UnitaryMatrix kron(const UnitaryMatrix &a, const UnitaryMatrix &b) {
    UnitaryMatrix out{4, std::vector<cplx>(16)};
    for (int ra = 0; ra < 2; ++ra)
        for (int ca = 0; ca < 2; ++ca)
            for (int rb = 0; rb < 2; ++rb)
                for (int cb = 0; cb < 2; ++cb) {
                    out(ra * 2 + rb, ca * 2 + cb) = a(ra, ca) * b(rb, cb);
                }
    return out;
}

// new[..., o, ...] = sum_i m(o, i) * old[..., i, ...] on axis `pos`.
void apply_on_leg(Tensor<double> &t, int pos, const UnitaryMatrix &m) {
    const std::uint64_t low = std::uint64_t{1} << (t.rank() - 1 - pos);
    const std::uint64_t blocks = t.data.size() / (2 * low);
    for (std::uint64_t hi = 0; hi < blocks; ++hi) {
        for (std::uint64_t lo = 0; lo < low; ++lo) {
            cplx &x0 = t.data[(hi * 2) * low + lo];
            cplx &x1 = t.data[(hi * 2 + 1) * low + lo];
            const cplx y0 = m(0, 0) * x0 + m(0, 1) * x1;
            const cplx y1 = m(1, 0) * x0 + m(1, 1) * x1;
            x0 = y0;
            x1 = y1;
        }
    }
}

struct LineState {
    UnitaryMatrix pending = identity_matrix(2);
    int node = -1;
    int out_index = -1;
};

void check_config(const Circuit &c, const std::set<int> &open, const std::map<int, int> &fixed) {
    for (int q : open) {
        if (!c.layout.contains(q)) {
            throw Error(Errc::config_mismatch, "open qubit " + std::to_string(q) + " not in layout");
        }
        if (fixed.count(q) != 0) {
            throw Error(Errc::config_mismatch, "qubit " + std::to_string(q) + " is both open and fixed");
        }
    }
    for (auto [q, bit] : fixed) {
        if (!c.layout.contains(q)) {
            throw Error(Errc::config_mismatch, "fixed qubit " + std::to_string(q) + " not in layout");
        }
        if (bit != 0 && bit != 1) {
            throw Error(Errc::config_mismatch, "fixed bit for qubit " + std::to_string(q) + " is not 0/1");
        }
    }
    if (open.size() + fixed.size() != c.layout.ids.size()) {
        throw Error(Errc::config_mismatch, "open and fixed qubits do not cover the layout");
    }
}

class Builder {
   public:
    Builder(const Circuit &c, const std::set<int> &open, const std::map<int, int> &fixed)
        : c_(c), open_(open), fixed_(fixed) {
        tn_.layout = c.layout;
        tn_.fixed_output_bits = fixed;
        for (int q : c.layout.ids) {
            lines_[q] = LineState{};
        }
    }

    TensorNetwork fused() {
        for (std::size_t m = 0; m < c_.moments.size(); ++m) {
            for (const GateSpec &g : c_.moments[m]) {
                const UnitaryMatrix u = gate_matrix(g);
                if (g.targets.size() == 1) {
                    auto &line = lines_.at(g.targets[0]);
                    line.pending = matmul(u, line.pending);
                    continue;
                }
                auto &la = lines_.at(g.targets[0]);
                auto &lb = lines_.at(g.targets[1]);
                const UnitaryMatrix fused_u = matmul(u, kron(la.pending, lb.pending));
                add_two_qubit(g, static_cast<int>(m), fused_u, la, lb);
                la.pending = identity_matrix(2);
                lb.pending = identity_matrix(2);
            }
        }
        for (int q : c_.layout.ids) {
            auto &line = lines_.at(q);
            if (line.node < 0) {
                add_bare_line(q, line);
                continue;
            }
            TensorNode &node = tn_.nodes[static_cast<std::size_t>(line.node)];
            Tensor<double> t = node.tensor();
            const int pos = t.position(line.out_index);
            if (!is_identity(line.pending)) {
                apply_on_leg(t, pos, line.pending);
            }
            if (open_.count(q) != 0) {
                tn_.open_output_indices[q] = line.out_index;
            } else {
                t = pin_index(t, line.out_index, fixed_.at(q));
            }
            node.indices = std::move(t.indices);
            node.data = std::move(t.data);
            tn_.output_nodes[q] = line.node;
        }
        return finish();
    }

    TensorNetwork unfused() {
        for (int q : c_.layout.ids) {
            auto &line = lines_.at(q);
            line.out_index = next_index_++;
            line.node = add_node({line.out_index}, {1.0, 0.0}, {NodeOrigin::Kind::initial_state, -1, {q}});
        }
        for (std::size_t m = 0; m < c_.moments.size(); ++m) {
            for (const GateSpec &g : c_.moments[m]) {
                const UnitaryMatrix u = gate_matrix(g);
                const NodeOrigin origin{NodeOrigin::Kind::gate, static_cast<int>(m), g.targets};
                if (g.targets.size() == 1) {
                    auto &line = lines_.at(g.targets[0]);
                    const int out = next_index_++;
                    std::vector<cplx> data(4);
                    for (int i = 0; i < 2; ++i)
                        for (int o = 0; o < 2; ++o) data[static_cast<std::size_t>(i * 2 + o)] = u(o, i);
                    line.node = add_node({line.out_index, out}, std::move(data), origin);
                    line.out_index = out;
                    continue;
                }
                add_two_qubit(g, static_cast<int>(m), u, lines_.at(g.targets[0]), lines_.at(g.targets[1]));
            }
        }
        for (int q : c_.layout.ids) {
            auto &line = lines_.at(q);
            if (open_.count(q) != 0) {
                tn_.open_output_indices[q] = line.out_index;
                tn_.output_nodes[q] = line.node;
            } else {
                std::vector<cplx> proj(2, 0.0);
                proj[static_cast<std::size_t>(fixed_.at(q))] = 1.0;
                tn_.output_nodes[q] =
                    add_node({line.out_index}, std::move(proj), {NodeOrigin::Kind::output_projector, -1, {q}});
            }
        }
        return finish();
    }

   private:
    int add_node(std::vector<int> indices, std::vector<cplx> data, NodeOrigin origin) {
        const int id = static_cast<int>(tn_.nodes.size());
        tn_.nodes.push_back(TensorNode{id, std::move(indices), std::move(data), std::move(origin)});
        return id;
    }

    // Axes [in_a, in_b, out_a, out_b]; a missing input is the |0> initial state.
    void add_two_qubit(const GateSpec &g, int moment, const UnitaryMatrix &u, LineState &la, LineState &lb) {
        constexpr int kInA = -1;
        constexpr int kInB = -2;
        const int out_a = next_index_++;
        const int out_b = next_index_++;
        Tensor<double> t{{la.out_index >= 0 ? la.out_index : kInA, lb.out_index >= 0 ? lb.out_index : kInB, out_a, out_b},
                         std::vector<cplx>(16)};
        for (int ia = 0; ia < 2; ++ia)
            for (int ib = 0; ib < 2; ++ib)
                for (int oa = 0; oa < 2; ++oa)
                    for (int ob = 0; ob < 2; ++ob) {
                        t.data[static_cast<std::size_t>(ia * 8 + ib * 4 + oa * 2 + ob)] = u(oa * 2 + ob, ia * 2 + ib);
                    }
        if (la.out_index < 0) {
            t = pin_index(t, kInA, 0);
        }
        if (lb.out_index < 0) {
            t = pin_index(t, kInB, 0);
        }
        const int id = add_node(std::move(t.indices), std::move(t.data), {NodeOrigin::Kind::gate, moment, g.targets});
        la.node = id;
        la.out_index = out_a;
        lb.node = id;
        lb.out_index = out_b;
    }

    // A qubit never touched by a two-qubit gate collapses to one small tensor.
    void add_bare_line(int q, const LineState &line) {
        const cplx v0 = line.pending(0, 0);
        const cplx v1 = line.pending(1, 0);
        const NodeOrigin origin{NodeOrigin::Kind::qubit_line, -1, {q}};
        if (open_.count(q) != 0) {
            const int idx = next_index_++;
            tn_.output_nodes[q] = add_node({idx}, {v0, v1}, origin);
            tn_.open_output_indices[q] = idx;
        } else {
            tn_.output_nodes[q] = add_node({}, {fixed_.at(q) == 0 ? v0 : v1}, origin);
        }
    }

    TensorNetwork finish() {
        tn_.index_endpoints = compute_index_endpoints(tn_.nodes);
        check_network(tn_);
        return std::move(tn_);
    }

    const Circuit &c_;
    const std::set<int> &open_;
    const std::map<int, int> &fixed_;
    TensorNetwork tn_;
    std::map<int, LineState> lines_;
    int next_index_ = 0;
};

std::string base64(const unsigned char *p, std::size_t n) {
    static const char *tbl = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((n + 2) / 3 * 4);
    for (std::size_t i = 0; i < n; i += 3) {
        const std::uint32_t b0 = p[i];
        const std::uint32_t b1 = i + 1 < n ? p[i + 1] : 0;
        const std::uint32_t b2 = i + 2 < n ? p[i + 2] : 0;
        const std::uint32_t v = (b0 << 16) | (b1 << 8) | b2;
        out.push_back(tbl[(v >> 18) & 63]);
        out.push_back(tbl[(v >> 12) & 63]);
        out.push_back(i + 1 < n ? tbl[(v >> 6) & 63] : '=');
        out.push_back(i + 2 < n ? tbl[v & 63] : '=');
    }
    return out;
}

}  // namespace

std::vector<int> TensorNetwork::open_qubits() const {
    std::vector<int> out;
    for (const auto &kv : open_output_indices) {
        out.push_back(kv.first);
    }
    return out;
}

std::string TensorNetwork::s1() const {
    std::string out;
    for (int q : layout.ids) {
        auto it = fixed_output_bits.find(q);
        if (it != fixed_output_bits.end()) {
            out.push_back(it->second ? '1' : '0');
        }
    }
    return out;
}

bool TensorNetwork::is_open_index(int index) const {
    auto it = index_endpoints.find(index);
    return it != index_endpoints.end() && it->second.size() == 1;
}

std::uint64_t TensorNetwork::topology_hash() const {
    std::ostringstream ss;
    for (const auto &n : nodes) {
        ss << n.id << ':';
        for (int i : n.indices) {
            ss << i << ',';
        }
        ss << ';';
    }
    ss << '|';
    for (auto [q, idx] : open_output_indices) {
        ss << q << '=' << idx << ';';
    }
    ss << '|';
    for (auto [q, bit] : fixed_output_bits) {
        ss << q << ';';
    }
    return fnv1a(ss.str());
}

TensorNetwork build_network(const Circuit &c, const std::set<int> &open_qubits, const std::map<int, int> &fixed_bits,
                            const BuildOptions &opts) {
    check_config(c, open_qubits, fixed_bits);
    Builder b(c, open_qubits, fixed_bits);
    return opts.fuse ? b.fused() : b.unfused();
}

TensorNetwork build_network(const Circuit &c, const std::vector<int> &open_qubits, const std::string &s1,
                            const BuildOptions &opts) {
    std::set<int> open(open_qubits.begin(), open_qubits.end());
    std::map<int, int> fixed;
    std::size_t k = 0;
    for (int q : c.layout.ids) {
        if (open.count(q) != 0) {
            continue;
        }
        if (k >= s1.size()) {
            throw Error(Errc::config_mismatch, "s1 has " + std::to_string(s1.size()) + " bits but " +
                                                   std::to_string(c.layout.ids.size() - open.size()) +
                                                   " qubits are closed");
        }
        const char ch = s1[k++];
        if (ch != '0' && ch != '1') {
            throw Error(Errc::config_mismatch, "s1 must be a 0/1 string");
        }
        fixed[q] = ch - '0';
    }
    if (k != s1.size()) {
        throw Error(Errc::config_mismatch, "s1 has " + std::to_string(s1.size()) + " bits but " + std::to_string(k) +
                                               " qubits are closed");
    }
    return build_network(c, open, fixed, opts);
}

std::map<int, std::vector<int>> compute_index_endpoints(const std::vector<TensorNode> &nodes) {
    std::map<int, std::vector<int>> out;
    for (const auto &n : nodes) {
        for (int i : n.indices) {
            out[i].push_back(n.id);
        }
    }
    return out;
}

void check_network(const TensorNetwork &tn) {
    for (std::size_t k = 0; k < tn.nodes.size(); ++k) {
        const auto &n = tn.nodes[k];
        if (n.id != static_cast<int>(k)) {
            throw Error(Errc::shape_mismatch, "node ids must equal their position");
        }
        if (n.data.size() != (std::size_t{1} << n.indices.size())) {
            throw Error(Errc::shape_mismatch, "node " + std::to_string(n.id) + " data size does not match its rank");
        }
        std::set<int> uniq(n.indices.begin(), n.indices.end());
        if (uniq.size() != n.indices.size()) {
            throw Error(Errc::shape_mismatch, "node " + std::to_string(n.id) + " repeats an index");
        }
    }
    if (compute_index_endpoints(tn.nodes) != tn.index_endpoints) {
        throw Error(Errc::shape_mismatch, "index_endpoints out of date");
    }
    std::set<int> open_idx;
    for (auto [q, idx] : tn.open_output_indices) {
        open_idx.insert(idx);
    }
    for (const auto &[idx, ends] : tn.index_endpoints) {
        if (ends.size() > 2) {
            throw Error(Errc::shape_mismatch, "index " + std::to_string(idx) + " has more than two endpoints");
        }
        if ((ends.size() == 1) != (open_idx.count(idx) != 0)) {
            throw Error(Errc::shape_mismatch, "index " + std::to_string(idx) + " dangling/open mismatch");
        }
    }
}

int Graph::component_count() const {
    std::vector<int> parent(static_cast<std::size_t>(vertex_count));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        }
        return x;
    };
    int comps = vertex_count;
    for (const auto &[e, mult] : edges) {
        const int a = find(e.first);
        const int b = find(e.second);
        if (a != b) {
            parent[static_cast<std::size_t>(a)] = b;
            --comps;
        }
    }
    return comps;
}

std::vector<std::vector<std::pair<int, int>>> Graph::adjacency() const {
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(vertex_count));
    for (const auto &[e, mult] : edges) {
        adj[static_cast<std::size_t>(e.first)].emplace_back(e.second, mult);
        adj[static_cast<std::size_t>(e.second)].emplace_back(e.first, mult);
    }
    return adj;
}

Graph network_graph(const TensorNetwork &tn) {
    Graph g;
    g.vertex_count = tn.node_count();
    g.weight.resize(static_cast<std::size_t>(g.vertex_count));
    g.dangling.assign(static_cast<std::size_t>(g.vertex_count), 0);
    for (const auto &n : tn.nodes) {
        g.weight[static_cast<std::size_t>(n.id)] = n.rank();
    }
    for (const auto &[idx, ends] : tn.index_endpoints) {
        if (ends.size() == 1) {
            ++g.dangling[static_cast<std::size_t>(ends[0])];
        } else {
            g.edges[{std::min(ends[0], ends[1]), std::max(ends[0], ends[1])}] += 1;
        }
    }
    return g;
}

nlohmann::json network_to_json(const TensorNetwork &tn) {
    static const char *kinds[] = {"gate", "initial_state", "output_projector", "qubit_line"};
    nlohmann::json j;
    j["qubits"] = tn.layout.ids;
    auto nodes = nlohmann::json::array();
    for (const auto &n : tn.nodes) {
        std::vector<unsigned char> bytes(n.data.size() * 16);
        for (std::size_t k = 0; k < n.data.size(); ++k) {
            const double parts[2] = {n.data[k].real(), n.data[k].imag()};
            for (int p = 0; p < 2; ++p) {
                std::uint64_t bits = 0;
                std::memcpy(&bits, &parts[p], 8);
                for (int b = 0; b < 8; ++b) {
                    bytes[k * 16 + static_cast<std::size_t>(p * 8 + b)] = static_cast<unsigned char>(bits >> (8 * b));
                }
            }
        }
        nodes.push_back({{"id", n.id},
                         {"indices", n.indices},
                         {"origin", kinds[static_cast<int>(n.origin.kind)]},
                         {"moment", n.origin.moment},
                         {"qubits", n.origin.qubits},
                         {"data", base64(bytes.data(), bytes.size())}});
    }
    j["nodes"] = std::move(nodes);
    nlohmann::json open = nlohmann::json::object();
    for (auto [q, idx] : tn.open_output_indices) {
        open[std::to_string(q)] = idx;
    }
    j["open_output_indices"] = std::move(open);
    nlohmann::json fixed = nlohmann::json::object();
    for (auto [q, bit] : tn.fixed_output_bits) {
        fixed[std::to_string(q)] = bit;
    }
    j["fixed_output_bits"] = std::move(fixed);
    return j;
}

}  // namespace bighead
