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

#include <complex>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bighead/circuit.hpp"
#include "bighead/tensor.hpp"
#include "json.hpp"

namespace bighead {

struct NodeOrigin {
    enum class Kind { gate, initial_state, output_projector, qubit_line };
    Kind kind = Kind::gate;
    /// Moment of the gate, -1 for boundary tensors.
    int moment = -1;
    std::vector<int> qubits;
};

struct TensorNode {
    int id = 0;
    std::vector<int> indices;
    std::vector<cplx> data;
    NodeOrigin origin;

    int rank() const {
        return static_cast<int>(indices.size());
    }
    Tensor<double> tensor() const {
        return Tensor<double>{indices, data};
    }
};

struct TensorNetwork {
    std::vector<TensorNode> nodes;
    /// index id -> the one (dangling) or two node ids carrying it
    std::map<int, std::vector<int>> index_endpoints;
    /// open qubit id -> its dangling output index
    std::map<int, int> open_output_indices;
    /// closed qubit id -> projected bit
    std::map<int, int> fixed_output_bits;
    /// qubit id -> node holding that qubit's output leg or projection
    std::map<int, int> output_nodes;
    QubitLayout layout;

    int node_count() const {
        return static_cast<int>(nodes.size());
    }
    /// Open qubit ids, ascending.
    std::vector<int> open_qubits() const;
    /// Fixed bits of the closed qubits in layout order ("" when all open).
    std::string s1() const;
    bool is_open_index(int index) const;
    /// Hash of the connectivity (index lists, open legs); tensor data excluded.
    std::uint64_t topology_hash() const;
};

struct BuildOptions {
    /// Absorb single-qubit gates and boundary vectors into two-qubit gate tensors.
    bool fuse = true;
};

/// Network for <s1; s2| U |0...0> with the open qubits' output legs left dangling.
TensorNetwork build_network(const Circuit &c, const std::set<int> &open_qubits, const std::map<int, int> &fixed_bits,
                            const BuildOptions &opts = {});

/// Convenience overload: `s1` lists the bits of the closed qubits in layout order.
TensorNetwork build_network(const Circuit &c, const std::vector<int> &open_qubits, const std::string &s1,
                            const BuildOptions &opts = {});

/// Rebuilds the index -> endpoints map from the node index lists.
std::map<int, std::vector<int>> compute_index_endpoints(const std::vector<TensorNode> &nodes);

/// Throws Error(shape_mismatch) if a structural invariant is broken.
void check_network(const TensorNetwork &tn);

/// Vertex-weighted multigraph view of a network.
struct Graph {
    int vertex_count = 0;
    /// (u, v) with u < v -> number of shared indices
    std::map<std::pair<int, int>, int> edges;
    /// log2 of each tensor's size
    std::vector<int> weight;
    /// number of dangling indices on each vertex
    std::vector<int> dangling;

    int component_count() const;
    std::vector<std::vector<std::pair<int, int>>> adjacency() const;
};

Graph network_graph(const TensorNetwork &tn);

/// Debug dump: topology plus base64-encoded little-endian tensor payloads.
nlohmann::json network_to_json(const TensorNetwork &tn);

}  // namespace bighead
