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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bighead {

using cplx = std::complex<double>;

enum class GateKind { sqrt_x, sqrt_y, sqrt_w, fsim, cz };

/// Canonical lower-case name used by the JSON IR ("sqrt_x", ..., "fsim", "cz").
std::string_view gate_kind_name(GateKind kind);
/// Accepts canonical names and the qsim aliases (x_1_2, y_1_2, hz_1_2, fs),
/// case-insensitively.
std::optional<GateKind> gate_kind_from_name(std::string_view name);
int gate_arity(GateKind kind);
int gate_param_count(GateKind kind);

struct GateSpec {
    GateKind kind = GateKind::sqrt_x;
    std::vector<int> targets;
    /// theta, phi (radians) for FSIM; empty otherwise.
    std::vector<double> params;
    /// 1-based source line, 0 if the gate was not parsed from text.
    int line = 0;

    bool operator==(const GateSpec &other) const {
        return kind == other.kind && targets == other.targets && params == other.params;
    }
};

struct QubitLayout {
    /// Qubit labels in ascending order. Bitstrings are written in this order.
    std::vector<int> ids;

    int count() const {
        return static_cast<int>(ids.size());
    }
    bool contains(int id) const;
    /// Position of `id` in `ids`, or -1.
    int position(int id) const;
    static QubitLayout contiguous(int n);

    bool operator==(const QubitLayout &) const = default;
};

struct CircuitMetadata {
    std::string source;
    std::string sequence;
    std::string seed;

    bool operator==(const CircuitMetadata &) const = default;
};

struct Circuit {
    QubitLayout layout;
    std::vector<std::vector<GateSpec>> moments;
    /// Cycle count stated by the source, if any. See cycles().
    std::optional<int> declared_cycles;
    CircuitMetadata metadata;

    int num_qubits() const {
        return layout.count();
    }
    /// One cycle is a single-qubit layer followed by a two-qubit layer, so the
    /// cycle count is the number of moments holding a two-qubit gate.
    int cycles() const;
    std::size_t gate_count() const;

    bool operator==(const Circuit &) const = default;
};

enum class CircuitFormat { qsim_text, native_json };

Circuit parse_circuit(std::string_view text, CircuitFormat format);
/// Reads a file; ".json" selects the native IR, anything else qsim text.
Circuit load_circuit(const std::filesystem::path &path);
/// Native JSON IR: {"n", "qubits", "cycles"?, "metadata", "gates": [{"moment",
/// "kind", "targets", "params"}]}.
std::string serialize_circuit(const Circuit &c);
/// qsim text with canonical aliases and %.17g parameters. Requires a
/// contiguous 0..n-1 layout; throws Error(format_error) otherwise.
std::string serialize_qsim(const Circuit &c);
std::string circuit_hash(const Circuit &c);

/// Dense row-major unitary of dimension 2 or 4. Two-qubit basis order is
/// |t0 t1> with the first target as the high bit.
struct UnitaryMatrix {
    int dim = 0;
    std::vector<cplx> data;

    cplx operator()(int r, int c) const {
        return data[static_cast<std::size_t>(r * dim + c)];
    }
    cplx &operator()(int r, int c) {
        return data[static_cast<std::size_t>(r * dim + c)];
    }
};

UnitaryMatrix gate_matrix(const GateSpec &g);
UnitaryMatrix matmul(const UnitaryMatrix &a, const UnitaryMatrix &b);
UnitaryMatrix identity_matrix(int dim);

enum class DiagnosticKind {
    moment_collision,
    arity_mismatch,
    param_mismatch,
    qubit_out_of_range,
    duplicate_target,
    duplicate_qubit_id,
    cycle_mismatch,
    non_finite_param,
};

struct Diagnostic {
    DiagnosticKind kind;
    int moment = -1;
    int line = 0;
    int qubit = -1;
    std::string message;
};

std::vector<Diagnostic> validate_circuit(const Circuit &c);

}  // namespace bighead
