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

#include "bighead/circuit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "bighead/errors.hpp"
#include "bighead/hash.hpp"
#include "json.hpp"

namespace bighead {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) {
            ++i;
        }
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) {
            ++j;
        }
        if (j > i) {
            out.push_back(s.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

bool parse_int(std::string_view tok, int &out) {
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc() && p == tok.data() + tok.size();
}

bool parse_double(std::string_view tok, double &out) {
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc() && p == tok.data() + tok.size() && std::isfinite(out);
}

// Collects gates by moment and rejects qubit reuse inside a moment.
class MomentCollector {
   public:
    void add(int moment, GateSpec g) {
        for (int q : g.targets) {
            if (!used_.insert({moment, q}).second) {
                throw CircuitError(Errc::moment_collision, g.line,
                                   "qubit " + std::to_string(q) + " used twice in moment " + std::to_string(moment));
            }
        }
        by_moment_[moment].push_back(std::move(g));
    }

    std::vector<std::vector<GateSpec>> take() {
        std::vector<std::vector<GateSpec>> out;
        out.reserve(by_moment_.size());
        for (auto &[m, gates] : by_moment_) {
            out.push_back(std::move(gates));
        }
        return out;
    }

   private:
    std::set<std::pair<int, int>> used_;
    std::map<int, std::vector<GateSpec>> by_moment_;
};

Circuit parse_qsim(std::string_view text) {
    Circuit c;
    MomentCollector collector;
    bool have_count = false;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            nl = text.size();
        }
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        auto toks = split_ws(line);
        if (!have_count) {
            int n = 0;
            if (toks.size() != 1 || !parse_int(toks[0], n) || n < 0) {
                throw CircuitError(Errc::malformed_line, line_no, "expected qubit count");
            }
            c.layout = QubitLayout::contiguous(n);
            have_count = true;
            continue;
        }
        if (toks.size() < 3) {
            throw CircuitError(Errc::malformed_line, line_no, "expected '<moment> <gate> <qubit>...'");
        }
        int moment = 0;
        if (!parse_int(toks[0], moment) || moment < 0) {
            throw CircuitError(Errc::malformed_line, line_no, "bad moment '" + std::string(toks[0]) + "'");
        }
        auto kind = gate_kind_from_name(toks[1]);
        if (!kind) {
            throw CircuitError(Errc::unknown_gate, line_no, "unknown gate '" + std::string(toks[1]) + "'");
        }
        GateSpec g;
        g.kind = *kind;
        g.line = line_no;
        const std::size_t arity = static_cast<std::size_t>(gate_arity(*kind));
        const std::size_t nparams = static_cast<std::size_t>(gate_param_count(*kind));
        if (toks.size() != 2 + arity + nparams) {
            throw CircuitError(Errc::malformed_line, line_no,
                               "gate '" + std::string(toks[1]) + "' expects " + std::to_string(arity) + " qubit(s) and " +
                                   std::to_string(nparams) + " parameter(s)");
        }
        for (std::size_t k = 0; k < arity; ++k) {
            int q = 0;
            if (!parse_int(toks[2 + k], q)) {
                throw CircuitError(Errc::malformed_line, line_no, "bad qubit '" + std::string(toks[2 + k]) + "'");
            }
            if (!c.layout.contains(q)) {
                throw CircuitError(Errc::qubit_out_of_range, line_no, "qubit " + std::to_string(q) + " out of range");
            }
            g.targets.push_back(q);
        }
        if (arity == 2 && g.targets[0] == g.targets[1]) {
            throw CircuitError(Errc::malformed_line, line_no, "two-qubit gate on a single qubit");
        }
        for (std::size_t k = 0; k < nparams; ++k) {
            double v = 0;
            if (!parse_double(toks[2 + arity + k], v)) {
                throw CircuitError(Errc::malformed_line, line_no, "bad parameter '" + std::string(toks[2 + arity + k]) + "'");
            }
            g.params.push_back(v);
        }
        collector.add(moment, std::move(g));
    }
    if (!have_count) {
        throw CircuitError(Errc::malformed_line, 1, "empty circuit file");
    }
    c.moments = collector.take();
    return c;
}

Circuit parse_native_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw CircuitError(Errc::malformed_line, 0, std::string("invalid JSON: ") + e.what());
    }
    Circuit c;
    try {
        const int n = j.at("n").get<int>();
        if (n < 0) {
            throw CircuitError(Errc::malformed_line, 0, "negative qubit count");
        }
        if (j.contains("qubits")) {
            c.layout.ids = j.at("qubits").get<std::vector<int>>();
            if (static_cast<int>(c.layout.ids.size()) != n) {
                throw CircuitError(Errc::malformed_line, 0, "\"qubits\" length differs from \"n\"");
            }
            if (!std::is_sorted(c.layout.ids.begin(), c.layout.ids.end()) ||
                std::adjacent_find(c.layout.ids.begin(), c.layout.ids.end()) != c.layout.ids.end()) {
                throw CircuitError(Errc::malformed_line, 0, "\"qubits\" must be strictly ascending");
            }
        } else {
            c.layout = QubitLayout::contiguous(n);
        }
        if (j.contains("cycles") && !j.at("cycles").is_null()) {
            c.declared_cycles = j.at("cycles").get<int>();
        }
        if (j.contains("metadata")) {
            const auto &m = j.at("metadata");
            c.metadata.source = m.value("source", "");
            c.metadata.sequence = m.value("sequence", "");
            c.metadata.seed = m.value("seed", "");
        }
        MomentCollector collector;
        int entry = 0;
        for (const auto &jg : j.at("gates")) {
            ++entry;
            GateSpec g;
            g.line = entry;
            const std::string kname = jg.at("kind").get<std::string>();
            auto kind = gate_kind_from_name(kname);
            if (!kind) {
                throw CircuitError(Errc::unknown_gate, entry, "unknown gate '" + kname + "'");
            }
            g.kind = *kind;
            g.targets = jg.at("targets").get<std::vector<int>>();
            if (jg.contains("params")) {
                g.params = jg.at("params").get<std::vector<double>>();
            }
            if (static_cast<int>(g.targets.size()) != gate_arity(g.kind) ||
                static_cast<int>(g.params.size()) != gate_param_count(g.kind)) {
                throw CircuitError(Errc::malformed_line, entry, "arity or parameter count mismatch for '" + kname + "'");
            }
            for (int q : g.targets) {
                if (!c.layout.contains(q)) {
                    throw CircuitError(Errc::qubit_out_of_range, entry, "qubit " + std::to_string(q) + " out of range");
                }
            }
            if (g.targets.size() == 2 && g.targets[0] == g.targets[1]) {
                throw CircuitError(Errc::malformed_line, entry, "two-qubit gate on a single qubit");
            }
            const int moment = jg.at("moment").get<int>();
            if (moment < 0) {
                throw CircuitError(Errc::malformed_line, entry, "negative moment");
            }
            collector.add(moment, std::move(g));
        }
        c.moments = collector.take();
    } catch (const nlohmann::json::exception &e) {
        throw CircuitError(Errc::malformed_line, 0, std::string("bad circuit JSON: ") + e.what());
    }
    return c;
}

// Google's file names look like circuit_n53_m20_s0_e0_pABCDCDAB.txt.
void tag_from_filename(Circuit &c, const std::string &name) {
    static const std::regex re(R"(_m(\d+)_s(\d+)(?:_e\d+)?_p([A-Z]+))");
    std::smatch m;
    if (std::regex_search(name, m, re)) {
        c.declared_cycles = std::stoi(m[1].str());
        c.metadata.seed = m[2].str();
        c.metadata.sequence = m[3].str();
    }
}

}  // namespace

std::string_view gate_kind_name(GateKind kind) {
    switch (kind) {
        case GateKind::sqrt_x: return "sqrt_x";
        case GateKind::sqrt_y: return "sqrt_y";
        case GateKind::sqrt_w: return "sqrt_w";
        case GateKind::fsim: return "fsim";
        case GateKind::cz: return "cz";
    }
    return "?";
}

std::optional<GateKind> gate_kind_from_name(std::string_view name) {
    const std::string s = lower(name);
    if (s == "x_1_2" || s == "sqrt_x") return GateKind::sqrt_x;
    if (s == "y_1_2" || s == "sqrt_y") return GateKind::sqrt_y;
    if (s == "hz_1_2" || s == "sqrt_w") return GateKind::sqrt_w;
    if (s == "fsim" || s == "fs") return GateKind::fsim;
    if (s == "cz") return GateKind::cz;
    return std::nullopt;
}

int gate_arity(GateKind kind) {
    return (kind == GateKind::fsim || kind == GateKind::cz) ? 2 : 1;
}

int gate_param_count(GateKind kind) {
    return kind == GateKind::fsim ? 2 : 0;
}

bool QubitLayout::contains(int id) const {
    return position(id) >= 0;
}

int QubitLayout::position(int id) const {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id) {
        return -1;
    }
    return static_cast<int>(it - ids.begin());
}

QubitLayout QubitLayout::contiguous(int n) {
    QubitLayout l;
    l.ids.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        l.ids[static_cast<std::size_t>(i)] = i;
    }
    return l;
}

int Circuit::cycles() const {
    int m = 0;
    for (const auto &moment : moments) {
        if (std::any_of(moment.begin(), moment.end(), [](const GateSpec &g) { return gate_arity(g.kind) == 2; })) {
            ++m;
        }
    }
    return m;
}

std::size_t Circuit::gate_count() const {
    std::size_t total = 0;
    for (const auto &moment : moments) {
        total += moment.size();
    }
    return total;
}

Circuit parse_circuit(std::string_view text, CircuitFormat format) {
    return format == CircuitFormat::qsim_text ? parse_qsim(text) : parse_native_json(text);
}

Circuit load_circuit(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::io_error, "cannot open circuit file " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    const bool json = path.extension() == ".json";
    Circuit c = parse_circuit(ss.str(), json ? CircuitFormat::native_json : CircuitFormat::qsim_text);
    if (!json) {
        c.metadata.source = path.filename().string();
        tag_from_filename(c, path.filename().string());
    }
    return c;
}

std::string serialize_circuit(const Circuit &c) {
    nlohmann::ordered_json j;
    j["n"] = c.num_qubits();
    j["qubits"] = c.layout.ids;
    if (c.declared_cycles) {
        j["cycles"] = *c.declared_cycles;
    }
    j["metadata"] = {{"source", c.metadata.source}, {"sequence", c.metadata.sequence}, {"seed", c.metadata.seed}};
    auto gates = nlohmann::ordered_json::array();
    for (std::size_t m = 0; m < c.moments.size(); ++m) {
        for (const auto &g : c.moments[m]) {
            nlohmann::ordered_json jg;
            jg["moment"] = m;
            jg["kind"] = gate_kind_name(g.kind);
            jg["targets"] = g.targets;
            jg["params"] = g.params;
            gates.push_back(std::move(jg));
        }
    }
    j["gates"] = std::move(gates);
    return j.dump(1);
}

std::string serialize_qsim(const Circuit &c) {
    if (c.layout != QubitLayout::contiguous(c.num_qubits())) {
        throw Error(Errc::format_error, "qsim text needs qubits 0..n-1");
    }
    std::string out = std::to_string(c.num_qubits()) + "\n";
    char buf[64];
    for (std::size_t m = 0; m < c.moments.size(); ++m) {
        for (const auto &g : c.moments[m]) {
            out += std::to_string(m);
            out += ' ';
            switch (g.kind) {
                case GateKind::sqrt_x: out += "x_1_2"; break;
                case GateKind::sqrt_y: out += "y_1_2"; break;
                case GateKind::sqrt_w: out += "hz_1_2"; break;
                case GateKind::fsim: out += "fsim"; break;
                case GateKind::cz: out += "cz"; break;
            }
            for (int t : g.targets) {
                out += ' ' + std::to_string(t);
            }
            for (double p : g.params) {
                std::snprintf(buf, sizeof buf, " %.17g", p);
                out += buf;
            }
            out += '\n';
        }
    }
    return out;
}

std::string circuit_hash(const Circuit &c) {
    return to_hex(fnv1a(serialize_circuit(c)));
}

UnitaryMatrix identity_matrix(int dim) {
    UnitaryMatrix m{dim, std::vector<cplx>(static_cast<std::size_t>(dim * dim))};
    for (int i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

UnitaryMatrix matmul(const UnitaryMatrix &a, const UnitaryMatrix &b) {
    UnitaryMatrix out{a.dim, std::vector<cplx>(a.data.size())};
    for (int r = 0; r < a.dim; ++r) {
        for (int k = 0; k < a.dim; ++k) {
            const cplx x = a(r, k);
            for (int c = 0; c < a.dim; ++c) {
                out(r, c) += x * b(k, c);
            }
        }
    }
    return out;
}

UnitaryMatrix gate_matrix(const GateSpec &g) {
    const cplx i1(0, 1);
    const cplx h(0.5, 0.5);  // (1+i)/2
    const cplx hc(0.5, -0.5);
    const double r = 1.0 / std::sqrt(2.0);
    switch (g.kind) {
        case GateKind::sqrt_x:
            return {2, {h, hc, hc, h}};
        case GateKind::sqrt_y:
            return {2, {h, -h, h, h}};
        case GateKind::sqrt_w:
            // Principal root of W = (X+Y)/sqrt(2): ((1+i)/2) I + ((1-i)/2) W.
            return {2, {h, cplx(0, -r), cplx(r, 0), h}};
        case GateKind::fsim: {
            const double theta = g.params.at(0);
            const double phi = g.params.at(1);
            UnitaryMatrix m = identity_matrix(4);
            m(1, 1) = std::cos(theta);
            m(1, 2) = -i1 * std::sin(theta);
            m(2, 1) = -i1 * std::sin(theta);
            m(2, 2) = std::cos(theta);
            m(3, 3) = std::exp(-i1 * phi);
            return m;
        }
        case GateKind::cz: {
            UnitaryMatrix m = identity_matrix(4);
            m(3, 3) = -1.0;
            return m;
        }
    }
    throw Error(Errc::invalid_circuit, "unknown gate kind");
}

std::vector<Diagnostic> validate_circuit(const Circuit &c) {
    std::vector<Diagnostic> out;
    auto add = [&](DiagnosticKind k, int moment, int line, int qubit, std::string msg) {
        out.push_back(Diagnostic{k, moment, line, qubit, std::move(msg)});
    };
    {
        std::set<int> seen;
        for (int id : c.layout.ids) {
            if (!seen.insert(id).second) {
                add(DiagnosticKind::duplicate_qubit_id, -1, 0, id, "duplicate qubit id " + std::to_string(id));
            }
        }
    }
    for (std::size_t mi = 0; mi < c.moments.size(); ++mi) {
        const int m = static_cast<int>(mi);
        std::set<int> used;
        for (const auto &g : c.moments[mi]) {
            if (static_cast<int>(g.targets.size()) != gate_arity(g.kind)) {
                add(DiagnosticKind::arity_mismatch, m, g.line, -1,
                    std::string(gate_kind_name(g.kind)) + " expects " + std::to_string(gate_arity(g.kind)) +
                        " target(s), got " + std::to_string(g.targets.size()));
            }
            if (static_cast<int>(g.params.size()) != gate_param_count(g.kind)) {
                add(DiagnosticKind::param_mismatch, m, g.line, -1,
                    std::string(gate_kind_name(g.kind)) + " expects " + std::to_string(gate_param_count(g.kind)) +
                        " parameter(s)");
            }
            for (double p : g.params) {
                if (!std::isfinite(p)) {
                    add(DiagnosticKind::non_finite_param, m, g.line, -1, "non-finite parameter");
                }
            }
            std::set<int> in_gate;
            for (int q : g.targets) {
                if (!c.layout.contains(q)) {
                    add(DiagnosticKind::qubit_out_of_range, m, g.line, q, "qubit " + std::to_string(q) + " not in layout");
                }
                if (!in_gate.insert(q).second) {
                    add(DiagnosticKind::duplicate_target, m, g.line, q, "repeated target " + std::to_string(q));
                    continue;
                }
                if (!used.insert(q).second) {
                    add(DiagnosticKind::moment_collision, m, g.line, q,
                        "qubit " + std::to_string(q) + " used twice in moment " + std::to_string(m));
                }
            }
        }
    }
    if (c.declared_cycles && *c.declared_cycles != c.cycles()) {
        add(DiagnosticKind::cycle_mismatch, -1, 0, -1,
            "declared " + std::to_string(*c.declared_cycles) + " cycles, moment structure implies " +
                std::to_string(c.cycles()));
    }
    return out;
}

}  // namespace bighead
