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


#include "bighead/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "bighead/analytics.hpp"
#include "bighead/engine.hpp"
#include "bighead/errors.hpp"
#include "bighead/generators.hpp"
#include "bighead/hash.hpp"
#include "bighead/network.hpp"
#include "bighead/orderfind.hpp"
#include "bighead/plan.hpp"
#include "bighead/refsim.hpp"
#include "bighead/slicer.hpp"
#include "bighead/table.hpp"

namespace bighead {

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::io_error, "cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool to_stdout(const std::string &path) {
    return path.empty() || path == "-";
}

void write_file(const std::string &path, const std::string &data) {
    std::ofstream os(path, std::ios::binary);
    if (!os || !os.write(data.data(), static_cast<std::streamsize>(data.size()))) {
        throw Error(Errc::io_error, "cannot write " + path);
    }
}

void emit(std::ostream &out, const std::string &path, const std::string &data) {
    if (to_stdout(path)) {
        out << data;
    } else {
        write_file(path, data);
    }
}

bool ends_with(const std::string &s, const std::string &suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string dump(const nlohmann::json &j) {
    return j.dump(2) + "\n";
}

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string &text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        throw Error(Errc::range_out_of_bounds, "slice range must look like a..b");
    }
    try {
        std::size_t used = 0;
        const std::string a = text.substr(0, dots);
        const std::string b = text.substr(dots + 2);
        const std::uint64_t lo = std::stoull(a, &used);
        if (used != a.size()) throw std::invalid_argument(a);
        const std::uint64_t hi = std::stoull(b, &used);
        if (used != b.size()) throw std::invalid_argument(b);
        return {lo, hi};
    } catch (const std::logic_error &) {
        throw Error(Errc::range_out_of_bounds, "bad slice range '" + text + "'");
    }
}

AmplitudeTable load_table(const std::string &path) {
    std::istringstream in(read_file(path));
    return read_table_tsv(in);
}

struct Loaded {
    Circuit circuit;
    std::string order_text;
    ContractionPlan plan;
};

Loaded load_plan(const std::string &circuit_path, const std::string &order_path) {
    Loaded l;
    l.circuit = load_circuit(circuit_path);
    l.order_text = read_file(order_path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(l.order_text);
    } catch (const nlohmann::json::exception &e) {
        throw Error(Errc::format_error, order_path + ": " + e.what());
    }
    l.plan = plan_from_json(j);
    if (l.plan.circuit_hash != circuit_hash(l.circuit)) {
        throw Error(Errc::provenance_mismatch, order_path + " was planned for a different circuit");
    }
    return l;
}

std::string zeros_s1(const Circuit &c, const std::vector<int> &open) {
    return std::string(static_cast<std::size_t>(c.num_qubits()) - open.size(), '0');
}

std::vector<int> open_from_flag(const Circuit &c, const std::string &flag) {
    if (flag == "all") {
        return c.layout.ids;
    }
    if (flag == "none" || flag.empty()) {
        return {};
    }
    std::vector<int> ids = parse_id_list(flag);
    for (int q : ids) {
        if (!c.layout.contains(q)) {
            throw Error(Errc::qubit_out_of_range, "open qubit " + std::to_string(q) + " is not in the circuit");
        }
    }
    return ids;
}

// ------------------------------------------------------------------ commands

struct InfoArgs {
    std::string circuit;
    bool json = false;
};

int cmd_info(const InfoArgs &a, std::ostream &out, std::ostream &err) {
    const Circuit c = load_circuit(a.circuit);
    const auto diags = validate_circuit(c);
    for (const auto &d : diags) {
        err << a.circuit << ":" << d.line << ": " << d.message << "\n";
    }
    if (!diags.empty()) {
        return 2;
    }
    std::map<std::string, std::size_t> by_kind;
    std::size_t one = 0, two = 0;
    for (const auto &m : c.moments) {
        for (const auto &g : m) {
            ++by_kind[std::string(gate_kind_name(g.kind))];
            (gate_arity(g.kind) == 1 ? one : two) += 1;
        }
    }
    const std::set<int> all(c.layout.ids.begin(), c.layout.ids.end());
    const TensorNetwork fused = build_network(c, all, {});
    const TensorNetwork unfused = build_network(c, all, {}, BuildOptions{false});
    nlohmann::json j;
    j["n"] = c.num_qubits();
    j["cycles"] = c.cycles();
    j["declared_cycles"] = c.declared_cycles ? nlohmann::json(*c.declared_cycles) : nlohmann::json(nullptr);
    j["moments"] = c.moments.size();
    j["gates"] = {{"total", c.gate_count()}, {"one_qubit", one}, {"two_qubit", two}, {"by_kind", by_kind}};
    j["fused_tensors"] = fused.node_count();
    j["fused_indices"] = fused.index_endpoints.size();
    j["unfused_tensors"] = unfused.node_count();
    j["circuit_hash"] = circuit_hash(c);
    j["sequence"] = c.metadata.sequence;
    if (a.json) {
        out << dump(j);
        return 0;
    }
    out << "circuit          " << a.circuit << "\n"
        << "qubits           " << c.num_qubits() << "\n"
        << "cycles           " << c.cycles();
    if (c.declared_cycles) out << " (declared " << *c.declared_cycles << ")";
    out << "\n"
        << "moments          " << c.moments.size() << "\n"
        << "gates            " << c.gate_count() << " (" << one << " one-qubit, " << two << " two-qubit)\n";
    for (const auto &[k, v] : by_kind) {
        out << "  " << std::left << std::setw(15) << k << v << "\n";
    }
    out << "fused tensors    " << fused.node_count() << " (" << fused.index_endpoints.size() << " indices)\n"
        << "unfused tensors  " << unfused.node_count() << "\n"
        << "hash             " << circuit_hash(c) << "\n";
    return 0;
}

struct OrderArgs {
    std::string circuit;
    std::string open = "auto";
    int n_open = -1;
    PartitionConstraints cons;
    std::optional<int> max_cut;
    int target_space = 30;
    bool reconfigure = false;
    int reconfigure_leaves = 6;
    std::string scope = "head";
    int tail_space = 26;
    double branch_merge = 0.0;
    std::string output;
};

void print_plan_summary(std::ostream &os, const TensorNetwork &tn, const ContractionPlan &plan) {
    const Complexity full = complexity_of(tn, plan.tree);
    os << "tensors " << tn.node_count() << ", open " << plan.open_qubits.size() << ", n_c "
       << cut_size(tn, plan.tree) << "\n";
    if (plan.tree.head_root) {
        const Complexity h = complexity_of(tn, plan.tree, {}, plan.tree.head_root);
        os << "head   " << plan.tree.leaves_under(*plan.tree.head_root).size() << " tensors, log2 tc "
           << std::fixed << std::setprecision(2) << h.log2_tc() << ", sc 2^" << h.sc << "\n";
    }
    if (plan.tree.tail_root) {
        const Complexity t = complexity_of(tn, plan.tree, {}, plan.tree.tail_root);
        os << "tail   " << plan.tree.leaves_under(*plan.tree.tail_root).size() << " tensors, log2 tc "
           << std::fixed << std::setprecision(2) << t.log2_tc() << ", sc 2^" << t.sc << "\n";
    }
    os << "total  log2 tc " << std::fixed << std::setprecision(2) << full.log2_tc() << ", sc 2^" << full.sc << "\n";
    os << "slices " << plan.slices.n_e() << " (subtask log2 tc " << plan.slices.per_subtask.log2_tc() << ", sc 2^"
       << plan.slices.per_subtask.sc << ", overhead " << std::setprecision(3) << plan.slices.overhead << ")\n";
    os.unsetf(std::ios::floatfield);
}

SliceScope scope_from(const std::string &s) {
    return s == "head" ? SliceScope::head : SliceScope::whole_tree;
}

int cmd_order(const OrderArgs &a, std::ostream &out, std::ostream &err) {
    const Circuit c = load_circuit(a.circuit);
    PartitionConstraints cons = a.cons;
    cons.max_cut = a.max_cut;
    std::vector<int> open;
    std::string mode = a.open;
    if (a.open == "auto") {
        const int n_open = a.n_open >= 0 ? a.n_open : std::min(c.num_qubits(), 21);
        open = choose_open_qubits(c, n_open, cons).open;
    } else {
        open = open_from_flag(c, a.open);
        mode = "user";
    }
    const TensorNetwork tn = build_network(c, open, zeros_s1(c, open));
    PlanOptions po;
    po.constraints = cons;
    po.slicing = SliceOptions{a.target_space, a.reconfigure, scope_from(a.scope), a.reconfigure_leaves};
    po.tail_space = a.tail_space;
    po.branch_merge = a.branch_merge;
    ContractionPlan plan = plan_skeleton(c, tn, po);
    const std::string partial_path = (to_stdout(a.output) ? std::string("order.json") : a.output) + ".partial";
    auto fail = [&](const Error &e, const std::optional<ContractionTree> &best) {
        err << "error: " << e.what() << "\n";
        nlohmann::json j;
        if (best) {
            plan.tree = *best;
            plan.slices = SlicePlan{};
            j = plan_to_json(plan, tn);
        }
        j["error"] = e.what();
        j["error_code"] = errc_name(e.code());
        write_file(partial_path, dump(j));
        err << "best-so-far written to " << partial_path << "\n";
        return exit_code_for(e.code());
    };
    ContractionTree tree;
    try {
        tree = hierarchical_partition(tn, plan.constraints);
    } catch (const BudgetExhausted &e) {
        return fail(e, e.best());
    } catch (const Error &e) {
        if (e.code() != Errc::infeasible_cut) throw;
        return fail(e, std::nullopt);
    }
    if (a.branch_merge > 0) {
        tree = branch_merge(tn, tree, a.branch_merge);
    }
    try {
        SliceResult sr = select_slices(tn, tree, po.slicing);
        plan.tree = std::move(sr.tree);
        plan.slices = std::move(sr.plan);
    } catch (const Error &e) {
        if (e.code() != Errc::cannot_reach_cap) throw;
        return fail(e, tree);
    }
    nlohmann::json j = plan_to_json(plan, tn);
    j["open_selection"] = mode;
    emit(out, a.output, dump(j));
    print_plan_summary(to_stdout(a.output) ? err : out, tn, plan);
    return 0;
}

struct SliceArgs {
    std::string circuit;
    std::string order;
    int target_space = 30;
    bool reconfigure = false;
    int reconfigure_leaves = 6;
    std::string scope = "head";
    std::string output;
};

int cmd_slice(const SliceArgs &a, std::ostream &out, std::ostream &err) {
    Loaded l = load_plan(a.circuit, a.order);
    const TensorNetwork tn = build_network(l.circuit, l.plan.open_qubits, zeros_s1(l.circuit, l.plan.open_qubits));
    l.plan.slices = SlicePlan{};
    check_plan(tn, l.plan);
    const SliceOptions so{a.target_space, a.reconfigure, scope_from(a.scope), a.reconfigure_leaves};
    SliceResult sr = select_slices(tn, l.plan.tree, so);
    l.plan.tree = std::move(sr.tree);
    l.plan.slices = std::move(sr.plan);
    l.plan.scope = so.scope;
    emit(out, a.output, dump(plan_to_json(l.plan, tn)));
    print_plan_summary(to_stdout(a.output) ? err : out, tn, l.plan);
    return 0;
}

struct RunArgs {
    std::string circuit;
    std::string order;
    std::optional<std::string> s1;
    std::string slices;
    std::string precision = "double";
    std::string reduction = "fixed";
    int threads = 1;
    std::string output;
};

int cmd_run(const RunArgs &a, std::ostream &out, std::ostream &err) {
    RunManifest m;
    m.started = utc_now();
    const Loaded l = load_plan(a.circuit, a.order);
    const std::string s1 = a.s1 ? *a.s1 : zeros_s1(l.circuit, l.plan.open_qubits);
    const TensorNetwork tn = build_network(l.circuit, l.plan.open_qubits, s1);
    check_plan(tn, l.plan);
    RunOptions ro;
    ro.precision = a.precision == "single" ? Precision::single : Precision::dbl;
    ro.reduction = a.reduction == "free" ? Reduction::free : Reduction::fixed;
    ro.threads = a.threads;
    const std::uint64_t total = l.plan.slices.subtask_count();
    std::pair<std::uint64_t, std::uint64_t> range{0, total};
    if (!a.slices.empty()) {
        range = parse_range(a.slices);
    }
    const bool ranged = range.first != 0 || range.second != total;
    const bool binary = ends_with(a.output, ".bin");
    if (ranged && !binary) {
        throw Error(Errc::range_out_of_bounds, "a partial slice range needs a .bin output for reduce");
    }
    EngineStats stats;
    const HeadVector head = compute_head_vector(tn, l.plan, ro, range, &stats);
    if (binary) {
        std::ofstream os(a.output, std::ios::binary);
        if (!os) throw Error(Errc::io_error, "cannot write " + a.output);
        write_partial(os, head);
    } else {
        const AmplitudeTable table = compute_tail_amplitudes(tn, l.plan, head, ro, &stats);
        std::ostringstream os;
        write_table_tsv(os, table);
        emit(out, a.output, os.str());
    }
    m.circuit_hash = l.plan.circuit_hash;
    m.order_hash = to_hex(fnv1a(l.order_text));
    m.plan_hash = to_hex(l.plan.hash());
    m.s1 = s1;
    m.open_qubits = l.plan.open_qubits;
    m.slice_begin = range.first;
    m.slice_end = range.second;
    m.slice_total = total;
    m.precision = precision_name(ro.precision);
    m.reduction = reduction_name(ro.reduction);
    m.threads = ro.threads;
    m.finished = utc_now();
    if (!to_stdout(a.output)) {
        write_file(a.output + ".manifest.json", dump(manifest_to_json(m)));
    }
    (to_stdout(a.output) ? err : out) << "slices " << range.first << ".." << range.second << " of " << total
                                      << ", head contractions " << stats.head_contractions.load()
                                      << ", tail contractions " << stats.tail_contractions.load() << "\n";
    return 0;
}

struct ReduceArgs {
    std::vector<std::string> partials;
    std::string order;
    std::string circuit;
    int threads = 1;
    std::string output;
};

int cmd_reduce(const ReduceArgs &a, std::ostream &out, std::ostream &err) {
    const Loaded l = load_plan(a.circuit, a.order);
    std::vector<HeadVector> parts;
    for (const auto &p : a.partials) {
        const std::string manifest = p + ".manifest.json";
        if (fs::exists(manifest)) {
            check_manifest(manifest_from_json(nlohmann::json::parse(read_file(manifest))), l.circuit, l.order_text);
        }
        std::ifstream in(p, std::ios::binary);
        if (!in) throw Error(Errc::io_error, "cannot read " + p);
        parts.push_back(read_partial(in));
    }
    if (parts.empty()) {
        throw Error(Errc::range_gap, "no partials given");
    }
    HeadVector head = reduce_partials(std::move(parts));
    if (head.provenance != head_provenance(l.plan, head.s1)) {
        throw Error(Errc::provenance_mismatch, "partials were computed from a different plan");
    }
    if (ends_with(a.output, ".bin")) {
        std::ofstream os(a.output, std::ios::binary);
        if (!os) throw Error(Errc::io_error, "cannot write " + a.output);
        write_partial(os, head);
        return 0;
    }
    const TensorNetwork tn = build_network(l.circuit, l.plan.open_qubits, head.s1);
    check_plan(tn, l.plan);
    RunOptions ro;
    ro.precision = head.precision;
    ro.reduction = head.mode;
    ro.threads = a.threads;
    const AmplitudeTable table = compute_tail_amplitudes(tn, l.plan, head, ro);
    std::ostringstream os;
    write_table_tsv(os, table);
    emit(out, a.output, os.str());
    (void)err;
    return 0;
}

struct OracleArgs {
    std::string circuit;
    std::optional<std::string> s1;
    std::string open = "all";
    int max_qubits = 26;
    std::string output;
};

int cmd_oracle(const OracleArgs &a, std::ostream &out, std::ostream &) {
    const Circuit c = load_circuit(a.circuit);
    const std::vector<int> open = open_from_flag(c, a.open);
    const std::string s1 = a.s1 ? *a.s1 : zeros_s1(c, open);
    if (s1.size() + open.size() != static_cast<std::size_t>(c.num_qubits())) {
        throw Error(Errc::length_mismatch, "s1 has " + std::to_string(s1.size()) + " bits but " +
                                               std::to_string(c.num_qubits() - static_cast<int>(open.size())) +
                                               " qubits are closed");
    }
    SimOptions so;
    so.max_qubits = a.max_qubits;
    const StateVector sv = simulate(c, so);
    std::ostringstream os;
    write_table_tsv(os, oracle_table(c, sv, open, s1));
    emit(out, a.output, os.str());
    return 0;
}

struct TableArgs {
    std::string table;
    std::optional<int> n;
    int bins = 50;
    std::string scale = "log";
    int points = 100;
    std::string output;
};

int table_n(const TableArgs &a, const AmplitudeTable &t) {
    return a.n ? *a.n : t.n;
}

int cmd_xeb(const TableArgs &a, std::ostream &out, std::ostream &) {
    const AmplitudeTable t = load_table(a.table);
    emit(out, a.output, dump(xeb_to_json(xeb(probabilities(t), table_n(a, t)))));
    return 0;
}

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

int cmd_hist(const TableArgs &a, std::ostream &out, std::ostream &) {
    const AmplitudeTable t = load_table(a.table);
    const auto probs = probabilities(t);
    const int n = table_n(a, t);
    const auto bins = histogram(probs, n, a.bins, a.scale == "linear" ? HistScale::linear_Np : HistScale::log);
    const double ks = ks_distance_porter_thomas(probs, n);
    std::string csv = "bin_lo,bin_hi,count,density,pt_density,ks_distance\n";
    for (const auto &b : bins) {
        csv += csv_num(b.lo) + "," + csv_num(b.hi) + "," + std::to_string(b.count) + "," + csv_num(b.density) + "," +
               csv_num(b.pt_density) + "," + csv_num(ks) + "\n";
    }
    emit(out, a.output, csv);
    return 0;
}

int cmd_curve(const TableArgs &a, std::ostream &out, std::ostream &) {
    const AmplitudeTable t = load_table(a.table);
    auto probs = probabilities(t);
    std::sort(probs.begin(), probs.end(), std::greater<>());
    std::string csv = "fraction,kept,f_xeb\n";
    for (const auto &p : postselect_curve(probs, table_n(a, t), a.points)) {
        csv += csv_num(p.fraction) + "," + std::to_string(p.kept) + "," + csv_num(p.f_xeb) + "\n";
    }
    emit(out, a.output, csv);
    return 0;
}

int cmd_conditional(const TableArgs &a, std::ostream &out, std::ostream &) {
    const AmplitudeTable t = load_table(a.table);
    const ConditionalReport r = marginal_and_conditional(t);
    nlohmann::json j;
    j["s1"] = t.s1;
    j["n"] = t.n;
    j["n2"] = r.n2;
    j["marginal"] = r.marginal;
    j["conditional_xeb"] = r.conditional_xeb;
    j["conditional"] = r.conditional;
    emit(out, a.output, dump(j));
    return 0;
}

struct GenerateArgs {
    std::string kind = "random";
    int qubits = 12;
    int cycles = 8;
    std::uint64_t seed = 0;
    std::string sequence = "ABCDCDAB";
    bool hardware_angles = false;
    std::string format = "qsim";
    std::string output;
};

int cmd_generate(const GenerateArgs &a, std::ostream &out, std::ostream &) {
    Circuit c;
    if (a.kind == "sycamore") {
        c = sycamore_circuit(a.cycles, a.seed, a.sequence);
    } else {
        RandomCircuitOptions o;
        o.sequence = a.sequence;
        o.sycamore_angles = a.hardware_angles;
        c = random_circuit(a.qubits, a.cycles, a.seed, o);
    }
    emit(out, a.output, a.format == "json" ? serialize_circuit(c) + "\n" : serialize_qsim(c));
    return 0;
}

std::string version_text() {
    std::ostringstream os;
    os << "bighead " << kToolVersion << "\n"
       << "plan schema " << kPlanSchemaVersion << "\n"
       << "partial format " << kPartialFormatVersion << "\n"
       << "manifest schema " << kManifestSchemaVersion;
    return os.str();
}

}  // namespace

nlohmann::json manifest_to_json(const RunManifest &m) {
    nlohmann::json j;
    j["schema_version"] = kManifestSchemaVersion;
    j["circuit_hash"] = m.circuit_hash;
    j["order_hash"] = m.order_hash;
    j["plan_hash"] = m.plan_hash;
    j["s1"] = m.s1;
    j["open_qubits"] = m.open_qubits;
    j["slices"] = {{"begin", m.slice_begin}, {"end", m.slice_end}, {"total", m.slice_total}};
    j["precision"] = m.precision;
    j["reduction"] = m.reduction;
    j["threads"] = m.threads;
    j["started"] = m.started;
    j["finished"] = m.finished;
    return j;
}

RunManifest manifest_from_json(const nlohmann::json &j) {
    try {
        if (j.value("schema_version", 0) != kManifestSchemaVersion) {
            throw Error(Errc::format_error, "unsupported manifest schema_version");
        }
        RunManifest m;
        m.circuit_hash = j.at("circuit_hash").get<std::string>();
        m.order_hash = j.at("order_hash").get<std::string>();
        m.plan_hash = j.at("plan_hash").get<std::string>();
        m.s1 = j.at("s1").get<std::string>();
        m.open_qubits = j.at("open_qubits").get<std::vector<int>>();
        m.slice_begin = j.at("slices").at("begin").get<std::uint64_t>();
        m.slice_end = j.at("slices").at("end").get<std::uint64_t>();
        m.slice_total = j.at("slices").at("total").get<std::uint64_t>();
        m.precision = j.at("precision").get<std::string>();
        m.reduction = j.at("reduction").get<std::string>();
        m.threads = j.at("threads").get<int>();
        m.started = j.at("started").get<std::string>();
        m.finished = j.at("finished").get<std::string>();
        return m;
    } catch (const nlohmann::json::exception &e) {
        throw Error(Errc::format_error, std::string("manifest: ") + e.what());
    }
}

void check_manifest(const RunManifest &m, const Circuit &c, const std::string &order_text) {
    if (m.circuit_hash != circuit_hash(c)) {
        throw Error(Errc::provenance_mismatch, "manifest circuit hash differs from the circuit");
    }
    if (m.order_hash != to_hex(fnv1a(order_text))) {
        throw Error(Errc::provenance_mismatch, "manifest order hash differs from the order file");
    }
}

std::vector<int> parse_id_list(const std::string &text) {
    std::set<int> ids;
    std::stringstream ss(text);
    std::string item;
    auto num = [&](const std::string &s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::logic_error &) {
            used = 0;
        }
        if (used == 0 || used != s.size() || v < 0) {
            throw Error(Errc::malformed_line, "bad qubit id '" + s + "' in '" + text + "'");
        }
        return v;
    };
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto dash = item.find('-', 1);
        if (dash == std::string::npos) {
            ids.insert(num(item));
        } else {
            const int lo = num(item.substr(0, dash));
            const int hi = num(item.substr(dash + 1));
            if (hi < lo) throw Error(Errc::malformed_line, "descending range '" + item + "'");
            for (int q = lo; q <= hi; ++q) ids.insert(q);
        }
    }
    return {ids.begin(), ids.end()};
}

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Big-head tensor network simulator for random quantum circuits", "bighead"};
    app.set_version_flag("--version", version_text(), "Print tool and file format versions");
    app.set_config("--config", "", "TOML file mirroring the command-line flags");
    app.require_subcommand(1);

    const std::vector<std::string> precisions{"double", "single"};
    const std::vector<std::string> reductions{"fixed", "free"};
    const std::vector<std::string> scopes{"head", "whole"};

    InfoArgs info;
    auto *c_info = app.add_subcommand("info", "Summarize a circuit file");
    c_info->add_option("circuit", info.circuit, "Circuit file (qsim text or .json)")->required();
    c_info->add_flag("--json", info.json, "Print JSON instead of text");

    OrderArgs order;
    auto *c_order = app.add_subcommand("order", "Find a contraction order and slice it");
    c_order->add_option("circuit", order.circuit, "Circuit file")->required();
    c_order->add_option("--open", order.open, "Open qubits: auto, all, none or an id list like 0,3,5-9")
        ->capture_default_str();
    c_order->add_option("--n-open", order.n_open, "Open qubit count for --open auto (default min(n, 21))");
    c_order->add_option("--max-space", order.cons.max_space, "log2 cap on any tensor")->capture_default_str();
    c_order->add_option("--max-time", order.cons.max_time, "log2 cap on any contraction step")->capture_default_str();
    c_order->add_option("--max-cut", order.max_cut, "Cap on the first cut size");
    c_order->add_option("--seed", order.cons.rng_seed, "Search seed")->capture_default_str();
    c_order->add_option("--leaf-limit", order.cons.leaf_limit, "Tensors per greedy leaf block")->capture_default_str();
    c_order->add_option("--trials", order.cons.trials, "Independent partition attempts")->capture_default_str();
    c_order->add_option("--restarts", order.cons.max_restarts, "Bipartition restarts before giving up")
        ->capture_default_str();
    c_order->add_option("--target-space", order.target_space, "log2 cap per slice subtask")->capture_default_str();
    c_order->add_flag("--reconfigure", order.reconfigure, "Refine the tree after each slice");
    c_order->add_option("--reconfigure-leaves", order.reconfigure_leaves, "Frontier size for --reconfigure")
        ->capture_default_str();
    c_order->add_option("--scope", order.scope, "Slice the head subtree or the whole tree")
        ->check(CLI::IsMember(scopes))
        ->capture_default_str();
    c_order->add_option("--tail-space", order.tail_space, "log2 cap on the tail object per chunk")
        ->capture_default_str();
    c_order->add_option("--branch-merge", order.branch_merge, "Branch-merge threshold (0 disables)")
        ->capture_default_str();
    c_order->add_option("-o,--output", order.output, "Order file to write")->required();

    SliceArgs slice;
    auto *c_slice = app.add_subcommand("slice", "Recompute the slices of an order file");
    c_slice->add_option("circuit", slice.circuit, "Circuit file")->required();
    c_slice->add_option("--order", slice.order, "Order file")->required();
    c_slice->add_option("--target-space", slice.target_space, "log2 cap per slice subtask")->capture_default_str();
    c_slice->add_flag("--reconfigure", slice.reconfigure, "Refine the tree after each slice");
    c_slice->add_option("--reconfigure-leaves", slice.reconfigure_leaves, "Frontier size for --reconfigure")
        ->capture_default_str();
    c_slice->add_option("--scope", slice.scope, "Slice the head subtree or the whole tree")
        ->check(CLI::IsMember(scopes))
        ->capture_default_str();
    c_slice->add_option("-o,--output", slice.output, "Order file to write (default stdout)");

    RunArgs run;
    auto *c_run = app.add_subcommand("run", "Contract a planned circuit");
    c_run->add_option("circuit", run.circuit, "Circuit file")->required();
    c_run->add_option("--order", run.order, "Order file")->required();
    c_run->add_option("--s1", run.s1, "Bits of the closed qubits in layout order (default all 0)");
    c_run->add_option("--slices", run.slices, "Slice assignments a..b to sum (writes a .bin partial)");
    c_run->add_option("--precision", run.precision, "Tensor precision")
        ->check(CLI::IsMember(precisions))
        ->capture_default_str();
    c_run->add_option("--reduction", run.reduction, "Slice summation order")
        ->check(CLI::IsMember(reductions))
        ->capture_default_str();
    c_run->add_option("--threads", run.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    c_run->add_option("-o,--output", run.output, "Amplitude table (.tsv) or partial head vector (.bin)");

    ReduceArgs reduce;
    auto *c_reduce = app.add_subcommand("reduce", "Sum partial head vectors and finish the amplitudes");
    c_reduce->add_option("partials", reduce.partials, "Partial .bin files")->required();
    c_reduce->add_option("--order", reduce.order, "Order file")->required();
    c_reduce->add_option("--circuit", reduce.circuit, "Circuit file")->required();
    c_reduce->add_option("--threads", reduce.threads, "Worker threads")->check(CLI::PositiveNumber);
    c_reduce->add_option("-o,--output", reduce.output, "Amplitude table (.tsv) or reduced partial (.bin)");

    OracleArgs oracle;
    auto *c_oracle = app.add_subcommand("oracle", "Amplitudes from the state-vector simulator");
    c_oracle->add_option("circuit", oracle.circuit, "Circuit file")->required();
    c_oracle->add_option("--s1", oracle.s1, "Bits of the closed qubits in layout order (default all 0)");
    c_oracle->add_option("--open", oracle.open, "Open qubits: all, none or an id list")->capture_default_str();
    c_oracle->add_option("--max-qubits", oracle.max_qubits, "Refuse larger circuits")->capture_default_str();
    c_oracle->add_option("-o,--output", oracle.output, "Amplitude table (default stdout)");

    TableArgs xeb_a, hist_a, curve_a, cond_a;
    auto *c_xeb = app.add_subcommand("xeb", "Linear cross-entropy fidelity of a table's probabilities");
    c_xeb->add_option("table", xeb_a.table, "Amplitude table")->required();
    c_xeb->add_option("-n", xeb_a.n, "Qubit count (default from the table)");
    c_xeb->add_option("-o,--output", xeb_a.output, "JSON output (default stdout)");

    auto *c_hist = app.add_subcommand("hist", "Histogram of N*p against the exponential density");
    c_hist->add_option("table", hist_a.table, "Amplitude table")->required();
    c_hist->add_option("-n", hist_a.n, "Qubit count (default from the table)");
    c_hist->add_option("--bins", hist_a.bins, "Bin count")->check(CLI::PositiveNumber)->capture_default_str();
    c_hist->add_option("--scale", hist_a.scale, "Bin spacing")
        ->check(CLI::IsMember({"linear", "log"}))
        ->capture_default_str();
    c_hist->add_option("-o,--output", hist_a.output, "CSV output (default stdout)");

    auto *c_curve = app.add_subcommand("curve", "XEB of the most likely fraction of bitstrings");
    c_curve->add_option("table", curve_a.table, "Amplitude table")->required();
    c_curve->add_option("-n", curve_a.n, "Qubit count (default from the table)");
    c_curve->add_option("--points", curve_a.points, "Curve points")->check(CLI::PositiveNumber)->capture_default_str();
    c_curve->add_option("-o,--output", curve_a.output, "CSV output (default stdout)");

    auto *c_cond = app.add_subcommand("conditional", "Marginal of s1 and the conditional XEB over s2");
    c_cond->add_option("table", cond_a.table, "Fully enumerated amplitude table")->required();
    c_cond->add_option("-o,--output", cond_a.output, "JSON output (default stdout)");

    GenerateArgs gen;
    auto *c_gen = app.add_subcommand("generate", "Write a random circuit");
    c_gen->add_option("kind", gen.kind, "random or sycamore")
        ->check(CLI::IsMember({"random", "sycamore"}))
        ->capture_default_str();
    c_gen->add_option("--qubits", gen.qubits, "Qubit count (random only)")->capture_default_str();
    c_gen->add_option("--cycles", gen.cycles, "Cycle count")->capture_default_str();
    c_gen->add_option("--seed", gen.seed, "Seed")->capture_default_str();
    c_gen->add_option("--sequence", gen.sequence, "Two-qubit layer pattern")->capture_default_str();
    c_gen->add_flag("--hardware-angles", gen.hardware_angles, "FSIM angles near (pi/2, pi/6)");
    c_gen->add_option("--format", gen.format, "Output format")
        ->check(CLI::IsMember({"qsim", "json"}))
        ->capture_default_str();
    c_gen->add_option("-o,--output", gen.output, "Circuit file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_info->parsed()) return cmd_info(info, out, err);
        if (c_order->parsed()) return cmd_order(order, out, err);
        if (c_slice->parsed()) return cmd_slice(slice, out, err);
        if (c_run->parsed()) return cmd_run(run, out, err);
        if (c_reduce->parsed()) return cmd_reduce(reduce, out, err);
        if (c_oracle->parsed()) return cmd_oracle(oracle, out, err);
        if (c_xeb->parsed()) return cmd_xeb(xeb_a, out, err);
        if (c_hist->parsed()) return cmd_hist(hist_a, out, err);
        if (c_curve->parsed()) return cmd_curve(curve_a, out, err);
        if (c_cond->parsed()) return cmd_conditional(cond_a, out, err);
        if (c_gen->parsed()) return cmd_generate(gen, out, err);
    } catch (const Error &e) {
        err << "error: " << e.what() << " [" << errc_name(e.code()) << "]\n";
        return exit_code_for(e.code());
    } catch (const nlohmann::json::exception &e) {
        err << "error: malformed JSON: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 4;
}

}  // namespace bighead
