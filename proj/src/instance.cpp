#include "rko/instance.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "rko/rng.hpp"

namespace rko {

namespace {

constexpr double kPaddingFactor = 10.0;

[[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument(msg);
}

std::string describe(const Node& n) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "(%d,%d,%d,%d,%d)", n.seam, n.direction,
                  n.tool, n.config, n.position);
    return buf;
}

}  // namespace

std::string to_string(const Node& n) { return describe(n); }

std::ostream& operator<<(std::ostream& os, const Node& n) {
    return os << describe(n);
}

Instance::Instance(int n_seams, DimSizes dims, std::vector<CostRow> rows,
                   std::vector<long long> seam_labels)
    : n_seams_(n_seams), dims_(dims), seam_labels_(std::move(seam_labels)) {
    if (n_seams_ < 1) fail("instance needs at least one seam");
    if (dims_.directions < 1 || dims_.tools < 1 || dims_.configs < 1 ||
        dims_.positions < 1)
        fail("feature cardinalities must be at least 1");
    if (seam_labels_.size() != static_cast<std::size_t>(n_seams_))
        fail("seam label list does not match the seam count");
    std::set<long long> label_set(seam_labels_.begin(), seam_labels_.end());
    if (label_set.size() != seam_labels_.size())
        fail("seam labels contain duplicates");
    if (label_set.count(0)) fail("seam label 0 is reserved for home");

    node_count_ =
        static_cast<std::uint64_t>(n_seams_ + 1) * dims_.combos();
    if (node_count_ > (1ULL << 31))
        fail("node space too large to index");

    keys_.reserve(rows.size());
    costs_.reserve(rows.size());
    std::vector<std::pair<std::uint64_t, double>> entries;
    entries.reserve(rows.size());
    for (const CostRow& row : rows) {
        if (!in_range(row.from) || !in_range(row.to))
            fail("cost row references an out-of-range node " +
                 describe(row.from) + " -> " + describe(row.to));
        if (!(row.cost > 0.0) || !std::isfinite(row.cost))
            fail("cost must be positive and finite for " +
                 describe(row.from) + " -> " + describe(row.to));
        entries.push_back(
            {node_code(row.from) * node_count_ + node_code(row.to), row.cost});
        max_cost_ = std::max(max_cost_, row.cost);
    }
    std::sort(entries.begin(), entries.end());
    for (std::size_t i = 1; i < entries.size(); ++i)
        if (entries[i].first == entries[i - 1].first)
            fail("duplicate node pair in cost rows");
    for (auto& [key, cost] : entries) {
        keys_.push_back(key);
        costs_.push_back(cost);
    }
    padding_cost_ = n_seams_ * max_cost_ * kPaddingFactor;
    if (padding_cost_ <= 0.0) padding_cost_ = 1.0;  // rowless guard
}

bool Instance::in_range(const Node& n) const {
    return n.seam >= 0 && n.seam <= n_seams_ && n.direction >= 0 &&
           n.direction < dims_.directions && n.tool >= 0 &&
           n.tool < dims_.tools && n.config >= 0 &&
           n.config < dims_.configs && n.position >= 0 &&
           n.position < dims_.positions;
}

std::uint64_t Instance::node_code(const Node& n) const {
    std::uint64_t code = n.seam;
    code = code * dims_.directions + n.direction;
    code = code * dims_.tools + n.tool;
    code = code * dims_.configs + n.config;
    code = code * dims_.positions + n.position;
    return code;
}

Node Instance::node_from_code(std::uint64_t code) const {
    Node n;
    n.position = static_cast<int>(code % dims_.positions);
    code /= dims_.positions;
    n.config = static_cast<int>(code % dims_.configs);
    code /= dims_.configs;
    n.tool = static_cast<int>(code % dims_.tools);
    code /= dims_.tools;
    n.direction = static_cast<int>(code % dims_.directions);
    code /= dims_.directions;
    n.seam = static_cast<int>(code);
    return n;
}

EdgeCost Instance::edge_cost(const Node& from, const Node& to) const {
    if (!in_range(from))
        throw std::out_of_range("node " + describe(from) +
                                " is outside the instance dimensions");
    if (!in_range(to))
        throw std::out_of_range("node " + describe(to) +
                                " is outside the instance dimensions");
    std::uint64_t key = node_code(from) * node_count_ + node_code(to);
    auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
    if (it != keys_.end() && *it == key)
        return {costs_[static_cast<std::size_t>(it - keys_.begin())], false};
    return {padding_cost_, true};
}

double Instance::cost(const Node& from, const Node& to) const {
    return edge_cost(from, to).seconds;
}

bool Instance::has_edge(const Node& from, const Node& to) const {
    return !edge_cost(from, to).padded;
}

void Instance::for_each_row(
    const std::function<void(const CostRow&)>& fn) const {
    for (std::size_t i = 0; i < keys_.size(); ++i) {
        CostRow row;
        row.from = node_from_code(keys_[i] / node_count_);
        row.to = node_from_code(keys_[i] % node_count_);
        row.cost = costs_[i];
        fn(row);
    }
}

std::vector<CostRow> Instance::rows() const {
    std::vector<CostRow> out;
    out.reserve(keys_.size());
    for_each_row([&](const CostRow& row) { out.push_back(row); });
    return out;
}

namespace {

const char* kHeaderFields[11] = {"s_from", "d_from", "t_from", "c_from",
                                 "p_from", "s_to",   "d_to",   "t_to",
                                 "c_to",   "p_to",   "cost"};

std::vector<std::string> split_fields(const std::string& line,
                                      LoadSchema::Delimiter delim) {
    std::vector<std::string> fields;
    if (delim == LoadSchema::Delimiter::Comma) {
        std::string cur;
        for (char ch : line) {
            if (ch == ',') {
                fields.push_back(cur);
                cur.clear();
            } else if (!std::isspace(static_cast<unsigned char>(ch))) {
                cur.push_back(ch);
            }
        }
        fields.push_back(cur);
    } else {
        std::istringstream ss(line);
        std::string tok;
        while (ss >> tok) fields.push_back(tok);
    }
    return fields;
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no,
                             const std::string& msg) {
    throw std::invalid_argument(path + ": line " + std::to_string(line_no) +
                                ": " + msg);
}

long long parse_int_field(const std::string& s, const std::string& path,
                          std::size_t line_no, const char* what) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        parse_fail(path, line_no, std::string("cannot parse ") + what +
                                      " from '" + s + "'");
    }
    if (pos != s.size())
        parse_fail(path, line_no, std::string("cannot parse ") + what +
                                      " from '" + s + "'");
    return v;
}

double parse_cost_field(const std::string& s, const std::string& path,
                        std::size_t line_no) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        parse_fail(path, line_no, "cannot parse cost from '" + s + "'");
    }
    if (pos != s.size())
        parse_fail(path, line_no, "cannot parse cost from '" + s + "'");
    return v;
}

struct RawRow {
    std::array<long long, 10> coord;
    double cost;
    std::size_t line_no;
};

}  // namespace

Instance load_instance(const std::string& path, const LoadSchema& schema) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);

    std::string line;
    std::size_t line_no = 0;
    std::vector<RawRow> raw;
    bool header_done = !schema.expect_header;
    LoadSchema::Delimiter delim = schema.delimiter;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t"));
        if (trimmed.empty() || trimmed[0] == '#') continue;
        if (delim == LoadSchema::Delimiter::Auto)
            delim = trimmed.find(',') != std::string::npos
                        ? LoadSchema::Delimiter::Comma
                        : LoadSchema::Delimiter::Whitespace;
        auto fields = split_fields(trimmed, delim);
        if (!header_done) {
            header_done = true;
            if (fields.size() != 11)
                parse_fail(path, line_no, "expected 11 header fields, got " +
                                              std::to_string(fields.size()));
            for (int i = 0; i < 11; ++i)
                if (fields[i] != kHeaderFields[i])
                    parse_fail(path, line_no,
                               "unexpected header field '" + fields[i] +
                                   "', wanted '" + kHeaderFields[i] + "'");
            continue;
        }
        if (fields.size() != 11)
            parse_fail(path, line_no, "expected 11 fields, got " +
                                          std::to_string(fields.size()));
        RawRow row;
        row.line_no = line_no;
        for (int i = 0; i < 10; ++i) {
            row.coord[i] =
                parse_int_field(fields[i], path, line_no, kHeaderFields[i]);
            if (row.coord[i] < 0)
                parse_fail(path, line_no,
                           std::string(kHeaderFields[i]) + " is negative");
        }
        row.cost = parse_cost_field(fields[10], path, line_no);
        if (!(row.cost > 0.0) || !std::isfinite(row.cost))
            parse_fail(path, line_no, "cost must be positive and finite");
        raw.push_back(row);
    }
    if (raw.empty()) throw std::invalid_argument(path + ": no rows");

    // Dense seam re-indexing: ascending original labels -> 1..n_seams.
    std::set<long long> labels;
    DimSizes dims{1, 1, 1, 1};
    for (const RawRow& row : raw) {
        for (int side = 0; side < 2; ++side) {
            const long long* c = row.coord.data() + 5 * side;
            if (c[0] != 0) labels.insert(c[0]);
            dims.directions = std::max<int>(dims.directions, c[1] + 1);
            dims.tools = std::max<int>(dims.tools, c[2] + 1);
            dims.configs = std::max<int>(dims.configs, c[3] + 1);
            dims.positions = std::max<int>(dims.positions, c[4] + 1);
        }
    }
    std::map<long long, int> dense;
    std::vector<long long> label_list(labels.begin(), labels.end());
    for (std::size_t i = 0; i < label_list.size(); ++i)
        dense[label_list[i]] = static_cast<int>(i) + 1;

    std::vector<CostRow> rows;
    rows.reserve(raw.size());
    std::unordered_set<std::uint64_t> seen;
    std::uint64_t combos = static_cast<std::uint64_t>(dims.combos());
    std::uint64_t node_count =
        (static_cast<std::uint64_t>(label_list.size()) + 1) * combos;
    for (const RawRow& row : raw) {
        auto to_node = [&](const long long* c) {
            Node n;
            n.seam = c[0] == 0 ? 0 : dense[c[0]];
            n.direction = static_cast<int>(c[1]);
            n.tool = static_cast<int>(c[2]);
            n.config = static_cast<int>(c[3]);
            n.position = static_cast<int>(c[4]);
            return n;
        };
        CostRow cr{to_node(row.coord.data()), to_node(row.coord.data() + 5),
                   row.cost};
        std::uint64_t code_from = cr.from.seam;
        code_from = ((code_from * dims.directions + cr.from.direction) *
                         dims.tools +
                     cr.from.tool);
        code_from = (code_from * dims.configs + cr.from.config) *
                        dims.positions +
                    cr.from.position;
        std::uint64_t code_to = cr.to.seam;
        code_to =
            ((code_to * dims.directions + cr.to.direction) * dims.tools +
             cr.to.tool);
        code_to =
            (code_to * dims.configs + cr.to.config) * dims.positions +
            cr.to.position;
        if (!seen.insert(code_from * node_count + code_to).second)
            parse_fail(path, row.line_no, "duplicate node pair");
        rows.push_back(cr);
    }

    const int n_seams = static_cast<int>(label_list.size());
    return Instance(n_seams, dims, std::move(rows), std::move(label_list));
}

std::string instance_to_text(const Instance& inst) {
    std::string out =
        "s_from,d_from,t_from,c_from,p_from,s_to,d_to,t_to,c_to,p_to,cost\n";
    char buf[256];
    inst.for_each_row([&](const CostRow& row) {
        auto label = [&](int seam) -> long long {
            return seam == 0 ? 0 : inst.seam_labels()[seam - 1];
        };
        std::snprintf(buf, sizeof(buf),
                      "%lld,%d,%d,%d,%d,%lld,%d,%d,%d,%d,%.17g\n",
                      label(row.from.seam), row.from.direction, row.from.tool,
                      row.from.config, row.from.position, label(row.to.seam),
                      row.to.direction, row.to.tool, row.to.config,
                      row.to.position, row.cost);
        out += buf;
    });
    return out;
}

void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << instance_to_text(inst);
}

Instance downsample(const Instance& inst, int keep, std::uint64_t seed) {
    if (keep < 1 || keep > inst.seam_count())
        throw std::invalid_argument(
            "downsample keep must be in [1, seam count]");

    // Partial Fisher-Yates over the dense seam indices, then sort so the
    // survivors keep their relative order.
    std::mt19937_64 rng = make_rng(seed, 0xd0u);
    std::vector<int> pool(inst.seam_count());
    for (int i = 0; i < inst.seam_count(); ++i) pool[i] = i + 1;
    for (int i = 0; i < keep; ++i) {
        std::uniform_int_distribution<int> pick(i, inst.seam_count() - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    std::vector<int> chosen(pool.begin(), pool.begin() + keep);
    std::sort(chosen.begin(), chosen.end());

    std::vector<int> remap(inst.seam_count() + 1, -1);
    remap[0] = 0;
    std::vector<long long> labels;
    for (int i = 0; i < keep; ++i) {
        remap[chosen[i]] = i + 1;
        labels.push_back(inst.seam_labels()[chosen[i] - 1]);
    }

    std::vector<CostRow> rows;
    inst.for_each_row([&](const CostRow& row) {
        if (remap[row.from.seam] < 0 || remap[row.to.seam] < 0) return;
        CostRow r = row;
        r.from.seam = remap[row.from.seam];
        r.to.seam = remap[row.to.seam];
        rows.push_back(r);
    });
    return Instance(keep, inst.dims(), std::move(rows), std::move(labels));
}

namespace {

struct Point3 {
    double x = 0, y = 0, z = 0;
};

double dist(const Point3& a, const Point3& b) {
    double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace

Instance generate_synthetic(const GeneratorParams& params) {
    if (params.n_seams < 1)
        throw std::invalid_argument("generator needs at least one seam");
    if (!(params.feasibility_rate > 0.0) || params.feasibility_rate > 1.0)
        throw std::invalid_argument("feasibility_rate must be in (0, 1]");
    if (!(params.cost_scale > 0.0))
        throw std::invalid_argument("cost_scale must be positive");
    if (params.dims.directions < 1 || params.dims.tools < 1 ||
        params.dims.configs < 1 || params.dims.positions < 1)
        throw std::invalid_argument("feature cardinalities must be >= 1");

    const int n = params.n_seams;
    const DimSizes dims = params.dims;
    const long long K = dims.combos();
    const long long node_space = 1 + static_cast<long long>(n) * K;
    if (node_space * node_space > 50'000'000LL)
        throw std::invalid_argument(
            "generator would enumerate more than 5e7 node pairs; reduce "
            "n_seams or the feature cardinalities");

    for (int attempt = 0; attempt <= params.max_retries; ++attempt) {
        std::mt19937_64 geo =
            make_rng(params.seed, 0x9e0 + static_cast<std::uint64_t>(attempt));
        std::uniform_real_distribution<double> unit(0.0, 1.0);

        // Seam geometry: two endpoints per seam; home sits at the centre.
        std::vector<Point3> endpoint_a(n + 1), endpoint_b(n + 1);
        endpoint_a[0] = endpoint_b[0] = Point3{0.5, 0.5, 0.5};
        std::vector<double> seam_length(n + 1, 0.0);
        for (int s = 1; s <= n; ++s) {
            endpoint_a[s] = {unit(geo), unit(geo), unit(geo)};
            endpoint_b[s] = {unit(geo), unit(geo), unit(geo)};
            seam_length[s] = dist(endpoint_a[s], endpoint_b[s]);
        }
        // Direction parity selects which endpoint is entered first.
        auto entry = [&](int s, int d) {
            if (s == 0) return endpoint_a[0];
            return d % 2 == 0 ? endpoint_a[s] : endpoint_b[s];
        };
        auto exit = [&](int s, int d) {
            if (s == 0) return endpoint_a[0];
            return d % 2 == 0 ? endpoint_b[s] : endpoint_a[s];
        };
        // Process-time multiplier per (tool, config, position).
        std::vector<double> mult(dims.tools * dims.configs * dims.positions);
        for (double& m : mult) m = 1.0 + 0.25 * unit(geo);
        auto process_mult = [&](const Node& node) {
            return mult[(node.tool * dims.configs + node.config) *
                            dims.positions +
                        node.position];
        };

        auto pair_cost = [&](const Node& from, const Node& to) {
            double process =
                from.seam == 0
                    ? 0.0
                    : seam_length[from.seam] * process_mult(from);
            double travel = dist(exit(from.seam, from.direction),
                                 entry(to.seam, to.direction));
            return (0.01 + process + travel) * params.cost_scale;
        };

        // Witness: random seam order and features, kept against dropout in
        // both closure modes.
        std::vector<int> witness_order(n);
        for (int i = 0; i < n; ++i) witness_order[i] = i + 1;
        std::shuffle(witness_order.begin(), witness_order.end(), geo);
        auto rand_node = [&](int s) {
            Node v;
            v.seam = s;
            v.direction =
                std::uniform_int_distribution<int>(0, dims.directions - 1)(geo);
            v.tool = std::uniform_int_distribution<int>(0, dims.tools - 1)(geo);
            v.config =
                std::uniform_int_distribution<int>(0, dims.configs - 1)(geo);
            v.position =
                std::uniform_int_distribution<int>(0, dims.positions - 1)(geo);
            return v;
        };
        std::vector<Node> witness;
        for (int s : witness_order) witness.push_back(rand_node(s));
        std::set<std::pair<std::uint64_t, std::uint64_t>> forced;
        auto code = [&](const Node& v) {
            std::uint64_t c = v.seam;
            c = (c * dims.directions + v.direction) * dims.tools + v.tool;
            c = (c * dims.configs + v.config) * dims.positions + v.position;
            return c;
        };
        Node home = home_node();
        forced.insert({code(home), code(witness.front())});
        for (int i = 1; i < n; ++i)
            forced.insert({code(witness[i - 1]), code(witness[i])});
        forced.insert({code(witness.back()), code(home)});
        forced.insert({code(witness.back()), code(witness.front())});

        std::mt19937_64 drop =
            make_rng(params.seed, 0xd80 + static_cast<std::uint64_t>(attempt));
        std::vector<CostRow> rows;
        std::vector<Node> all_nodes;
        all_nodes.push_back(home);
        for (int s = 1; s <= n; ++s)
            for (int d = 0; d < dims.directions; ++d)
                for (int t = 0; t < dims.tools; ++t)
                    for (int c = 0; c < dims.configs; ++c)
                        for (int p = 0; p < dims.positions; ++p)
                            all_nodes.push_back(Node{s, d, t, c, p});
        for (const Node& from : all_nodes)
            for (const Node& to : all_nodes) {
                if (from.seam == to.seam) continue;
                bool keep = unit(drop) < params.feasibility_rate;
                if (!keep && !forced.count({code(from), code(to)})) continue;
                rows.push_back({from, to, pair_cost(from, to)});
            }

        std::vector<long long> labels(n);
        for (int i = 0; i < n; ++i) labels[i] = i + 1;
        Instance inst(n, dims, std::move(rows), std::move(labels));

        // Certify the witness before returning. A single seam has no
        // cross-seam cyclic closure, so only the home anchoring applies.
        bool ok = inst.has_edge(home, witness.front()) &&
                  inst.has_edge(witness.back(), home) &&
                  (n < 2 || inst.has_edge(witness.back(), witness.front()));
        for (int i = 1; ok && i < n; ++i)
            ok = inst.has_edge(witness[i - 1], witness[i]);
        if (ok) return inst;
    }
    throw std::runtime_error(
        "synthetic generation failed to place a feasible witness tour");
}

}  // namespace rko
