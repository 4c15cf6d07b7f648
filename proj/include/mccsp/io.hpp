#ifndef MCCSP_IO_HPP
#define MCCSP_IO_HPP

// JSON and plain-text serialization. Instances, languages and operations use
// JSON (nlohmann); graphs, hypergraphs and codes use whitespace-separated text.
// Every parse error names the offending JSON field path or text line.

#include "mccsp/blp.hpp"
#include "mccsp/greedy.hpp"
#include "mccsp/reductions.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace mccsp {

using Json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void field_error(const std::string& path, const std::string& msg) {
    throw InputError(path + ": " + msg);
}

inline const Json& require(const Json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) field_error(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) field_error(path, "missing field '" + key + "'");
    return *it;
}

inline int as_int(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) field_error(path, "expected an integer");
    return j.get<int>();
}

inline std::string as_string(const Json& j, const std::string& path) {
    if (!j.is_string()) field_error(path, "expected a string");
    return j.get<std::string>();
}

inline const Json& as_array(const Json& j, const std::string& path) {
    if (!j.is_array()) field_error(path, "expected an array");
    return j;
}

/// Costs may be given as strings ("2/3", "0.25", "inf") or integers.
inline ExtendedCost as_cost(const Json& j, const std::string& path) {
    try {
        if (j.is_number_integer()) return ExtendedCost::parse(std::to_string(j.get<long long>()));
        if (j.is_string()) return ExtendedCost::parse(j.get<std::string>());
    } catch (const InputError& e) {
        field_error(path, e.what());
    }
    field_error(path, "expected a cost string");
}

inline Relation parse_relation(const Json& j, Domain d, const std::string& path) {
    const int arity = as_int(require(j, "arity", path), path + ".arity");
    const auto& tuples = as_array(require(j, "tuples", path), path + ".tuples");
    std::vector<Tuple> ts;
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        const std::string tp = path + ".tuples[" + std::to_string(i) + "]";
        const auto& t = as_array(tuples[i], tp);
        if (static_cast<int>(t.size()) != arity) field_error(tp, "tuple length differs from arity");
        Tuple tuple;
        for (std::size_t k = 0; k < t.size(); ++k) {
            int a = as_int(t[k], tp + "[" + std::to_string(k) + "]");
            if (!d.contains(a)) field_error(tp, "label " + std::to_string(a) + " outside domain");
            tuple.push_back(a);
        }
        ts.push_back(std::move(tuple));
    }
    if (arity < 1) field_error(path + ".arity", "must be positive");
    return Relation(arity, d, std::move(ts));
}

inline Domain parse_domain(const Json& j) {
    int n = as_int(require(j, "domain_size", "$"), "$.domain_size");
    if (n < 1) field_error("$.domain_size", "must be positive");
    return Domain(n);
}

}  // namespace detail

/// Parses JSON text, reporting syntax errors by line and column.
inline Json parse_json(const std::string& text, const std::string& source = "<input>") {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') line++, col = 1;
            else ++col;
        }
        throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
}

// ---------------------------------------------------------------------------
// Instances and languages

inline Instance instance_from_json(const Json& j) {
    using namespace detail;
    const Domain d = parse_domain(j);
    InstanceBuilder b(d);
    const auto& vars = as_array(require(j, "variables", "$"), "$.variables");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        std::string name = as_string(vars[i], "$.variables[" + std::to_string(i) + "]");
        if (!seen.insert(name).second) field_error("$.variables[" + std::to_string(i) + "]", "duplicate variable '" + name + "'");
        b.variable(name);
    }
    auto var_id = [&](const Json& v, const std::string& path) {
        std::string name = as_string(v, path);
        if (!seen.count(name)) field_error(path, "undeclared variable '" + name + "'");
        return b.variable(name);
    };
    if (j.contains("relations")) {
        const auto& rels = require(j, "relations", "$");
        if (!rels.is_object()) field_error("$.relations", "expected an object");
        for (const auto& [name, rel] : rels.items())
            b.relation(name, parse_relation(rel, d, "$.relations." + name));
    }
    if (j.contains("constraints")) {
        const auto& cons = as_array(j.at("constraints"), "$.constraints");
        for (std::size_t i = 0; i < cons.size(); ++i) {
            const std::string path = "$.constraints[" + std::to_string(i) + "]";
            std::string rel = as_string(require(cons[i], "rel", path), path + ".rel");
            if (!b.has_relation(rel)) field_error(path + ".rel", "unknown relation '" + rel + "'");
            const auto& scope = as_array(require(cons[i], "scope", path), path + ".scope");
            std::vector<VarId> ids;
            for (std::size_t k = 0; k < scope.size(); ++k)
                ids.push_back(var_id(scope[k], path + ".scope[" + std::to_string(k) + "]"));
            b.constrain(rel, std::move(ids));
        }
    }
    if (j.contains("costs")) {
        const auto& costs = j.at("costs");
        if (!costs.is_object()) field_error("$.costs", "expected an object");
        for (const auto& [name, row] : costs.items()) {
            const std::string path = "$.costs." + name;
            VarId v = var_id(Json(name), path);
            as_array(row, path);
            if (static_cast<int>(row.size()) != d.size()) field_error(path, "expected one cost per label");
            for (int a = 0; a < d.size(); ++a) b.cost(v, a, as_cost(row[a], path + "[" + std::to_string(a) + "]"));
        }
    }
    try {
        return b.build();
    } catch (const InputError& e) {
        field_error("$", e.what());
    }
}

inline Json to_json(const Relation& rel) {
    Json ts = Json::array();
    for (const auto& t : rel.tuples()) ts.push_back(t);
    return Json{{"arity", rel.arity()}, {"tuples", ts}};
}

/// Variables whose costs are all zero are omitted from "costs".
inline Json to_json(const Instance& inst) {
    Json rels = Json::object();
    for (const auto& [name, rel] : inst.relations()) rels[name] = to_json(rel);
    Json cons = Json::array();
    for (const auto& c : inst.constraints()) {
        Json scope = Json::array();
        for (VarId v : c.scope) scope.push_back(inst.variables()[v]);
        cons.push_back(Json{{"rel", c.relation}, {"scope", scope}});
    }
    Json costs = Json::object();
    for (VarId v = 0; v < inst.num_vars(); ++v) {
        Json row = Json::array();
        bool zero = true;
        for (Label a = 0; a < inst.domain().size(); ++a) {
            const auto& c = inst.costs().at(v, a);
            zero = zero && c == ExtendedCost(0);
            row.push_back(c.to_string());
        }
        if (!zero) costs[inst.variables()[v]] = row;
    }
    return Json{{"domain_size", inst.domain().size()},
                {"variables", inst.variables()},
                {"relations", rels},
                {"constraints", cons},
                {"costs", costs}};
}

/// A language file is an instance file; only "domain_size" and "relations"
/// are read.
inline ConstraintLanguage language_from_json(const Json& j) {
    const Domain d = detail::parse_domain(j);
    ConstraintLanguage lang(d);
    const auto& rels = detail::require(j, "relations", "$");
    if (!rels.is_object()) detail::field_error("$.relations", "expected an object");
    for (const auto& [name, rel] : rels.items()) lang.add(name, detail::parse_relation(rel, d, "$.relations." + name));
    return lang;
}

inline Json to_json(const ConstraintLanguage& lang) {
    Json rels = Json::object();
    for (const auto& [name, rel] : lang.relations) rels[name] = to_json(rel);
    return Json{{"domain_size", lang.domain.size()}, {"relations", rels}};
}

// ---------------------------------------------------------------------------
// Operations

/// Table keys are comma-separated argument tuples; every row must be present.
inline Operation operation_from_json(const Json& j) {
    using namespace detail;
    const int arity = as_int(require(j, "arity", "$"), "$.arity");
    const Domain d = parse_domain(j);
    if (arity < 1) field_error("$.arity", "must be positive");
    if (saturating_pow(d.size(), arity) > (std::uint64_t{1} << 26)) field_error("$", "operation table too large");
    const auto& table = require(j, "table", "$");
    if (!table.is_object()) field_error("$.table", "expected an object");
    const std::size_t rows = saturating_pow(d.size(), arity);
    std::vector<Label> out(rows, -1);
    const Operation shape(arity, d, std::vector<Label>(rows, 0));
    for (const auto& [key, value] : table.items()) {
        const std::string path = "$.table[\"" + key + "\"]";
        Tuple args;
        std::stringstream ss(key);
        std::string part;
        while (std::getline(ss, part, ',')) {
            try {
                std::size_t used = 0;
                int a = std::stoi(part, &used);
                if (used != part.size() || !d.contains(a)) throw std::invalid_argument("");
                args.push_back(a);
            } catch (const std::logic_error&) {
                field_error(path, "bad argument '" + part + "'");
            }
        }
        if (static_cast<int>(args.size()) != arity) field_error(path, "key has wrong number of arguments");
        int img = as_int(value, path);
        if (!d.contains(img)) field_error(path, "image outside domain");
        out[shape.index_of(args)] = img;
    }
    for (std::size_t r = 0; r < rows; ++r)
        if (out[r] < 0) {
            auto args = shape.args_of(r);
            std::string key;
            for (std::size_t i = 0; i < args.size(); ++i) key += (i ? "," : "") + std::to_string(args[i]);
            field_error("$.table", "missing row \"" + key + "\"");
        }
    return Operation(arity, d, std::move(out));
}

inline std::string tuple_key(const Tuple& t) {
    std::string key;
    for (std::size_t i = 0; i < t.size(); ++i) key += (i ? "," : "") + std::to_string(t[i]);
    return key;
}

inline Json to_json(const Operation& op) {
    Json table = Json::object();
    for (std::size_t r = 0; r < op.rows(); ++r) table[tuple_key(op.args_of(r))] = op.table()[r];
    return Json{{"arity", op.arity()}, {"domain_size", op.domain().size()}, {"table", table}};
}

inline Json to_json(const PreservationWitness& w) {
    return Json{{"rows", w.rows}, {"image", w.image}};
}

// ---------------------------------------------------------------------------
// Solver outputs

inline Json assignment_json(const std::vector<std::string>& names, const Assignment& a) {
    Json out = Json::object();
    for (std::size_t v = 0; v < a.size(); ++v) out[names[v]] = a[v];
    return out;
}

inline Json to_json(const GreedyResult& r, const BinaryInstance& bi) {
    const auto& names = bi.names();
    Json pre = Json::array();
    for (const auto& [u, a] : r.predetermined) pre.push_back(Json{{"variable", names[u]}, {"label", a}});
    Json iters = Json::array();
    for (const auto& it : r.trace) {
        Json fixed = Json::array(), charge = Json::array(), costs = Json::array();
        for (std::size_t i = 0; i < it.labels.size(); ++i) {
            Json f = Json::object(), ch = Json::object();
            for (const auto& [u, b] : it.fixed[i]) f[names[u]] = b;
            for (const auto& [u, c] : it.charge[i]) ch[names[u]] = to_string(c);
            fixed.push_back(f);
            charge.push_back(ch);
            costs.push_back(to_string(it.label_cost[i]));
        }
        Json dec = Json::array();
        for (const auto& [key, amount] : it.decrease)
            dec.push_back(Json{{"variable", names[key.first]}, {"label", key.second}, {"amount", to_string(amount)}});
        iters.push_back(Json{{"variable", names[it.chosen]},
                             {"labels", it.labels},
                             {"fixed", fixed},
                             {"label_cost", costs},
                             {"chosen_label", it.chosen_label},
                             {"charge", charge},
                             {"decrease", dec}});
    }
    Json t_end = Json::object();
    for (VarId v = 0; v < bi.num_vars(); ++v) {
        Json row = Json::array();
        for (Label a = 0; a < bi.domain().size(); ++a) row.push_back(to_string(r.t_end.at(v, a)));
        t_end[names[v]] = row;
    }
    return Json{{"predetermined", pre}, {"iterations", iters}, {"t_end", t_end}};
}

// ---------------------------------------------------------------------------
// Text formats

namespace detail {

/// Line-oriented integer/rational reader; blank lines and '#' comments skip.
class LineReader {
public:
    LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

    std::vector<std::string> next(std::size_t expected, const char* what) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            std::istringstream ss(line);
            std::vector<std::string> tokens;
            for (std::string t; ss >> t;) tokens.push_back(t);
            if (tokens.empty()) continue;
            if (expected && tokens.size() != expected)
                fail(std::string(what) + ": expected " + std::to_string(expected) + " fields, got " +
                     std::to_string(tokens.size()));
            return tokens;
        }
        ++line_no_;
        fail(std::string("unexpected end of input, expected ") + what);
    }

    int integer(const std::string& tok) {
        try {
            std::size_t used = 0;
            int v = std::stoi(tok, &used);
            if (used == tok.size()) return v;
        } catch (const std::logic_error&) {
        }
        fail("'" + tok + "' is not an integer");
    }

    Rational rational(const std::string& tok) {
        try {
            return parse_rational(tok);
        } catch (const InputError&) {
            fail("'" + tok + "' is not a number");
        }
    }

    void expect_end() {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            if (line.find_first_not_of(" \t\r") != std::string::npos) fail("unexpected trailing data");
        }
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw InputError(source_ + ":" + std::to_string(line_no_) + ": " + msg);
    }

private:
    std::istream& in_;
    std::string source_;
    int line_no_ = 0;
};

}  // namespace detail

/// Header "n m", then m lines "u v w" with 0-based vertices.
inline WeightedGraph parse_graph(std::istream& in, const std::string& source = "<graph>") {
    detail::LineReader r(in, source);
    auto head = r.next(2, "header 'n m'");
    WeightedGraph g;
    g.num_vertices = r.integer(head[0]);
    const int m = r.integer(head[1]);
    if (g.num_vertices < 0 || m < 0) r.fail("counts must be non-negative");
    for (int i = 0; i < m; ++i) {
        auto e = r.next(3, "edge 'u v w'");
        WeightedEdge edge{r.integer(e[0]), r.integer(e[1]), r.rational(e[2])};
        try {
            WeightedGraph{g.num_vertices, {edge}}.validate();
        } catch (const InputError& err) {
            r.fail(err.what());
        }
        g.edges.push_back(edge);
    }
    r.expect_end();
    return g;
}

inline std::string format_graph(const WeightedGraph& g) {
    std::ostringstream os;
    os << g.num_vertices << ' ' << g.edges.size() << '\n';
    for (const auto& e : g.edges) os << e.u << ' ' << e.v << ' ' << to_string(e.weight) << '\n';
    return os.str();
}

/// Header "n m k", a line of n vertex weights, then m lines of k vertices.
inline Hypergraph parse_hypergraph(std::istream& in, const std::string& source = "<hypergraph>") {
    detail::LineReader r(in, source);
    auto head = r.next(3, "header 'n m k'");
    Hypergraph h;
    h.num_vertices = r.integer(head[0]);
    const int m = r.integer(head[1]);
    h.edge_size = r.integer(head[2]);
    if (h.num_vertices < 0 || m < 0) r.fail("counts must be non-negative");
    if (h.edge_size < 2) r.fail("k must be at least 2");
    if (h.num_vertices > 0) {
        auto w = r.next(h.num_vertices, "vertex weights");
        for (const auto& t : w) {
            h.weights.push_back(r.rational(t));
            if (h.weights.back() < 0) r.fail("negative vertex weight");
        }
    }
    for (int i = 0; i < m; ++i) {
        auto e = r.next(h.edge_size, "hyperedge");
        std::vector<int> edge;
        for (const auto& t : e) edge.push_back(r.integer(t));
        h.edges.push_back(edge);
        try {
            h.validate();
        } catch (const InputError& err) {
            r.fail(err.what());
        }
    }
    r.expect_end();
    return h;
}

inline std::string format_hypergraph(const Hypergraph& h) {
    std::ostringstream os;
    os << h.num_vertices << ' ' << h.edges.size() << ' ' << h.edge_size << '\n';
    for (int v = 0; v < h.num_vertices; ++v) os << (v ? " " : "") << to_string(h.weight(v));
    if (h.num_vertices) os << '\n';
    for (const auto& e : h.edges) {
        for (std::size_t i = 0; i < e.size(); ++i) os << (i ? " " : "") << e[i];
        os << '\n';
    }
    return os.str();
}

/// Header "p m n", m parity-check rows of n entries, then the n-entry target.
inline LinearCode parse_code(std::istream& in, const std::string& source = "<code>") {
    detail::LineReader r(in, source);
    auto head = r.next(3, "header 'p m n'");
    LinearCode code;
    code.p = r.integer(head[0]);
    const int m = r.integer(head[1]);
    const int n = r.integer(head[2]);
    if (!is_prime(code.p)) r.fail(std::to_string(code.p) + " is not prime");
    if (m < 0 || n < 0) r.fail("counts must be non-negative");
    auto row_of = [&](const char* what) {
        std::vector<int> row;
        if (n == 0) return row;
        for (const auto& t : r.next(n, what)) row.push_back(((r.integer(t) % code.p) + code.p) % code.p);
        return row;
    };
    for (int i = 0; i < m; ++i) code.matrix.push_back(row_of("parity-check row"));
    code.target = row_of("target vector");
    r.expect_end();
    return code;
}

inline std::string format_code(const LinearCode& code) {
    std::ostringstream os;
    os << code.p << ' ' << code.matrix.size() << ' ' << code.num_columns() << '\n';
    auto line = [&](const std::vector<int>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? " " : "") << row[i];
        os << '\n';
    };
    for (const auto& row : code.matrix) line(row);
    if (code.num_columns()) line(code.target);
    return os.str();
}

}  // namespace mccsp

#endif  // MCCSP_IO_HPP
