// mccsp: command-line front end. Exit codes: 0 solved, 2 unsatisfiable,
// 3 input error, 4 enumeration budget exceeded, 1 internal failure.

#include "mccsp/mccsp.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <thread>

using namespace mccsp;

namespace {

enum Exit { kSolved = 0, kFailure = 1, kUnsat = 2, kInputError = 3, kBudget = 4 };

std::uint64_t budget_from_env() {
    const char* env = std::getenv("MCCSP_BUDGET");
    if (!env) return kDefaultBudget;
    std::string s(env);
    try {
        std::size_t used = 0;
        unsigned long long v = std::stoull(s, &used);
        if (used == s.size() && s.find('-') == std::string::npos) return v;
    } catch (const std::logic_error&) {
    }
    throw InputError("MCCSP_BUDGET must be a non-negative integer, got '" + s + "'");
}

class Stopwatch {
public:
    double lap_ms() {
        auto now = std::chrono::steady_clock::now();
        double ms = std::chrono::duration<double, std::milli>(now - last_).count();
        last_ = now;
        return ms;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

Instance load_instance(const std::string& path) {
    Json j = parse_json(read_file(path), path);
    try {
        return instance_from_json(j);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

ConstraintLanguage load_language(const std::string& path) {
    Json j = parse_json(read_file(path), path);
    try {
        return language_from_json(j);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

template <typename T, typename Parse>
T load_text(const std::string& path, Parse parse) {
    std::istringstream in(read_file(path));
    return parse(in, path);
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) std::cout << text;
    else write_file(out_path, text);
}

Json instance_size(const Instance& inst) {
    std::size_t tuples = 0;
    for (const auto& c : inst.constraints()) tuples += inst.relation(c.relation).size();
    return Json{{"variables", inst.num_vars()}, {"constraints", inst.constraints().size()}, {"tuples", tuples}};
}

Json binary_size(const BinaryInstance& bi) {
    std::size_t unary = 0, pairs = 0, pair_tuples = 0;
    for (VarId u = 0; u < bi.num_vars(); ++u) {
        unary += label_count(bi.unary(u));
        for (VarId v = u + 1; v < bi.num_vars(); ++v) {
            if (!bi.is_materialized(u, v)) continue;
            ++pairs;
            pair_tuples += bi.pair_relation(u, v).size();
        }
    }
    return Json{{"variables", bi.num_vars()}, {"unary_labels", unary}, {"pairs", pairs}, {"pair_tuples", pair_tuples}};
}

/// Ratio of solver cost to optimum; 1 when both are zero.
Rational cost_ratio(const Rational& cost, const Rational& opt) {
    if (opt == 0) return cost == 0 ? Rational(1) : Rational(-1);
    return cost / opt;
}

std::string decimal(const Rational& r) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << r.get_d();
    return os.str();
}

// ---------------------------------------------------------------------------
// solve

struct SolveOptions {
    std::string path;
    std::string algo = "greedy";
    std::string trace_path;
    std::string lp_path;
    bool oracle = false;
};

int cmd_solve(const SolveOptions& opt) {
    const std::uint64_t budget = budget_from_env();
    Stopwatch clock;
    Json timings = Json::object();
    Instance inst = load_instance(opt.path);
    timings["parse_ms"] = clock.lap_ms();
    Json report{{"algorithm", opt.algo}, {"domain_size", inst.domain().size()}, {"size_before", instance_size(inst)}};
    const int dsize = inst.domain().size();

    auto unsat = [&] {
        report["timings"] = timings;
        std::cout << Json{{"status", "unsat"}, {"report", report}}.dump(2) << '\n';
        return kUnsat;
    };

    Assignment assignment;
    Json out{{"status", "solved"}};
    std::optional<Rational> lp_value;
    if (opt.algo == "exact") {
        auto sol = solve_exact(inst, budget);
        timings["solve_ms"] = clock.lap_ms();
        if (!sol) return unsat();
        assignment = sol->witness;
    } else {
        BinaryInstance bi = binarize(inst, true);
        timings["binarize_ms"] = clock.lap_ms();
        bi = make_23_minimal(std::move(bi));
        timings["minimalize_ms"] = clock.lap_ms();
        report["size_after"] = binary_size(bi);
        if (is_trivial(bi)) return unsat();
        if (opt.algo == "greedy") {
            GreedyResult res = solve_greedy(bi, !opt.trace_path.empty());
            timings["solve_ms"] = clock.lap_ms();
            assignment = res.assignment;
            out["iterations"] = res.iterations;
            if (!opt.trace_path.empty()) {
                TraceReport audit = check_trace(bi, res);
                Json trace = to_json(res, bi);
                trace["audit"] = Json{{"ok", audit.ok()}, {"violations", audit.violations}};
                write_file(opt.trace_path, trace.dump(2) + "\n");
                report["trace_ok"] = audit.ok();
            }
        } else if (opt.algo == "lp") {
            if (!opt.lp_path.empty()) {
                std::ostringstream os;
                build_blp(bi).lp.write(os);
                write_file(opt.lp_path, os.str());
            }
            LpRoundingResult res = solve_lp_rounding(bi);
            timings["solve_ms"] = clock.lap_ms();
            assignment = res.assignment;
            lp_value = res.lp_value;
            report["lp_pivots"] = res.pivots;
            report["size_rounded"] = binary_size(res.rounded);
        } else {
            throw InputError("unknown algorithm '" + opt.algo + "'");
        }
    }

    Evaluation ev = evaluate(inst, assignment);
    if (!ev.satisfying || ev.cost.is_infinite())
        throw InvariantViolation("solver returned an assignment that is not a finite-cost solution");
    out["assignment"] = assignment_json(inst.variables(), assignment);
    out["cost"] = ev.cost.to_string();
    report["cost"] = ev.cost.to_string();
    if (lp_value) {
        out["lp_value"] = to_string(*lp_value);
        report["lp_value"] = to_string(*lp_value);
        if (ev.cost.value() > dsize * *lp_value) throw InvariantViolation("rounded cost exceeds |D| times LP(I)");
    }
    if (opt.oracle) {
        auto exact = solve_exact(inst, budget);
        timings["oracle_ms"] = clock.lap_ms();
        if (!exact) throw InvariantViolation("exact search found no solution but the solver did");
        Rational ratio = cost_ratio(ev.cost.value(), exact->optimum.value());
        report["oracle_cost"] = exact->optimum.to_string();
        report["ratio"] = ratio < 0 ? "inf" : to_string(ratio);
        if (opt.algo != "exact" && (ratio < 0 || ratio > dsize))
            throw InvariantViolation("cost exceeds |D| times the optimum");
    }
    report["timings"] = timings;
    out["report"] = report;
    std::cout << out.dump(2) << '\n';
    return kSolved;
}

// ---------------------------------------------------------------------------
// minimalize, binarize

int cmd_binarize(const std::string& path, const std::string& out_path) {
    emit(to_json(to_instance(binarize(load_instance(path), true))).dump(2) + "\n", out_path);
    return kSolved;
}

int cmd_minimalize(const std::string& path, const std::string& out_path) {
    BinaryInstance bi = make_23_minimal(binarize(load_instance(path), true));
    emit(to_json(to_instance(bi)).dump(2) + "\n", out_path);
    return is_trivial(bi) ? kUnsat : kSolved;
}

// ---------------------------------------------------------------------------
// check-poly, classify-binary, classify-language

int cmd_check_poly(const std::string& path, const std::string& op_spec, const std::string& op_file, bool json) {
    ConstraintLanguage lang = load_language(path);
    if (op_spec.empty() == op_file.empty()) throw InputError("give exactly one of --op and --op-file");
    Operation op = op_file.empty() ? ops::by_name(op_spec, lang.domain) : [&] {
        Json j = parse_json(read_file(op_file), op_file);
        try {
            return operation_from_json(j);
        } catch (const InputError& e) {
            throw InputError(op_file + ": " + e.what());
        }
    }();
    if (!(op.domain() == lang.domain))
        throw InputError("operation domain size " + std::to_string(op.domain().size()) + " differs from language's " +
                         std::to_string(lang.domain.size()));
    auto res = preserves_language(op, lang);
    if (json) {
        Json out{{"preserved", res.preserved()}};
        if (!res.preserved()) {
            out["relation"] = res.violation->first;
            out["witness"] = to_json(res.violation->second);
        }
        std::cout << out.dump() << '\n';
    } else if (res.preserved()) {
        std::cout << "Preserved\n";
    } else {
        std::cout << "Violated: relation '" << res.violation->first << "' rows "
                  << Json(res.violation->second.rows).dump() << " map to " << Json(res.violation->second.image).dump()
                  << ", which is not a tuple of the relation\n";
    }
    return kSolved;
}

Json describe(const BinaryClass& c) {
    return std::visit(
        [](const auto& f) -> Json {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, ProductForm>)
                return Json{{"kind", "product"}, {"P", labels_of(f.p)}, {"Q", labels_of(f.q)}};
            else if constexpr (std::is_same_v<F, TwoFanForm>)
                return Json{{"kind", "two-fan"}, {"u", f.u}, {"P", labels_of(f.p)}, {"v", f.v}, {"Q", labels_of(f.q)}};
            else if constexpr (std::is_same_v<F, BijectionForm>)
                return Json{{"kind", "bijection"}, {"P", labels_of(f.p)}, {"Q", labels_of(f.q)}, {"pi", f.pi}};
            else
                return Json{{"kind", "not-preserved"}, {"witness", to_json(f.witness)}};
        },
        c);
}

int cmd_classify_binary(const std::string& path, bool json) {
    ConstraintLanguage lang = load_language(path);
    Json out = Json::object();
    for (const auto& [name, rel] : lang.relations) {
        Json entry = rel.arity() == 2 ? describe(classify_01all(rel))
                                      : Json{{"kind", "skipped"}, {"arity", rel.arity()}};
        if (!json) {
            std::cout << name << ": " << entry["kind"].get<std::string>();
            for (const auto& [k, v] : entry.items())
                if (k != "kind") std::cout << ' ' << k << '=' << v.dump();
            std::cout << '\n';
        }
        out[name] = entry;
    }
    if (json) std::cout << out.dump() << '\n';
    return kSolved;
}

int cmd_classify_language(const std::string& path) {
    ConstraintLanguage lang = load_language(path);
    PermutationVerdict v = classify_permutation_language(lang);
    Json out{{"verdict", v.verdict == Approximability::Approximable ? "Approximable" : "HardNoNU"}};
    if (v.variant) {
        out["variant"] = *v.variant;
        out["ratio"] = v.ratio;
        std::cout << "Approximable within factor " << v.ratio << " (preserved by the dual discriminator variant "
                  << "falling back to argument " << *v.variant << ")\n";
    } else {
        std::cout << "HardNoNU: no dual discriminator variant preserves the language, so it has no "
                     "near-unanimity polymorphism\n";
    }
    Json viol = Json::array();
    for (const auto& w : v.violations)
        viol.push_back(w ? Json{{"relation", w->first}, {"witness", to_json(w->second)}} : Json(nullptr));
    out["violations"] = viol;
    std::cout << out.dump() << '\n';
    return kSolved;
}

// ---------------------------------------------------------------------------
// gen, reduce

struct GenOptions {
    std::string kind;
    std::uint64_t seed = 0;
    int vertices = 5;
    double density = 0.5;
    int max_weight = 1;
    int edges = 4;
    int edge_size = 3;
    int p = 2;
    int rows = 2;
    int cols = 5;
    int domain = 3;
    int vars = 6;
    int max_cost = 10;
    bool planted = false;
    std::string out;
};

int cmd_gen(const GenOptions& o) {
    std::mt19937_64 rng(o.seed);
    if (o.kind == "random01all") {
        Instance inst = gen_random_01all({o.seed, o.domain, o.vars, o.density, o.max_cost, o.planted});
        emit(to_json(inst).dump(2) + "\n", o.out);
        return kSolved;
    }
    if (o.max_weight < 1) throw InputError("--max-weight must be at least 1");
    std::uniform_int_distribution<int> weight(1, o.max_weight);
    if (o.kind == "uncut") {
        if (o.vertices < 0) throw InputError("--vertices must be non-negative");
        std::bernoulli_distribution coin(o.density);
        WeightedGraph g{o.vertices, {}};
        for (int u = 0; u < o.vertices; ++u)
            for (int v = u + 1; v < o.vertices; ++v)
                if (coin(rng)) g.edges.push_back({u, v, weight(rng)});
        emit(format_graph(g), o.out);
    } else if (o.kind == "hvc") {
        if (o.edge_size < 2 || o.edge_size > o.vertices) throw InputError("need 2 <= --k <= --vertices");
        Hypergraph h{o.vertices, o.edge_size, {}, {}};
        for (int v = 0; v < o.vertices; ++v) h.weights.push_back(weight(rng));
        std::vector<int> all(o.vertices);
        std::iota(all.begin(), all.end(), 0);
        for (int e = 0; e < o.edges; ++e) {
            std::shuffle(all.begin(), all.end(), rng);
            std::vector<int> edge(all.begin(), all.begin() + o.edge_size);
            std::sort(edge.begin(), edge.end());
            h.edges.push_back(edge);
        }
        emit(format_hypergraph(h), o.out);
    } else if (o.kind == "ncw") {
        if (!is_prime(o.p)) throw InputError("--p must be prime");
        if (o.rows < 0 || o.cols < 0) throw InputError("--rows and --cols must be non-negative");
        std::uniform_int_distribution<int> entry(0, o.p - 1);
        LinearCode code{o.p, {}, {}};
        for (int i = 0; i < o.rows; ++i) {
            code.matrix.emplace_back();
            for (int j = 0; j < o.cols; ++j) code.matrix.back().push_back(entry(rng));
        }
        for (int j = 0; j < o.cols; ++j) code.target.push_back(entry(rng));
        emit(format_code(code), o.out);
    } else {
        throw InputError("unknown generator '" + o.kind + "'");
    }
    return kSolved;
}

int cmd_reduce(const std::string& kind, const std::string& path, const std::string& out_path) {
    Instance inst = [&] {
        if (kind == "uncut") return minuncut_to_ph(load_text<WeightedGraph>(path, parse_graph));
        if (kind == "hvc") return hvc_to_mincost(load_text<Hypergraph>(path, parse_hypergraph));
        if (kind == "ncw") return ncw_to_gamma_p(load_text<LinearCode>(path, parse_code));
        throw InputError("unknown reduction '" + kind + "'");
    }();
    emit(to_json(inst).dump(2) + "\n", out_path);
    return kSolved;
}

// ---------------------------------------------------------------------------
// bench

struct BenchOptions {
    std::uint64_t seed = 0;
    int trials = 10;
    int domain = 3;
    int vars = 6;
    double density = 0.5;
    int max_cost = 10;
    bool unplanted = false;
    int jobs = 1;
};

struct BenchRow {
    std::string line;
    bool ok = false;
    bool violation = false;
    Rational greedy_ratio, lp_ratio;
};

BenchRow bench_row(const BenchOptions& o, int id, std::uint64_t budget) {
    const std::uint64_t seed = o.seed + static_cast<std::uint64_t>(id);
    Instance inst = gen_random_01all({seed, o.domain, o.vars, o.density, o.max_cost, !o.unplanted});
    BenchRow row;
    std::ostringstream os;
    os << id << ',' << seed << ',' << inst.num_vars() << ',' << o.domain << ',' << inst.constraints().size() << ',';
    try {
        auto exact = solve_exact(inst, budget);
        BinaryInstance bi = make_23_minimal(binarize(inst));
        if (!exact || is_trivial(bi)) {
            if (exact.has_value() != !is_trivial(bi)) throw InvariantViolation("triviality disagrees with exact search");
            os << "unsat,,,,,,";
            row.line = os.str();
            return row;
        }
        const Rational opt = exact->optimum.value();
        const Rational g = assignment_cost(inst, solve_greedy(bi, false).assignment).value();
        LpRoundingResult lp = solve_lp_rounding(bi);
        const Rational l = assignment_cost(inst, lp.assignment).value();
        row.greedy_ratio = cost_ratio(g, opt);
        row.lp_ratio = cost_ratio(l, opt);
        row.violation = row.greedy_ratio < 0 || row.greedy_ratio > o.domain || row.lp_ratio < 0 ||
                        row.lp_ratio > o.domain || lp.lp_value > opt || l > o.domain * lp.lp_value;
        row.ok = !row.violation;
        os << (row.violation ? "violation" : "ok") << ',' << decimal(g) << ',' << decimal(l) << ','
           << decimal(lp.lp_value) << ',' << decimal(opt) << ',' << decimal(row.greedy_ratio) << ','
           << decimal(row.lp_ratio);
    } catch (const BudgetExceeded&) {
        os << "skipped,,,,,,";
    }
    row.line = os.str();
    return row;
}

int cmd_bench(const BenchOptions& o) {
    if (o.trials < 0 || o.jobs < 1) throw InputError("--trials must be >= 0 and --jobs >= 1");
    const std::uint64_t budget = budget_from_env();
    std::vector<BenchRow> rows(o.trials);
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (int id; (id = next++) < o.trials;) {
            try {
                rows[id] = bench_row(o, id, budget);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < std::min(o.jobs, std::max(o.trials, 1)); ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    std::cout << "id,seed,vars,domain,constraints,status,greedy_cost,lp_cost,lp_value,opt,greedy_ratio,lp_ratio\n";
    int ok = 0, violations = 0;
    Rational gmax = 0, lmax = 0, gsum = 0, lsum = 0;
    for (const auto& r : rows) {
        std::cout << r.line << '\n';
        violations += r.violation;
        if (!r.ok) continue;
        ++ok;
        gmax = std::max(gmax, r.greedy_ratio);
        lmax = std::max(lmax, r.lp_ratio);
        gsum += r.greedy_ratio;
        lsum += r.lp_ratio;
    }
    if (ok > 0)
        std::cerr << "rows " << ok << "/" << o.trials << " solved; greedy ratio max " << decimal(gmax) << " mean "
                  << decimal(gsum / ok) << "; lp ratio max " << decimal(lmax) << " mean " << decimal(lsum / ok)
                  << "; bound " << o.domain << '\n';
    if (violations) std::cerr << violations << " rows violate the |D| bound\n";
    return violations ? kFailure : kSolved;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Approximation algorithms for minimum-cost CSPs closed under the dual discriminator"};
    app.require_subcommand(1);
    int code = kSolved;

    SolveOptions solve;
    auto* s = app.add_subcommand("solve", "binarize, enforce (2,3)-minimality and solve");
    s->add_option("instance", solve.path, "instance JSON")->required();
    s->add_option("--algo", solve.algo, "greedy | lp | exact")->check(CLI::IsMember({"greedy", "lp", "exact"}));
    s->add_option("--emit-trace", solve.trace_path, "write the greedy trace and its audit as JSON");
    s->add_option("--dump-lp", solve.lp_path, "write the BLP in text form");
    s->add_flag("--oracle", solve.oracle, "compare against exact search and report the ratio");
    s->callback([&] { code = cmd_solve(solve); });

    std::string path, out_path;
    auto* mn = app.add_subcommand("minimalize", "print the (2,3)-minimal binary instance; exit 2 if trivial");
    mn->add_option("instance", path)->required();
    mn->add_option("-o,--output", out_path);
    mn->callback([&] { code = cmd_minimalize(path, out_path); });

    auto* bz = app.add_subcommand("binarize", "print the binary projection of an instance");
    bz->add_option("instance", path)->required();
    bz->add_option("-o,--output", out_path);
    bz->callback([&] { code = cmd_binarize(path, out_path); });

    std::string op_spec, op_file;
    bool json = false;
    auto* cp = app.add_subcommand("check-poly", "test whether an operation preserves every relation");
    cp->add_option("file", path, "instance or language JSON")->required();
    cp->add_option("--op", op_spec, "dd, dd:<i>, proj:<k>:<i>, const:<k>:<a>, switching, r_n, claim_f, th:<p>:<n>");
    cp->add_option("--op-file", op_file, "operation table JSON");
    cp->add_flag("--json", json);
    cp->callback([&] { code = cmd_check_poly(path, op_spec, op_file, json); });

    auto* cb = app.add_subcommand("classify-binary", "0/1/all form of each binary relation");
    cb->add_option("file", path)->required();
    cb->add_flag("--json", json);
    cb->callback([&] { code = cmd_classify_binary(path, json); });

    auto* cl = app.add_subcommand("classify-language", "verdict for a language with all permutation relations");
    cl->add_option("file", path)->required();
    cl->callback([&] { code = cmd_classify_language(path); });

    GenOptions gen;
    auto* g = app.add_subcommand("gen", "random inputs: uncut, hvc, ncw, random01all");
    g->add_option("kind", gen.kind)->required()->check(CLI::IsMember({"uncut", "hvc", "ncw", "random01all"}));
    g->add_option("--seed", gen.seed)->required();
    g->add_option("--vertices", gen.vertices);
    g->add_option("--density", gen.density, "edge or constraint probability");
    g->add_option("--max-weight", gen.max_weight, "weights are drawn from 1..max");
    g->add_option("--edges", gen.edges, "hyperedge count");
    g->add_option("--k", gen.edge_size, "hyperedge size");
    g->add_option("--p", gen.p);
    g->add_option("--rows", gen.rows);
    g->add_option("--cols", gen.cols);
    g->add_option("--domain", gen.domain);
    g->add_option("--vars", gen.vars);
    g->add_option("--max-cost", gen.max_cost);
    g->add_flag("--planted", gen.planted, "plant a satisfying assignment");
    g->add_option("-o,--output", gen.out);
    g->callback([&] { code = cmd_gen(gen); });

    std::string kind;
    auto* rd = app.add_subcommand("reduce", "translate uncut | hvc | ncw text input to an instance");
    rd->add_option("kind", kind)->required()->check(CLI::IsMember({"uncut", "hvc", "ncw"}));
    rd->add_option("input", path)->required();
    rd->add_option("-o,--output", out_path);
    rd->callback([&] { code = cmd_reduce(kind, path, out_path); });

    BenchOptions bench;
    auto* bn = app.add_subcommand("bench", "CSV of greedy and LP ratios on random 0/1/all instances");
    bn->add_option("--seed", bench.seed)->required();
    bn->add_option("--trials", bench.trials);
    bn->add_option("--domain", bench.domain);
    bn->add_option("--vars", bench.vars);
    bn->add_option("--density", bench.density);
    bn->add_option("--max-cost", bench.max_cost);
    bn->add_flag("--unplanted", bench.unplanted, "do not plant a satisfying assignment");
    bn->add_option("--jobs", bench.jobs, "worker threads");
    bn->callback([&] { code = cmd_bench(bench); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kSolved : kInputError;
    } catch (const BudgetExceeded& e) {
        std::cerr << "mccsp: budget exceeded: " << e.what() << " (raise MCCSP_BUDGET)\n";
        return kBudget;
    } catch (const InputError& e) {
        std::cerr << "mccsp: input error: " << e.what() << '\n';
        return kInputError;
    } catch (const ContractError& e) {
        std::cerr << "mccsp: unsupported input: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "mccsp: internal error: " << e.what() << '\n';
        return kFailure;
    }
    return code;
}
