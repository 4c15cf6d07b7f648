#ifndef MCCSP_POLYMORPHISM_HPP
#define MCCSP_POLYMORPHISM_HPP

// Finite operations as explicit tables, relation preservation, the named
// operations used throughout, and a backtracking search for NU polymorphisms.

#include "mccsp/core.hpp"

#include <numeric>
#include <set>

namespace mccsp {

/// A k-ary operation D^k -> D stored as a table; the first argument is the
/// most significant digit of the row index.
class Operation {
public:
    Operation(int arity, Domain domain, std::vector<Label> table)
        : arity_(arity), domain_(domain), table_(std::move(table)) {
        if (arity < 1) throw ContractError("operation arity must be positive");
        std::uint64_t rows = saturating_pow(domain.size(), arity);
        if (rows > (std::uint64_t{1} << 26)) throw ContractError("operation table too large");
        if (table_.size() != rows) throw InputError("operation table must have |D|^k entries");
        for (Label a : table_)
            if (!domain.contains(a)) throw InputError("operation output outside domain");
    }

    template <typename Fn>
    static Operation from_function(int arity, Domain domain, Fn&& fn) {
        std::uint64_t rows = saturating_pow(domain.size(), arity);
        if (rows > (std::uint64_t{1} << 26)) throw ContractError("operation table too large");
        std::vector<Label> table(rows);
        Tuple args(arity, 0);
        for (std::uint64_t r = 0; r < rows; ++r) {
            table[r] = fn(std::as_const(args));
            for (int i = arity - 1; i >= 0 && ++args[i] == domain.size(); --i) args[i] = 0;
        }
        return Operation(arity, domain, std::move(table));
    }

    int arity() const { return arity_; }
    Domain domain() const { return domain_; }
    const std::vector<Label>& table() const { return table_; }
    std::size_t rows() const { return table_.size(); }

    std::size_t index_of(std::span<const Label> args) const {
        std::size_t idx = 0;
        for (Label a : args) idx = idx * domain_.size() + static_cast<std::size_t>(a);
        return idx;
    }
    Tuple args_of(std::size_t index) const {
        Tuple args(arity_);
        for (int i = arity_ - 1; i >= 0; --i) {
            args[i] = static_cast<Label>(index % domain_.size());
            index /= domain_.size();
        }
        return args;
    }

    Label operator()(std::span<const Label> args) const {
        if (static_cast<int>(args.size()) != arity_) throw ContractError("wrong number of operation arguments");
        return table_[index_of(args)];
    }
    Label operator()(std::initializer_list<Label> args) const {
        return (*this)(std::span<const Label>(args.begin(), args.size()));
    }

    friend bool operator==(const Operation&, const Operation&) = default;

private:
    int arity_;
    Domain domain_;
    std::vector<Label> table_;
};

struct PreservationWitness {
    std::vector<Tuple> rows;  ///< k tuples of the relation
    Tuple image;              ///< coordinatewise image, not in the relation
};

struct PreservationResult {
    std::optional<PreservationWitness> violation;
    bool preserved() const { return !violation.has_value(); }
    explicit operator bool() const { return preserved(); }
};

/// Coordinatewise application of op to k rows.
inline Tuple apply_rows(const Operation& op, std::span<const Tuple> rows) {
    const int m = rows.empty() ? 0 : static_cast<int>(rows.front().size());
    Tuple image(m), column(op.arity());
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < op.arity(); ++i) column[i] = rows[i][j];
        image[j] = op(column);
    }
    return image;
}

/// Exhaustive check over all k-tuples of relation rows, in lexicographic
/// order of row indices; the first violation found is returned.
inline PreservationResult preserves(const Operation& op, const Relation& rel) {
    if (!(op.domain() == rel.domain())) throw ContractError("operation and relation domains differ");
    const auto& ts = rel.tuples();
    const int k = op.arity();
    const int m = rel.arity();
    if (ts.empty()) return {};
    std::vector<std::size_t> pick(k, 0);
    Tuple image(m), column(k);
    for (;;) {
        for (int j = 0; j < m; ++j) {
            for (int i = 0; i < k; ++i) column[i] = ts[pick[i]][j];
            image[j] = op(column);
        }
        if (!rel.contains(image)) {
            PreservationWitness w;
            for (int i = 0; i < k; ++i) w.rows.push_back(ts[pick[i]]);
            w.image = image;
            return {std::move(w)};
        }
        int i = k - 1;
        while (i >= 0 && ++pick[i] == ts.size()) pick[i--] = 0;
        if (i < 0) break;
    }
    return {};
}

/// Re-verifies a witness independently of how it was found.
inline bool witness_is_valid(const Operation& op, const Relation& rel, const PreservationWitness& w) {
    if (static_cast<int>(w.rows.size()) != op.arity()) return false;
    for (const auto& r : w.rows)
        if (!rel.contains(r)) return false;
    return apply_rows(op, w.rows) == w.image && !rel.contains(w.image);
}

struct LanguagePreservation {
    std::optional<std::pair<std::string, PreservationWitness>> violation;
    bool preserved() const { return !violation.has_value(); }
    explicit operator bool() const { return preserved(); }
};

inline LanguagePreservation preserves_language(const Operation& op, const ConstraintLanguage& lang) {
    if (!(op.domain() == lang.domain)) throw ContractError("operation and language domains differ");
    for (const auto& [name, rel] : lang.relations) {
        auto r = preserves(op, rel);
        if (!r.preserved()) return {std::make_pair(name, std::move(*r.violation))};
    }
    return {};
}

// ---------------------------------------------------------------------------
// Named operations

namespace ops {

inline Operation projection(int arity, int index, Domain d) {
    if (index < 1 || index > arity) throw ContractError("projection index out of range");
    return Operation::from_function(arity, d, [&](const Tuple& x) { return x[index - 1]; });
}

inline Operation constant(int arity, Label value, Domain d) {
    if (!d.contains(value)) throw ContractError("constant outside domain");
    return Operation::from_function(arity, d, [&](const Tuple&) { return value; });
}

/// Value occurring at least twice among three arguments, if any.
inline std::optional<Label> ternary_majority(const Tuple& x) {
    if (x[0] == x[1] || x[0] == x[2]) return x[0];
    if (x[1] == x[2]) return x[1];
    return std::nullopt;
}

/// Majority value if one exists, otherwise the argument at `fallback` (1-based).
inline Operation dual_discriminator_variant(Domain d, int fallback) {
    if (fallback < 1 || fallback > 3) throw ContractError("fallback coordinate must be 1, 2 or 3");
    return Operation::from_function(3, d, [&](const Tuple& x) { return ternary_majority(x).value_or(x[fallback - 1]); });
}

inline Operation dual_discriminator(Domain d) { return dual_discriminator_variant(d, 1); }

/// s(x1,x2,x3) = x3 if x1 = x2, x2 if x1 = x3, x1 otherwise.
inline Operation switching(Domain d) {
    return Operation::from_function(3, d, [](const Tuple& x) {
        if (x[0] == x[1]) return x[2];
        if (x[0] == x[2]) return x[1];
        return x[0];
    });
}

/// l_k: x1 when arguments are not pairwise distinct, xk otherwise. 2 <= k <= |D|-1.
inline Operation near_projection(int k, Domain d) {
    if (k < 2 || k > d.size() - 1)
        throw ContractError("near projection arity must satisfy 2 <= k <= |D|-1");
    return Operation::from_function(k, d, [&](const Tuple& x) {
        std::set<Label> distinct(x.begin(), x.end());
        return static_cast<int>(distinct.size()) < k ? x[0] : x[k - 1];
    });
}

/// r_n with n = |D|, arity n-1: x1 unless all arguments are distinct, in
/// which case the unique missing label.
inline Operation missing_label(Domain d) {
    const int n = d.size();
    if (n < 2) throw ContractError("r_n needs |D| >= 2");
    return Operation::from_function(n - 1, d, [&](const Tuple& x) {
        std::vector<bool> seen(n, false);
        for (Label a : x) seen[a] = true;
        if (std::count(seen.begin(), seen.end(), true) < n - 1) return x[0];
        return static_cast<Label>(std::find(seen.begin(), seen.end(), false) - seen.begin());
    });
}

/// th_p^n over {0,1}: 1 iff at least p arguments are 1.
inline Operation threshold(int p, int n) {
    if (n < 1 || p < 0 || p > n + 1) throw ContractError("threshold parameters out of range");
    return Operation::from_function(n, Domain(2), [&](const Tuple& x) {
        return static_cast<Label>(std::count(x.begin(), x.end(), 1) >= p ? 1 : 0);
    });
}

/// Majority value if one exists, otherwise 2; over {0,1,2}.
inline Operation claim_f() {
    return Operation::from_function(3, Domain(3), [](const Tuple& x) { return ternary_majority(x).value_or(2); });
}

/// g'(x) = g(f_1(x), ..., f_m(x)); every f_i must share an arity.
inline Operation compose(const Operation& g, std::span<const Operation> inner) {
    if (static_cast<int>(inner.size()) != g.arity()) throw ContractError("composition needs one inner op per argument");
    if (inner.empty()) throw ContractError("empty composition");
    const int n = inner.front().arity();
    for (const auto& f : inner)
        if (f.arity() != n || !(f.domain() == g.domain())) throw ContractError("inner operations must agree");
    return Operation::from_function(n, g.domain(), [&](const Tuple& x) {
        Tuple y;
        y.reserve(inner.size());
        for (const auto& f : inner) y.push_back(f(x));
        return g(y);
    });
}

/// Parses "dd", "dd:i", "proj:k:i", "switching", "near-proj:k", "r_n",
/// "th:p:n", "claim_f", "const:k:a".
inline Operation by_name(std::string_view spec, Domain d) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : spec) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    auto num = [&](std::size_t i) {
        if (i >= parts.size()) throw InputError("operation spec '" + std::string(spec) + "' is missing a parameter");
        try {
            return std::stoi(parts[i]);
        } catch (const std::exception&) {
            throw InputError("bad integer in operation spec '" + std::string(spec) + "'");
        }
    };
    const std::string& head = parts[0];
    if (head == "dd" || head == "dual_discriminator") return parts.size() > 1 ? dual_discriminator_variant(d, num(1)) : dual_discriminator(d);
    if (head == "proj") return projection(num(1), num(2), d);
    if (head == "switching" || head == "s") return switching(d);
    if (head == "near-proj" || head == "near_projection" || head == "l") return near_projection(num(1), d);
    if (head == "r_n" || head == "r") return missing_label(d);
    if (head == "const") return constant(num(1), num(2), d);
    if (head == "th" || head == "threshold") {
        if (d.size() != 2) throw ContractError("threshold operations need |D| = 2");
        return threshold(num(1), num(2));
    }
    if (head == "claim_f") {
        if (d.size() != 3) throw ContractError("claim_f is defined over |D| = 3");
        return claim_f();
    }
    throw InputError("unknown operation '" + std::string(spec) + "'");
}

}  // namespace ops

// ---------------------------------------------------------------------------
// Properties

inline bool is_conservative(const Operation& op) {
    for (std::size_t r = 0; r < op.rows(); ++r) {
        Tuple x = op.args_of(r);
        if (std::find(x.begin(), x.end(), op.table()[r]) == x.end()) return false;
    }
    return true;
}

/// Calls fn(row_index, value) for each near-unanimous row (including unanimous).
template <typename Fn>
void for_each_near_unanimous_row(int arity, Domain d, Fn&& fn) {
    Tuple x(arity);
    auto index_of = [&](const Tuple& t) {
        std::size_t idx = 0;
        for (Label a : t) idx = idx * d.size() + static_cast<std::size_t>(a);
        return idx;
    };
    for (Label a = 0; a < d.size(); ++a)
        for (Label b = 0; b < d.size(); ++b)
            for (int pos = 0; pos < arity; ++pos) {
                std::fill(x.begin(), x.end(), a);
                x[pos] = b;
                fn(index_of(x), a);
            }
}

inline bool is_nu(const Operation& op) {
    if (op.arity() < 3) throw ContractError("near-unanimity needs arity >= 3");
    bool ok = true;
    for_each_near_unanimous_row(op.arity(), op.domain(), [&](std::size_t row, Label a) {
        if (op.table()[row] != a) ok = false;
    });
    return ok;
}

inline bool is_majority(const Operation& op) { return op.arity() == 3 && is_nu(op); }

// ---------------------------------------------------------------------------
// NU polymorphism search

/// Searches for a k-ary NU polymorphism of lang. Near-unanimous rows are fixed
/// first; the remaining rows are assigned in index order, lowest value first,
/// and each preservation check fires as soon as all rows it reads are set.
/// The budget bounds the number of search nodes; exhausting it throws
/// BudgetExceeded, which is distinct from "no such operation" (nullopt).
inline std::optional<Operation> nu_search(const ConstraintLanguage& lang, int arity, bool conservative_only,
                                          std::uint64_t budget = kDefaultBudget) {
    if (arity < 3) throw ContractError("near-unanimity needs arity >= 3");
    const Domain d = lang.domain;
    const std::uint64_t rows = saturating_pow(d.size(), arity);
    if (rows > (std::uint64_t{1} << 22)) throw BudgetExceeded("operation table too large to search");

    std::vector<Label> table(rows, -1);
    for_each_near_unanimous_row(arity, d, [&](std::size_t row, Label a) { table[row] = a; });

    std::vector<std::size_t> free_rows;
    for (std::size_t r = 0; r < rows; ++r)
        if (table[r] < 0) free_rows.push_back(r);
    std::vector<int> order(rows, -1);  // position of a row among free rows
    for (std::size_t i = 0; i < free_rows.size(); ++i) order[free_rows[i]] = static_cast<int>(i);

    // Candidate values per free row.
    Operation shape(arity, d, std::vector<Label>(rows, 0));
    std::vector<std::vector<Label>> candidates(free_rows.size());
    for (std::size_t i = 0; i < free_rows.size(); ++i) {
        if (conservative_only) {
            Tuple x = shape.args_of(free_rows[i]);
            std::set<Label> vals(x.begin(), x.end());
            candidates[i].assign(vals.begin(), vals.end());
        } else {
            candidates[i].resize(d.size());
            std::iota(candidates[i].begin(), candidates[i].end(), 0);
        }
    }

    // A check is: for relation rel, the table rows read by each coordinate of
    // the image. It fires at the free row of highest order among them.
    struct Check {
        const Relation* rel;
        std::vector<std::size_t> cells;
    };
    std::vector<Check> initial;
    std::vector<std::vector<Check>> at(free_rows.size());
    for (const auto& [name, rel] : lang.relations) {
        const auto& ts = rel.tuples();
        if (ts.empty()) continue;
        std::set<std::vector<std::size_t>> seen;
        std::vector<std::size_t> pick(arity, 0);
        Tuple column(arity);
        for (;;) {
            std::vector<std::size_t> cells(rel.arity());
            for (int j = 0; j < rel.arity(); ++j) {
                for (int i = 0; i < arity; ++i) column[i] = ts[pick[i]][j];
                cells[j] = shape.index_of(column);
            }
            if (seen.insert(cells).second) {
                int trigger = -1;
                for (auto c : cells) trigger = std::max(trigger, order[c]);
                Check chk{&rel, cells};
                if (trigger < 0)
                    initial.push_back(std::move(chk));
                else
                    at[trigger].push_back(std::move(chk));
            }
            int i = arity - 1;
            while (i >= 0 && ++pick[i] == ts.size()) pick[i--] = 0;
            if (i < 0) break;
        }
    }

    Tuple image;
    auto passes = [&](const Check& c) {
        image.resize(c.cells.size());
        for (std::size_t j = 0; j < c.cells.size(); ++j) image[j] = table[c.cells[j]];
        return c.rel->contains(image);
    };
    for (const auto& c : initial)
        if (!passes(c)) return std::nullopt;
    if (free_rows.empty()) return Operation(arity, d, table);

    std::uint64_t nodes = 0;
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (i == free_rows.size()) return true;
        for (Label v : candidates[i]) {
            if (++nodes > budget) throw BudgetExceeded("NU search exceeded node budget");
            table[free_rows[i]] = v;
            bool ok = std::all_of(at[i].begin(), at[i].end(), passes);
            if (ok && rec(i + 1)) return true;
        }
        table[free_rows[i]] = -1;
        return false;
    };
    if (rec(0)) return Operation(arity, d, table);
    return std::nullopt;
}

}  // namespace mccsp

#endif  // MCCSP_POLYMORPHISM_HPP
