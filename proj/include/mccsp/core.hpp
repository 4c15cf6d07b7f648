#ifndef MCCSP_CORE_HPP
#define MCCSP_CORE_HPP

// Domains, relations, instances and costs for minimum-cost CSPs, plus the
// brute-force exact solver that every approximation result is checked against.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mccsp {

using Rational = mpq_class;
using Label = int;
using VarId = int;
using Tuple = std::vector<Label>;
/// Total map variable -> label, indexed by VarId.
using Assignment = std::vector<Label>;

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed instance, unknown names, bad file contents.
class InputError : public Error {
public:
    using Error::Error;
};

/// A relation failed the 2-decomposability check during binarization.
class DecomposabilityError : public InputError {
public:
    DecomposabilityError(std::string relation, const std::string& what)
        : InputError(what), relation_(std::move(relation)) {}
    const std::string& relation() const { return relation_; }

private:
    std::string relation_;
};

/// An enumeration or search exceeded its configured budget. Never a wrong answer.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

/// Caller violated a documented precondition.
class ContractError : public Error {
public:
    using Error::Error;
};

/// An internal proof obligation failed; indicates a bug.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Rationals

inline std::string to_string(const Rational& r) {
    Rational c = r;
    c.canonicalize();
    return c.get_str();
}

/// Parses "5", "2/3", "0.25" (exact). Rejects signs other than a leading '-'.
inline Rational parse_rational(std::string_view text) {
    auto fail = [&] { return InputError("malformed rational '" + std::string(text) + "'"); };
    if (text.empty()) throw fail();
    std::string s(text);
    bool negative = false;
    std::size_t pos = 0;
    if (s[0] == '-') {
        negative = true;
        pos = 1;
    }
    auto all_digits = [](std::string_view v) {
        return !v.empty() && std::all_of(v.begin(), v.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    Rational result;
    std::string body = s.substr(pos);
    if (auto slash = body.find('/'); slash != std::string::npos) {
        std::string num = body.substr(0, slash), den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) throw fail();
        mpz_class n(num), d(den);
        if (d == 0) throw fail();
        result = Rational(n, d);
    } else if (auto dot = body.find('.'); dot != std::string::npos) {
        std::string whole = body.substr(0, dot), frac = body.substr(dot + 1);
        if (whole.empty()) whole = "0";
        if (!all_digits(whole) || !all_digits(frac)) throw fail();
        mpz_class scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        result = Rational(mpz_class(whole) * scale + mpz_class(frac), scale);
    } else {
        if (!all_digits(body)) throw fail();
        result = Rational(mpz_class(body));
    }
    result.canonicalize();
    return negative ? Rational(-result) : result;
}

// ---------------------------------------------------------------------------
// Domain

class Domain {
public:
    explicit Domain(int size) : size_(size) {
        if (size < 1) throw ContractError("domain size must be at least 1");
    }
    int size() const { return size_; }
    bool contains(Label a) const { return a >= 0 && a < size_; }
    friend bool operator==(Domain, Domain) = default;

private:
    int size_;
};

/// |D|^k with saturation at uint64 max.
inline std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base)
            return std::numeric_limits<std::uint64_t>::max();
        r *= base;
    }
    return r;
}

// ---------------------------------------------------------------------------
// ExtendedCost: a non-negative exact rational or +infinity.

class ExtendedCost {
public:
    ExtendedCost() : value_(Rational(0)) {}
    ExtendedCost(Rational v) : value_(std::move(v)) { value_->canonicalize(); }
    ExtendedCost(long v) : value_(Rational(v)) {}

    static ExtendedCost infinite() {
        ExtendedCost c;
        c.value_.reset();
        return c;
    }

    bool is_infinite() const { return !value_.has_value(); }
    bool is_finite() const { return value_.has_value(); }

    const Rational& value() const {
        if (!value_) throw ContractError("value() on infinite cost");
        return *value_;
    }

    ExtendedCost& operator+=(const ExtendedCost& o) {
        if (!value_ || !o.value_)
            value_.reset();
        else
            *value_ += *o.value_;
        return *this;
    }
    friend ExtendedCost operator+(ExtendedCost a, const ExtendedCost& b) { return a += b; }

    friend bool operator==(const ExtendedCost& a, const ExtendedCost& b) {
        if (a.is_infinite() || b.is_infinite()) return a.is_infinite() == b.is_infinite();
        return *a.value_ == *b.value_;
    }
    friend bool operator<(const ExtendedCost& a, const ExtendedCost& b) {
        if (a.is_infinite()) return false;
        if (b.is_infinite()) return true;
        return *a.value_ < *b.value_;
    }
    friend bool operator>(const ExtendedCost& a, const ExtendedCost& b) { return b < a; }
    friend bool operator<=(const ExtendedCost& a, const ExtendedCost& b) { return !(b < a); }
    friend bool operator>=(const ExtendedCost& a, const ExtendedCost& b) { return !(a < b); }

    std::string to_string() const { return value_ ? mccsp::to_string(*value_) : "inf"; }

    /// Accepts "inf" or any rational accepted by parse_rational; rejects negatives.
    static ExtendedCost parse(std::string_view text) {
        if (text == "inf") return infinite();
        Rational r = parse_rational(text);
        if (r < 0) throw InputError("negative cost '" + std::string(text) + "'");
        return ExtendedCost(r);
    }

    friend std::ostream& operator<<(std::ostream& os, const ExtendedCost& c) { return os << c.to_string(); }

private:
    std::optional<Rational> value_;
};

// ---------------------------------------------------------------------------
// Relation

class Relation {
public:
    Relation(int arity, Domain domain, std::vector<Tuple> tuples) : arity_(arity), domain_(domain) {
        if (arity < 1) throw ContractError("relation arity must be positive");
        for (const auto& t : tuples) {
            if (static_cast<int>(t.size()) != arity)
                throw InputError("tuple length " + std::to_string(t.size()) + " does not match arity " +
                                 std::to_string(arity));
            for (Label a : t)
                if (!domain.contains(a))
                    throw InputError("label " + std::to_string(a) + " outside domain of size " +
                                     std::to_string(domain.size()));
        }
        std::sort(tuples.begin(), tuples.end());
        tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
        tuples_ = std::move(tuples);
        std::uint64_t cells = saturating_pow(domain.size(), arity);
        if (cells <= kBitmapLimit) {
            bitmap_.assign(cells, false);
            for (const auto& t : tuples_) bitmap_[encode(t)] = true;
        }
    }

    template <typename Pred>
    static Relation from_predicate(int arity, Domain domain, Pred&& pred) {
        std::vector<Tuple> out;
        Tuple t(arity, 0);
        for (;;) {
            if (pred(std::as_const(t))) out.push_back(t);
            int i = arity - 1;
            while (i >= 0 && ++t[i] == domain.size()) t[i--] = 0;
            if (i < 0) break;
        }
        return Relation(arity, domain, std::move(out));
    }

    int arity() const { return arity_; }
    Domain domain() const { return domain_; }
    const std::vector<Tuple>& tuples() const { return tuples_; }
    std::size_t size() const { return tuples_.size(); }
    bool empty() const { return tuples_.empty(); }

    bool contains(std::span<const Label> t) const {
        if (static_cast<int>(t.size()) != arity_) return false;
        for (Label a : t)
            if (!domain_.contains(a)) return false;
        if (!bitmap_.empty()) return bitmap_[encode(t)];
        return std::binary_search(tuples_.begin(), tuples_.end(), t,
                                  [](const auto& x, const auto& y) {
                                      return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
                                  });
    }
    bool contains(std::initializer_list<Label> t) const { return contains(std::span<const Label>(t.begin(), t.size())); }

    /// Projection onto the given coordinate positions (may repeat).
    Relation project(std::span<const int> positions) const {
        std::vector<Tuple> out;
        out.reserve(tuples_.size());
        for (const auto& t : tuples_) {
            Tuple p;
            p.reserve(positions.size());
            for (int i : positions) p.push_back(t.at(i));
            out.push_back(std::move(p));
        }
        return Relation(static_cast<int>(positions.size()), domain_, std::move(out));
    }

    friend bool operator==(const Relation& a, const Relation& b) {
        return a.arity_ == b.arity_ && a.domain_ == b.domain_ && a.tuples_ == b.tuples_;
    }

private:
    static constexpr std::uint64_t kBitmapLimit = std::uint64_t{1} << 22;

    std::size_t encode(std::span<const Label> t) const {
        std::size_t code = 0;
        for (Label a : t) code = code * domain_.size() + static_cast<std::size_t>(a);
        return code;
    }

    int arity_;
    Domain domain_;
    std::vector<Tuple> tuples_;
    std::vector<bool> bitmap_;
};

namespace relations {

inline Relation equality(Domain d) {
    return Relation::from_predicate(2, d, [](const Tuple& t) { return t[0] == t[1]; });
}
inline Relation disequality(Domain d) {
    return Relation::from_predicate(2, d, [](const Tuple& t) { return t[0] != t[1]; });
}
inline Relation full(int arity, Domain d) {
    return Relation::from_predicate(arity, d, [](const Tuple&) { return true; });
}
inline Relation unary(Domain d, std::vector<Label> labels) {
    std::vector<Tuple> ts;
    for (Label a : labels) ts.push_back({a});
    return Relation(1, d, std::move(ts));
}

}  // namespace relations

// ---------------------------------------------------------------------------
// Constraint language

struct ConstraintLanguage {
    Domain domain;
    std::map<std::string, Relation> relations;

    explicit ConstraintLanguage(Domain d) : domain(d) {}

    void add(const std::string& name, Relation rel) {
        if (!(rel.domain() == domain)) throw InputError("relation '" + name + "' has a different domain");
        if (!relations.emplace(name, std::move(rel)).second)
            throw InputError("duplicate relation name '" + name + "'");
    }
    const Relation& at(const std::string& name) const {
        auto it = relations.find(name);
        if (it == relations.end()) throw InputError("unknown relation '" + name + "'");
        return it->second;
    }
};

// ---------------------------------------------------------------------------
// Costs and instances

class CostMatrix {
public:
    CostMatrix(int num_vars, Domain domain)
        : num_vars_(num_vars), domain_(domain), entries_(static_cast<std::size_t>(num_vars) * domain.size()) {}

    int num_vars() const { return num_vars_; }
    Domain domain() const { return domain_; }

    const ExtendedCost& at(VarId v, Label a) const { return entries_.at(index(v, a)); }
    void set(VarId v, Label a, ExtendedCost c) {
        if (c.is_finite() && c.value() < 0) throw InputError("negative cost");
        entries_.at(index(v, a)) = std::move(c);
    }

    friend bool operator==(const CostMatrix&, const CostMatrix&) = default;

private:
    std::size_t index(VarId v, Label a) const {
        if (v < 0 || v >= num_vars_ || !domain_.contains(a)) throw ContractError("cost index out of range");
        return static_cast<std::size_t>(v) * domain_.size() + a;
    }

    int num_vars_;
    Domain domain_;
    std::vector<ExtendedCost> entries_;
};

struct Constraint {
    std::string relation;
    std::vector<VarId> scope;
    friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// A MinCostCSP instance (V, C, cost). Immutable after construction.
class Instance {
public:
    Instance(Domain domain, std::vector<std::string> variables, std::map<std::string, Relation> relations,
             std::vector<Constraint> constraints, CostMatrix costs)
        : domain_(domain),
          variables_(std::move(variables)),
          relations_(std::move(relations)),
          constraints_(std::move(constraints)),
          costs_(std::move(costs)) {
        if (costs_.num_vars() != num_vars() || !(costs_.domain() == domain_))
            throw InputError("cost matrix shape does not match instance");
        for (const auto& [name, rel] : relations_)
            if (!(rel.domain() == domain_)) throw InputError("relation '" + name + "' has a different domain");
        for (const auto& c : constraints_) {
            auto it = relations_.find(c.relation);
            if (it == relations_.end()) throw InputError("constraint uses unknown relation '" + c.relation + "'");
            if (static_cast<int>(c.scope.size()) != it->second.arity())
                throw InputError("scope length does not match arity of '" + c.relation + "'");
            for (VarId v : c.scope)
                if (v < 0 || v >= num_vars())
                    throw InputError("constraint on '" + c.relation + "' uses an undeclared variable");
        }
    }

    Domain domain() const { return domain_; }
    int num_vars() const { return static_cast<int>(variables_.size()); }
    const std::vector<std::string>& variables() const { return variables_; }
    const std::map<std::string, Relation>& relations() const { return relations_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    const CostMatrix& costs() const { return costs_; }

    const Relation& relation(const std::string& name) const {
        auto it = relations_.find(name);
        if (it == relations_.end()) throw InputError("unknown relation '" + name + "'");
        return it->second;
    }

    std::optional<VarId> find_variable(std::string_view name) const {
        for (int i = 0; i < num_vars(); ++i)
            if (variables_[i] == name) return i;
        return std::nullopt;
    }

    friend bool operator==(const Instance&, const Instance&) = default;

private:
    Domain domain_;
    std::vector<std::string> variables_;
    std::map<std::string, Relation> relations_;
    std::vector<Constraint> constraints_;
    CostMatrix costs_;
};

/// Incremental builder; variables are created on first mention.
class InstanceBuilder {
public:
    explicit InstanceBuilder(Domain d) : domain_(d) {}

    VarId variable(const std::string& name) {
        for (int i = 0; i < static_cast<int>(names_.size()); ++i)
            if (names_[i] == name) return i;
        names_.push_back(name);
        costs_.emplace_back(domain_.size());
        return static_cast<VarId>(names_.size() - 1);
    }

    InstanceBuilder& relation(const std::string& name, Relation rel) {
        auto [it, fresh] = relations_.emplace(name, rel);
        if (!fresh && !(it->second == rel)) throw InputError("conflicting definitions of relation '" + name + "'");
        return *this;
    }

    InstanceBuilder& constrain(const std::string& rel, std::vector<VarId> scope) {
        constraints_.push_back({rel, std::move(scope)});
        return *this;
    }

    InstanceBuilder& cost(VarId v, Label a, ExtendedCost c) {
        costs_.at(v).at(a) = std::move(c);
        return *this;
    }

    bool has_relation(const std::string& name) const { return relations_.count(name) != 0; }
    int num_vars() const { return static_cast<int>(names_.size()); }

    Instance build() const {
        CostMatrix m(num_vars(), domain_);
        for (int v = 0; v < num_vars(); ++v)
            for (int a = 0; a < domain_.size(); ++a) m.set(v, a, costs_[v][a]);
        return Instance(domain_, names_, relations_, constraints_, std::move(m));
    }

private:
    Domain domain_;
    std::vector<std::string> names_;
    std::map<std::string, Relation> relations_;
    std::vector<Constraint> constraints_;
    std::vector<std::vector<ExtendedCost>> costs_;
};

// ---------------------------------------------------------------------------
// Evaluation

struct Evaluation {
    bool satisfying;
    ExtendedCost cost;
};

inline ExtendedCost assignment_cost(const Instance& inst, const Assignment& a) {
    ExtendedCost total;
    for (VarId v = 0; v < inst.num_vars(); ++v) total += inst.costs().at(v, a[v]);
    return total;
}

inline bool satisfies(const Instance& inst, const Constraint& c, const Assignment& a) {
    Tuple t;
    t.reserve(c.scope.size());
    for (VarId v : c.scope) t.push_back(a[v]);
    return inst.relation(c.relation).contains(t);
}

inline Evaluation evaluate(const Instance& inst, const Assignment& a) {
    if (static_cast<int>(a.size()) != inst.num_vars())
        throw ContractError("assignment is not total over the instance variables");
    for (Label l : a)
        if (!inst.domain().contains(l)) throw ContractError("assignment label outside domain");
    bool ok = std::all_of(inst.constraints().begin(), inst.constraints().end(),
                          [&](const Constraint& c) { return satisfies(inst, c, a); });
    return {ok, assignment_cost(inst, a)};
}

// ---------------------------------------------------------------------------
// Exhaustive search

namespace detail {

/// Depth-first enumeration in lexicographic (variable, label) order. Each
/// constraint is checked once its highest-index variable is assigned.
/// `visit(assignment, depth)` is called on every consistent partial assignment
/// of length depth+1 and returns false to prune the subtree.
template <typename Visit>
void lexicographic_search(const Instance& inst, std::uint64_t budget, Visit&& visit) {
    const int n = inst.num_vars();
    const int d = inst.domain().size();
    if (saturating_pow(d, n) > budget)
        throw BudgetExceeded("enumeration needs " + std::to_string(d) + "^" + std::to_string(n) +
                             " assignments, budget is " + std::to_string(budget));
    std::vector<std::vector<const Constraint*>> closing(n);
    for (const auto& c : inst.constraints()) {
        if (c.scope.empty()) continue;
        VarId last = *std::max_element(c.scope.begin(), c.scope.end());
        closing[last].push_back(&c);
    }
    if (n == 0) return;
    Assignment a(n, 0);
    Tuple scratch;
    auto consistent = [&](int depth) {
        for (const Constraint* c : closing[depth]) {
            scratch.clear();
            for (VarId v : c->scope) scratch.push_back(a[v]);
            if (!inst.relation(c->relation).contains(scratch)) return false;
        }
        return true;
    };
    std::function<void(int)> rec = [&](int depth) {
        for (Label l = 0; l < d; ++l) {
            a[depth] = l;
            if (!consistent(depth)) continue;
            if (!visit(std::as_const(a), depth)) continue;
            if (depth + 1 < n) rec(depth + 1);
        }
    };
    rec(0);
}

}  // namespace detail

/// Calls fn on every satisfying assignment, in lexicographic order.
template <typename Fn>
void for_each_satisfying(const Instance& inst, Fn&& fn, std::uint64_t budget = kDefaultBudget) {
    const int n = inst.num_vars();
    if (n == 0) {
        if (saturating_pow(inst.domain().size(), 0) > budget) throw BudgetExceeded("budget is zero");
        Assignment empty;
        if (evaluate(inst, empty).satisfying) fn(std::as_const(empty));
        return;
    }
    detail::lexicographic_search(inst, budget, [&](const Assignment& a, int depth) {
        if (depth + 1 == n) fn(a);
        return true;
    });
}

inline std::vector<Assignment> enumerate_satisfying(const Instance& inst, std::uint64_t budget = kDefaultBudget) {
    std::vector<Assignment> out;
    for_each_satisfying(inst, [&](const Assignment& a) { out.push_back(a); }, budget);
    return out;
}

struct ExactSolution {
    ExtendedCost optimum;
    Assignment witness;
};

/// Minimum finite cost over all satisfying assignments; nullopt means Unsat
/// (no satisfying assignment, or every satisfying assignment has infinite cost).
inline std::optional<ExactSolution> solve_exact(const Instance& inst, std::uint64_t budget = kDefaultBudget) {
    const int n = inst.num_vars();
    if (n == 0) {
        Assignment empty;
        if (!evaluate(inst, empty).satisfying) return std::nullopt;
        return ExactSolution{ExtendedCost(0), empty};
    }
    std::optional<ExactSolution> best;
    std::vector<Rational> partial(n);
    detail::lexicographic_search(inst, budget, [&](const Assignment& a, int depth) {
        const ExtendedCost& c = inst.costs().at(depth, a[depth]);
        if (c.is_infinite()) return false;
        partial[depth] = (depth == 0 ? Rational(0) : partial[depth - 1]) + c.value();
        if (best && partial[depth] >= best->optimum.value()) return false;
        if (depth + 1 == n) best = ExactSolution{ExtendedCost(partial[depth]), a};
        return true;
    });
    return best;
}

}  // namespace mccsp

#endif  // MCCSP_CORE_HPP
