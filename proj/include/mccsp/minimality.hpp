#ifndef MCCSP_MINIMALITY_HPP
#define MCCSP_MINIMALITY_HPP

// Binary instances, binarization through pairwise projections, the
// (2,3)-minimality fixpoint, the 0/1/all classifier for binary relations and
// satisfying-assignment extraction for nontrivial minimal instances.

#include "mccsp/core.hpp"
#include "mccsp/polymorphism.hpp"

#include <bit>
#include <variant>

namespace mccsp {

/// Bit a is set iff label a is in the set. Domains up to 64 labels.
using LabelSet = std::uint64_t;

inline LabelSet full_label_set(Domain d) {
    return d.size() == 64 ? ~LabelSet{0} : ((LabelSet{1} << d.size()) - 1);
}
inline bool has_label(LabelSet s, Label a) { return (s >> a) & 1U; }
inline LabelSet singleton(Label a) { return LabelSet{1} << a; }
inline int lowest_label(LabelSet s) { return std::countr_zero(s); }
inline int label_count(LabelSet s) { return std::popcount(s); }

template <typename Fn>
void for_each_label(LabelSet s, Fn&& fn) {
    while (s) {
        int a = std::countr_zero(s);
        fn(static_cast<Label>(a));
        s &= s - 1;
    }
}

inline std::vector<Label> labels_of(LabelSet s) {
    std::vector<Label> out;
    for_each_label(s, [&](Label a) { out.push_back(a); });
    return out;
}

/// Binary CSP in triple form (V, {R_u}, {R_{u,v}}). Both orientations of every
/// pair are stored and kept as transposes of each other. Pairs never touched
/// are implicitly D x D and materialized on first write.
class BinaryInstance {
public:
    BinaryInstance(Domain domain, std::vector<std::string> names, CostMatrix costs)
        : domain_(domain), names_(std::move(names)), costs_(std::move(costs)) {
        if (domain.size() > 64) throw ContractError("binary instances support at most 64 labels");
        if (costs_.num_vars() != num_vars()) throw ContractError("cost matrix shape does not match");
        unary_.assign(num_vars(), full_label_set(domain));
        pairs_.resize(static_cast<std::size_t>(num_vars()) * num_vars());
    }

    Domain domain() const { return domain_; }
    int num_vars() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }
    const CostMatrix& costs() const { return costs_; }

    LabelSet unary(VarId u) const { return unary_.at(u); }

    /// {b : (a,b) in R_{u,v}}.
    LabelSet row(VarId u, VarId v, Label a) const {
        check_pair(u, v);
        const auto& p = pairs_[key(u, v)];
        return p.empty() ? full_label_set(domain_) : p[a];
    }
    bool allows(VarId u, VarId v, Label a, Label b) const { return has_label(row(u, v, a), b); }
    bool is_materialized(VarId u, VarId v) const { return !pairs_[key(u, v)].empty(); }

    Relation pair_relation(VarId u, VarId v) const {
        std::vector<Tuple> ts;
        for (Label a = 0; a < domain_.size(); ++a)
            for_each_label(row(u, v, a), [&](Label b) { ts.push_back({a, b}); });
        return Relation(2, domain_, std::move(ts));
    }

    /// R_u <- R_u ∩ mask.
    bool restrict_unary(VarId u, LabelSet mask) {
        LabelSet next = unary_.at(u) & mask;
        if (next == unary_[u]) return false;
        unary_[u] = next;
        return true;
    }

    /// R_{u,v} <- R_{u,v} ∩ rel, keeping R_{v,u} in sync.
    bool restrict_pair(VarId u, VarId v, const Relation& rel) {
        if (rel.arity() != 2 || !(rel.domain() == domain_)) throw ContractError("pair relation must be binary over D");
        std::vector<LabelSet> keep(domain_.size(), 0);
        for (const auto& t : rel.tuples()) keep[t[0]] |= singleton(t[1]);
        return restrict_rows(u, v, keep);
    }

    /// R_{u,v} <- R_{u,v} ∩ (rows[a] for each a).
    bool restrict_rows(VarId u, VarId v, const std::vector<LabelSet>& rows) {
        check_pair(u, v);
        materialize(u, v);
        bool changed = false;
        auto& p = pairs_[key(u, v)];
        for (Label a = 0; a < domain_.size(); ++a) {
            LabelSet next = p[a] & rows[a];
            if (next == p[a]) continue;
            LabelSet removed = p[a] & ~next;
            p[a] = next;
            changed = true;
            auto& q = pairs_[key(v, u)];
            for_each_label(removed, [&](Label b) { q[b] &= ~singleton(a); });
        }
        return changed;
    }

    bool remove_pair_tuple(VarId u, VarId v, Label a, Label b) {
        check_pair(u, v);
        materialize(u, v);
        auto& p = pairs_[key(u, v)];
        if (!has_label(p[a], b)) return false;
        p[a] &= ~singleton(b);
        pairs_[key(v, u)][b] &= ~singleton(a);
        return true;
    }

    void materialize(VarId u, VarId v) {
        if (!pairs_[key(u, v)].empty()) return;
        pairs_[key(u, v)].assign(domain_.size(), full_label_set(domain_));
        pairs_[key(v, u)].assign(domain_.size(), full_label_set(domain_));
    }

    /// Overwrites everything with the empty relation (the canonical trivial instance).
    void clear_all() {
        std::fill(unary_.begin(), unary_.end(), LabelSet{0});
        for (VarId u = 0; u < num_vars(); ++u)
            for (VarId v = 0; v < num_vars(); ++v)
                if (u != v) pairs_[key(u, v)].assign(domain_.size(), LabelSet{0});
    }

    friend bool operator==(const BinaryInstance& a, const BinaryInstance& b) {
        if (!(a.domain_ == b.domain_) || a.names_ != b.names_ || !(a.costs_ == b.costs_) || a.unary_ != b.unary_)
            return false;
        for (VarId u = 0; u < a.num_vars(); ++u)
            for (VarId v = 0; v < a.num_vars(); ++v) {
                if (u == v) continue;
                for (Label x = 0; x < a.domain_.size(); ++x)
                    if (a.row(u, v, x) != b.row(u, v, x)) return false;
            }
        return true;
    }

private:
    std::size_t key(VarId u, VarId v) const { return static_cast<std::size_t>(u) * num_vars() + v; }
    void check_pair(VarId u, VarId v) const {
        if (u == v || u < 0 || v < 0 || u >= num_vars() || v >= num_vars())
            throw ContractError("pair relations need two distinct declared variables");
    }

    Domain domain_;
    std::vector<std::string> names_;
    CostMatrix costs_;
    std::vector<LabelSet> unary_;
    std::vector<std::vector<LabelSet>> pairs_;
};

/// The same constraints as an ordinary Instance: one unary relation "U<u>" per
/// restricted variable and one binary relation "B<u>_<v>" per u < v whose
/// relation is not all of D x D.
inline Instance to_instance(const BinaryInstance& bi) {
    const Domain d = bi.domain();
    std::map<std::string, Relation> rels;
    std::vector<Constraint> cons;
    for (VarId u = 0; u < bi.num_vars(); ++u) {
        if (bi.unary(u) == full_label_set(d)) continue;
        std::string name = "U" + std::to_string(u);
        rels.emplace(name, relations::unary(d, labels_of(bi.unary(u))));
        cons.push_back({name, {u}});
    }
    for (VarId u = 0; u < bi.num_vars(); ++u)
        for (VarId v = u + 1; v < bi.num_vars(); ++v) {
            Relation r = bi.pair_relation(u, v);
            if (r.size() == static_cast<std::size_t>(d.size() * d.size())) continue;
            std::string name = "B" + std::to_string(u) + "_" + std::to_string(v);
            rels.emplace(name, std::move(r));
            cons.push_back({name, {u, v}});
        }
    return Instance(d, bi.names(), std::move(rels), std::move(cons), bi.costs());
}

/// Sub-instance induced on `keep` (in the given order).
inline BinaryInstance induced(const BinaryInstance& bi, const std::vector<VarId>& keep) {
    std::vector<std::string> names;
    CostMatrix costs(static_cast<int>(keep.size()), bi.domain());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        names.push_back(bi.names().at(keep[i]));
        for (Label a = 0; a < bi.domain().size(); ++a) costs.set(static_cast<VarId>(i), a, bi.costs().at(keep[i], a));
    }
    BinaryInstance out(bi.domain(), std::move(names), std::move(costs));
    for (std::size_t i = 0; i < keep.size(); ++i) {
        out.restrict_unary(static_cast<VarId>(i), bi.unary(keep[i]));
        for (std::size_t j = i + 1; j < keep.size(); ++j) {
            if (!bi.is_materialized(keep[i], keep[j])) continue;
            std::vector<LabelSet> rows(bi.domain().size());
            for (Label a = 0; a < bi.domain().size(); ++a) rows[a] = bi.row(keep[i], keep[j], a);
            out.restrict_rows(static_cast<VarId>(i), static_cast<VarId>(j), rows);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Binarization

/// True iff rel equals the join of its binary projections.
inline bool is_2_decomposable(const Relation& rel) {
    const int k = rel.arity();
    if (k <= 2) return true;
    const int d = rel.domain().size();
    // proj[i][j][a] = {b : some tuple has t_i = a, t_j = b}, i < j
    std::vector<std::vector<std::vector<LabelSet>>> proj(k, std::vector<std::vector<LabelSet>>(k));
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            proj[i][j].assign(d, 0);
            for (const auto& t : rel.tuples()) proj[i][j][t[i]] |= singleton(t[j]);
        }
    // Count the join with early exit once it exceeds |R|; R is always a subset.
    const std::size_t limit = rel.size();
    std::size_t count = 0;
    Tuple t(k);
    std::function<bool(int)> rec = [&](int depth) -> bool {
        if (depth == k) return ++count <= limit;
        LabelSet cand = full_label_set(rel.domain());
        for (int i = 0; i < depth; ++i) cand &= proj[i][depth][t[i]];
        bool ok = true;
        for_each_label(cand, [&](Label a) {
            if (!ok) return;
            t[depth] = a;
            ok = rec(depth + 1);
        });
        return ok;
    };
    return rec(0) && count == limit;
}

/// The relation a constraint actually imposes on its distinct scope variables:
/// tuples inconsistent with repeated variables are dropped, then projected onto
/// first occurrences. `vars` receives the distinct variables in order.
inline Relation effective_relation(const Relation& rel, const std::vector<VarId>& scope, std::vector<VarId>& vars) {
    vars.clear();
    std::vector<int> first;
    for (int i = 0; i < static_cast<int>(scope.size()); ++i)
        if (std::find(vars.begin(), vars.end(), scope[i]) == vars.end()) {
            vars.push_back(scope[i]);
            first.push_back(i);
        }
    if (vars.size() == scope.size()) return rel;
    std::vector<Tuple> ts;
    for (const auto& t : rel.tuples()) {
        bool ok = true;
        for (int i = 0; i < static_cast<int>(scope.size()) && ok; ++i)
            for (int j = 0; j < i && ok; ++j)
                if (scope[i] == scope[j] && t[i] != t[j]) ok = false;
        if (!ok) continue;
        Tuple p;
        for (int i : first) p.push_back(t[i]);
        ts.push_back(std::move(p));
    }
    return Relation(static_cast<int>(vars.size()), rel.domain(), std::move(ts));
}

/// Replaces every constraint by its pairwise projections; unary constraints and
/// infinite-cost labels restrict R_u. With validate, a constraint whose relation
/// is not 2-decomposable raises DecomposabilityError.
inline BinaryInstance binarize(const Instance& inst, bool validate = true) {
    const Domain d = inst.domain();
    BinaryInstance bi(d, inst.variables(), inst.costs());
    for (VarId v = 0; v < inst.num_vars(); ++v) {
        LabelSet finite = 0;
        for (Label a = 0; a < d.size(); ++a)
            if (inst.costs().at(v, a).is_finite()) finite |= singleton(a);
        bi.restrict_unary(v, finite);
    }
    std::vector<VarId> vars;
    for (const auto& c : inst.constraints()) {
        Relation eff = effective_relation(inst.relation(c.relation), c.scope, vars);
        if (validate && !is_2_decomposable(eff))
            throw DecomposabilityError(c.relation, "relation '" + c.relation +
                                                       "' is not 2-decomposable (its pairwise projections "
                                                       "admit extra tuples)");
        const int k = eff.arity();
        if (k == 1) {
            LabelSet allowed = 0;
            for (const auto& t : eff.tuples()) allowed |= singleton(t[0]);
            bi.restrict_unary(vars[0], allowed);
            continue;
        }
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j) {
                std::vector<LabelSet> rows(d.size(), 0);
                for (const auto& t : eff.tuples()) rows[t[i]] |= singleton(t[j]);
                bi.restrict_rows(vars[i], vars[j], rows);
            }
    }
    return bi;
}

// ---------------------------------------------------------------------------
// (2,3)-minimality

inline bool is_trivial(const BinaryInstance& bi) {
    for (VarId u = 0; u < bi.num_vars(); ++u)
        if (bi.unary(u) == 0) return true;
    return false;
}

namespace detail {

inline LabelSet first_projection(const BinaryInstance& bi, VarId u, VarId v) {
    LabelSet s = 0;
    for (Label a = 0; a < bi.domain().size(); ++a)
        if (bi.row(u, v, a)) s |= singleton(a);
    return s;
}

/// Shrinks R_u to mask and drops every pair tuple that leaves R_u.
inline bool shrink_unary(BinaryInstance& bi, VarId u, LabelSet mask) {
    if (!bi.restrict_unary(u, mask)) return false;
    const LabelSet keep = bi.unary(u);
    std::vector<LabelSet> rows(bi.domain().size());
    for (VarId x = 0; x < bi.num_vars(); ++x) {
        if (x == u) continue;
        for (Label a = 0; a < bi.domain().size(); ++a) rows[a] = has_label(keep, a) ? ~LabelSet{0} : 0;
        bi.restrict_rows(u, x, rows);
    }
    return true;
}

}  // namespace detail

/// Path-consistency fixpoint. Sweeps ordered triples (u,v,w) lexicographically,
/// pruning (a,b) from R_{u,v} when no c has (a,c) in R_{u,w} and (b,c) in
/// R_{v,w}, and keeps unary relations equal to pair projections. Stops when a
/// full sweep changes nothing. An empty unary relation short-circuits to the
/// all-empty instance.
inline BinaryInstance make_23_minimal(BinaryInstance bi) {
    const int n = bi.num_vars();
    const Domain d = bi.domain();
    if (is_trivial(bi)) {
        bi.clear_all();
        return bi;
    }
    for (VarId u = 0; u < n; ++u)
        for (VarId v = u + 1; v < n; ++v) {
            std::vector<LabelSet> rows(d.size(), 0);
            for (Label a = 0; a < d.size(); ++a)
                if (has_label(bi.unary(u), a)) rows[a] = bi.unary(v);
            bi.restrict_rows(u, v, rows);
        }

    auto sync_unary = [&](VarId u, VarId v) {
        // R_u <- R_u ∩ π_1 R_{u,v}; returns false when R_u became empty.
        detail::shrink_unary(bi, u, detail::first_projection(bi, u, v));
        return bi.unary(u) != 0;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (VarId u = 0; u < n; ++u)
            for (VarId v = 0; v < n; ++v) {
                if (u == v) continue;
                LabelSet before = bi.unary(u);
                if (!sync_unary(u, v)) {
                    bi.clear_all();
                    return bi;
                }
                changed |= before != bi.unary(u);
            }
        for (VarId u = 0; u < n; ++u)
            for (VarId v = 0; v < n; ++v) {
                if (v == u) continue;
                for (VarId w = 0; w < n; ++w) {
                    if (w == u || w == v) continue;
                    bool touched = false;
                    for (Label a = 0; a < d.size(); ++a) {
                        const LabelSet via = bi.row(u, w, a);
                        for_each_label(bi.row(u, v, a), [&](Label b) {
                            if ((via & bi.row(v, w, b)) == 0) touched |= bi.remove_pair_tuple(u, v, a, b);
                        });
                    }
                    if (!touched) continue;
                    changed = true;
                    if (!sync_unary(u, v) || !sync_unary(v, u)) {
                        bi.clear_all();
                        return bi;
                    }
                }
            }
    }
    return bi;
}

/// Exhaustive check of conditions (a) transpose symmetry, (b) unary relations
/// equal pair projections, (c) every pair tuple extends to any third variable.
/// Returns a description of the first violation, or nullopt.
inline std::optional<std::string> check_23_minimal(const BinaryInstance& bi) {
    const int n = bi.num_vars();
    const int d = bi.domain().size();
    auto name = [&](VarId v) { return bi.names()[v]; };
    for (VarId u = 0; u < n; ++u)
        for (VarId v = 0; v < n; ++v) {
            if (u == v) continue;
            for (Label a = 0; a < d; ++a)
                for (Label b = 0; b < d; ++b)
                    if (bi.allows(u, v, a, b) != bi.allows(v, u, b, a))
                        return "(a) R_{" + name(v) + "," + name(u) + "} is not the transpose of R_{" + name(u) + "," +
                               name(v) + "}";
            for (Label a = 0; a < d; ++a) {
                bool in_projection = false;
                for (Label b = 0; b < d; ++b) in_projection = in_projection || bi.allows(u, v, a, b);
                if (in_projection != has_label(bi.unary(u), a))
                    return "(b) R_" + name(u) + " differs from the projection of R_{" + name(u) + "," + name(v) +
                           "} at label " + std::to_string(a);
            }
        }
    for (VarId u = 0; u < n; ++u)
        for (VarId v = 0; v < n; ++v)
            for (VarId w = 0; w < n; ++w) {
                if (u == v || v == w || u == w) continue;
                for (Label a = 0; a < d; ++a)
                    for (Label b = 0; b < d; ++b) {
                        if (!bi.allows(u, v, a, b)) continue;
                        bool extends = false;
                        for (Label c = 0; c < d && !extends; ++c)
                            extends = has_label(bi.unary(w), c) && bi.allows(u, w, a, c) && bi.allows(v, w, b, c);
                        if (!extends)
                            return "(c) (" + std::to_string(a) + "," + std::to_string(b) + ") in R_{" + name(u) + "," +
                                   name(v) + "} does not extend to " + name(w);
                    }
            }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// 0/1/all classification of binary relations

struct ProductForm {
    LabelSet p, q;
};
/// ({u} x Q) ∪ (P x {v}) with u in P, v in Q.
struct TwoFanForm {
    Label u;
    LabelSet p;
    Label v;
    LabelSet q;
};
/// {(a, pi(a)) : a in P}; pi[a] = -1 outside P.
struct BijectionForm {
    LabelSet p, q;
    std::vector<Label> pi;
};
struct NotPreservedForm {
    PreservationWitness witness;
};

using BinaryClass = std::variant<ProductForm, TwoFanForm, BijectionForm, NotPreservedForm>;

inline bool is_preserved(const BinaryClass& c) { return !std::holds_alternative<NotPreservedForm>(c); }

/// Rebuilds the relation described by a preserved class.
inline Relation reconstruct(const BinaryClass& c, Domain d) {
    std::vector<Tuple> ts;
    std::visit(
        [&](const auto& form) {
            using T = std::decay_t<decltype(form)>;
            if constexpr (std::is_same_v<T, ProductForm>) {
                for_each_label(form.p, [&](Label a) { for_each_label(form.q, [&](Label b) { ts.push_back({a, b}); }); });
            } else if constexpr (std::is_same_v<T, TwoFanForm>) {
                for_each_label(form.q, [&](Label b) { ts.push_back({form.u, b}); });
                for_each_label(form.p, [&](Label a) { ts.push_back({a, form.v}); });
            } else if constexpr (std::is_same_v<T, BijectionForm>) {
                for_each_label(form.p, [&](Label a) { ts.push_back({a, form.pi[a]}); });
            } else {
                throw ContractError("cannot reconstruct a relation that is not preserved by d");
            }
        },
        c);
    return Relation(2, d, std::move(ts));
}

/// Decides which of the three dual-discriminator-closed shapes a binary
/// relation has, following the constructive case analysis: full rows decide
/// between product and two-fan, otherwise every row must be a single partner.
inline BinaryClass classify_01all(const Relation& rel) {
    if (rel.arity() != 2) throw ContractError("classify_01all needs a binary relation");
    const Domain d = rel.domain();
    if (d.size() > 64) throw ContractError("at most 64 labels supported");
    std::vector<LabelSet> row(d.size(), 0), col(d.size(), 0);
    LabelSet p = 0, q = 0;
    for (const auto& t : rel.tuples()) {
        row[t[0]] |= singleton(t[1]);
        col[t[1]] |= singleton(t[0]);
        p |= singleton(t[0]);
        q |= singleton(t[1]);
    }
    auto not_preserved = [&]() -> BinaryClass {
        auto r = preserves(ops::dual_discriminator(d), rel);
        if (r.preserved()) throw InvariantViolation("0/1/all shape analysis disagrees with the dual discriminator");
        return NotPreservedForm{std::move(*r.violation)};
    };
    if (rel.size() == static_cast<std::size_t>(label_count(p)) * label_count(q)) return ProductForm{p, q};

    std::vector<Label> full_rows;
    for_each_label(p, [&](Label a) {
        if (row[a] == q) full_rows.push_back(a);
    });
    if (full_rows.size() >= 2) return not_preserved();
    if (full_rows.size() == 1) {
        const Label u = full_rows.front();
        for (Label v : labels_of(q)) {
            if (col[v] != p) continue;
            TwoFanForm fan{u, p, v, q};
            if (reconstruct(fan, d) == rel) return fan;
        }
        return not_preserved();
    }
    BijectionForm bij{p, q, std::vector<Label>(d.size(), -1)};
    for (Label a : labels_of(p)) {
        if (label_count(row[a]) != 1) return not_preserved();
        bij.pi[a] = lowest_label(row[a]);
    }
    for (Label b : labels_of(q))
        if (label_count(col[b]) != 1) return not_preserved();
    return bij;
}

// ---------------------------------------------------------------------------
// Fixing and extraction

struct FixResult {
    std::map<VarId, Label> fixed;
};

/// Variables fixed by assigning a to u0: u0 itself, and every other variable v
/// (restricted to `active` when given) with R_{u0,v} ∩ ({a} x R_v) a singleton.
inline FixResult fixed_set(const BinaryInstance& bi, VarId u0, Label a, const std::vector<bool>* active = nullptr) {
    if (u0 < 0 || u0 >= bi.num_vars()) throw ContractError("unknown variable");
    if (!bi.domain().contains(a) || !has_label(bi.unary(u0), a))
        throw ContractError("label " + std::to_string(a) + " is not in R_" + bi.names()[u0]);
    FixResult out;
    out.fixed[u0] = a;
    for (VarId v = 0; v < bi.num_vars(); ++v) {
        if (v == u0 || (active && !(*active)[v])) continue;
        LabelSet partners = bi.row(u0, v, a) & bi.unary(v);
        if (label_count(partners) == 1) out.fixed[v] = lowest_label(partners);
    }
    return out;
}

/// Throws ContractError unless every pair relation is preserved by d.
inline void require_dual_discriminator_closed(const BinaryInstance& bi) {
    for (VarId u = 0; u < bi.num_vars(); ++u)
        for (VarId v = u + 1; v < bi.num_vars(); ++v) {
            if (!bi.is_materialized(u, v)) continue;
            if (!is_preserved(classify_01all(bi.pair_relation(u, v))))
                throw ContractError("relation between " + bi.names()[u] + " and " + bi.names()[v] +
                                    " is not preserved by the dual discriminator");
        }
}

/// Satisfying assignment of a nontrivial, (2,3)-minimal, d-closed instance:
/// repeatedly give the lowest-index open variable its lowest label and assign
/// every variable this fixes; the rest is again (2,3)-minimal.
inline Assignment solve_23minimal(const BinaryInstance& bi) {
    if (is_trivial(bi)) throw ContractError("instance is trivial (unsatisfiable)");
    require_dual_discriminator_closed(bi);
#ifndef NDEBUG
    if (auto why = check_23_minimal(bi)) throw ContractError("instance is not (2,3)-minimal: " + *why);
#endif
    const int n = bi.num_vars();
    Assignment out(n, -1);
    std::vector<bool> open(n, true);
    for (VarId v = 0; v < n; ++v) {
        if (!open[v]) continue;
        FixResult fix = fixed_set(bi, v, lowest_label(bi.unary(v)), &open);
        for (const auto& [u, label] : fix.fixed) {
            out[u] = label;
            open[u] = false;
        }
    }
    return out;
}

}  // namespace mccsp

#endif  // MCCSP_MINIMALITY_HPP
