#ifndef MCCSP_REDUCTIONS_HPP
#define MCCSP_REDUCTIONS_HPP

// Gadget constructions: the wildcard-XOR relation P_H and the Min UnCut
// reduction into it, hypergraph vertex cover as R_k, nearest codeword as
// 3-variable linear equations, first-power pp-interpretation reductions, the
// permutation-language classifier and random 0/1/all instance generation.

#include "mccsp/minimality.hpp"
#include "mccsp/polymorphism.hpp"

#include <random>

namespace mccsp {

// ---------------------------------------------------------------------------
// Relations

/// x != y, or x = y = 2, over {0,1,2}.
inline Relation relation_PH() {
    return Relation::from_predicate(2, Domain(3), [](const Tuple& t) { return t[0] != t[1] || t[0] == 2; });
}

/// {0,1}^k minus the all-zero tuple.
inline Relation relation_Rk(int k) {
    if (k < 1) throw ContractError("R_k needs k >= 1");
    return Relation::from_predicate(k, Domain(2), [](const Tuple& t) {
        return std::any_of(t.begin(), t.end(), [](Label a) { return a != 0; });
    });
}

inline bool is_prime(int p) {
    if (p < 2) return false;
    for (int q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

/// {(x,y,z) in F_p^3 : ax + by + cz = 0}.
inline Relation relation_gamma_p(int p, int a, int b, int c) {
    if (!is_prime(p)) throw ContractError(std::to_string(p) + " is not prime");
    auto mod = [p](long x) { return static_cast<int>(((x % p) + p) % p); };
    a = mod(a), b = mod(b), c = mod(c);
    return Relation::from_predicate(3, Domain(p), [&](const Tuple& t) {
        return mod(static_cast<long>(a) * t[0] + static_cast<long>(b) * t[1] + static_cast<long>(c) * t[2]) == 0;
    });
}

/// Every pair of coordinates differs in some tuple.
inline bool is_irreducible(const Relation& rel) {
    for (int i = 0; i < rel.arity(); ++i)
        for (int j = i + 1; j < rel.arity(); ++j)
            if (std::none_of(rel.tuples().begin(), rel.tuples().end(), [&](const Tuple& t) { return t[i] != t[j]; }))
                return false;
    return true;
}

/// Graph {(a, sigma(a))} of a permutation.
inline Relation permutation_relation(const std::vector<Label>& sigma) {
    Domain d(static_cast<int>(sigma.size()));
    std::vector<Tuple> ts;
    for (Label a = 0; a < d.size(); ++a) ts.push_back({a, sigma[a]});
    Relation r(2, d, std::move(ts));
    std::vector<Label> sorted = sigma;
    std::sort(sorted.begin(), sorted.end());
    for (Label a = 0; a < d.size(); ++a)
        if (sorted[a] != a) throw ContractError("not a permutation");
    return r;
}

/// All |D|! permutations in lexicographic order.
inline std::vector<std::vector<Label>> all_permutations(Domain d) {
    std::vector<Label> sigma(d.size());
    std::iota(sigma.begin(), sigma.end(), 0);
    std::vector<std::vector<Label>> out;
    do out.push_back(sigma);
    while (std::next_permutation(sigma.begin(), sigma.end()));
    return out;
}

// ---------------------------------------------------------------------------
// Min UnCut

struct WeightedEdge {
    int u, v;
    Rational weight;
};

struct WeightedGraph {
    int num_vertices = 0;
    std::vector<WeightedEdge> edges;

    void validate() const {
        if (num_vertices < 0) throw InputError("negative vertex count");
        for (const auto& e : edges) {
            if (e.u < 0 || e.v < 0 || e.u >= num_vertices || e.v >= num_vertices)
                throw InputError("edge endpoint out of range");
            if (e.u == e.v) throw InputError("self-loop on vertex " + std::to_string(e.u));
            if (e.weight < 0) throw InputError("negative edge weight");
        }
    }
};

/// Label-2 cost of a vertex variable: max(1, total edge weight). On inputs
/// whose weights sum to 1 this is the constant 1; in general a vertex at 2
/// must cost at least the total weight, or uncoloring one vertex can undercut
/// the best bipartition (K5 with unit weights: 1 + 2 < 4).
inline Rational minuncut_vertex_cost(const WeightedGraph& g) {
    Rational total = 0;
    for (const auto& e : g.edges) total += e.weight;
    return std::max(Rational(1), total);
}

/// Vertices v<i> cost minuncut_vertex_cost(g) at label 2; each edge e = {x,y}
/// becomes P_H(x, z<e>), P_H(z<e>, zp<e>), P_H(zp<e>, y) with both auxiliaries
/// costing w_e at label 2. All other costs are zero.
inline Instance minuncut_to_ph(const WeightedGraph& g) {
    g.validate();
    const ExtendedCost vertex_cost(minuncut_vertex_cost(g));
    InstanceBuilder b(Domain(3));
    b.relation("P_H", relation_PH());
    for (int i = 0; i < g.num_vertices; ++i) b.cost(b.variable("v" + std::to_string(i)), 2, vertex_cost);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto& edge = g.edges[e];
        VarId z = b.variable("z" + std::to_string(e));
        VarId zp = b.variable("zp" + std::to_string(e));
        b.cost(z, 2, ExtendedCost(edge.weight)).cost(zp, 2, ExtendedCost(edge.weight));
        VarId x = b.variable("v" + std::to_string(edge.u)), y = b.variable("v" + std::to_string(edge.v));
        b.constrain("P_H", {x, z}).constrain("P_H", {z, zp}).constrain("P_H", {zp, y});
    }
    return b.build();
}

// ---------------------------------------------------------------------------
// Hypergraph vertex cover

struct Hypergraph {
    int num_vertices = 0;
    int edge_size = 0;
    std::vector<std::vector<int>> edges;
    std::vector<Rational> weights;  ///< one per vertex; empty means unit weights

    void validate() const {
        if (edge_size < 2) throw InputError("hyperedges need at least 2 vertices");
        if (!weights.empty() && static_cast<int>(weights.size()) != num_vertices)
            throw InputError("one weight per vertex expected");
        for (const auto& w : weights)
            if (w < 0) throw InputError("negative vertex weight");
        for (const auto& e : edges) {
            if (static_cast<int>(e.size()) != edge_size) throw InputError("hyperedge size differs from k");
            std::vector<int> s = e;
            std::sort(s.begin(), s.end());
            if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw InputError("repeated vertex in hyperedge");
            for (int v : e)
                if (v < 0 || v >= num_vertices) throw InputError("hyperedge member out of range");
        }
    }
    Rational weight(int v) const { return weights.empty() ? Rational(1) : weights[v]; }
};

/// One R_k constraint per hyperedge; label 1 means "in the cover".
inline Instance hvc_to_mincost(const Hypergraph& h) {
    h.validate();
    InstanceBuilder b(Domain(2));
    const std::string rel = "R_" + std::to_string(h.edge_size);
    b.relation(rel, relation_Rk(h.edge_size));
    for (int i = 0; i < h.num_vertices; ++i) b.cost(b.variable("v" + std::to_string(i)), 1, ExtendedCost(h.weight(i)));
    for (const auto& e : h.edges) {
        std::vector<VarId> scope;
        for (int v : e) scope.push_back(b.variable("v" + std::to_string(v)));
        b.constrain(rel, scope);
    }
    return b.build();
}

// ---------------------------------------------------------------------------
// Nearest codeword

struct LinearCode {
    int p = 2;
    std::vector<std::vector<int>> matrix;  ///< m x n parity checks, entries mod p
    std::vector<int> target;               ///< x in F_p^n

    int num_columns() const { return static_cast<int>(target.size()); }

    void validate() const {
        if (!is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
        for (const auto& row : matrix)
            if (static_cast<int>(row.size()) != num_columns()) throw InputError("parity-check row has wrong length");
    }
};

/// Columns y0..y<n-1> cost 1 off the target label. Each parity row is split
/// left to right into 3-variable equations through zero-cost chain variables;
/// equations with fewer than three terms are padded with dummies whose only
/// finite label is 0. All relations have nonzero coefficients.
inline Instance ncw_to_gamma_p(const LinearCode& code) {
    code.validate();
    const int p = code.p;
    const Domain d(p);
    auto mod = [p](long x) { return static_cast<int>(((x % p) + p) % p); };
    InstanceBuilder b(d);
    std::vector<VarId> y;
    for (int i = 0; i < code.num_columns(); ++i) {
        VarId v = b.variable("y" + std::to_string(i));
        y.push_back(v);
        for (Label a = 0; a < p; ++a)
            if (a != mod(code.target[i])) b.cost(v, a, ExtendedCost(1));
    }
    int chains = 0, dummies = 0;
    auto relation_for = [&](int a, int bb, int c) {
        std::string name = "lin_" + std::to_string(a) + "_" + std::to_string(bb) + "_" + std::to_string(c);
        if (!b.has_relation(name)) b.relation(name, relation_gamma_p(p, a, bb, c));
        return name;
    };
    auto dummy = [&] {
        VarId z = b.variable("d" + std::to_string(dummies++));
        for (Label a = 1; a < p; ++a) b.cost(z, a, ExtendedCost::infinite());
        return z;
    };
    for (const auto& row : code.matrix) {
        std::vector<std::pair<int, VarId>> terms;
        for (int i = 0; i < code.num_columns(); ++i)
            if (mod(row[i]) != 0) terms.emplace_back(mod(row[i]), y[i]);
        while (terms.size() > 3) {
            VarId z = b.variable("c" + std::to_string(chains++));
            b.constrain(relation_for(terms[0].first, terms[1].first, 1), {terms[0].second, terms[1].second, z});
            terms.erase(terms.begin(), terms.begin() + 2);
            terms.insert(terms.begin(), {mod(-1), z});
        }
        if (terms.empty()) continue;
        while (terms.size() < 3) terms.emplace_back(1, dummy());
        b.constrain(relation_for(terms[0].first, terms[1].first, terms[2].first),
                    {terms[0].second, terms[1].second, terms[2].second});
    }
    return b.build();
}

// ---------------------------------------------------------------------------
// pp-definitions and first-power interpretations

/// Primitive-positive definition R(x_1..x_k) = exists y_1..y_m . body. Body
/// atoms refer to positions 0..k-1 (the x_i) and k..k+m-1 (the y_j). The
/// relation name "eq" denotes equality on the source domain.
struct PpGadget {
    struct Atom {
        std::string relation;
        std::vector<int> scope;
    };
    int arity = 0;
    int aux = 0;
    std::vector<Atom> body;
};

/// Label map f: F -> E with F a subset of D; map[b] = -1 for b outside F.
struct LabelMap {
    Domain source;
    Domain target;
    std::vector<Label> map;

    void validate() const {
        if (static_cast<int>(map.size()) != source.size()) throw ContractError("label map needs one entry per label");
        std::vector<bool> hit(target.size(), false);
        for (Label b : map) {
            if (b == -1) continue;
            if (!target.contains(b)) throw ContractError("label map leaves the target domain");
            hit[b] = true;
        }
        if (std::find(hit.begin(), hit.end(), false) != hit.end())
            throw ContractError("label map is not surjective");
    }
    static LabelMap identity(Domain d) {
        std::vector<Label> m(d.size());
        std::iota(m.begin(), m.end(), 0);
        return {d, d, m};
    }
};

namespace detail {

inline bool is_equality_relation(const Relation& r) { return r == relations::equality(r.domain()); }

inline bool language_has_equality(const ConstraintLanguage& lang) {
    return std::any_of(lang.relations.begin(), lang.relations.end(),
                       [](const auto& kv) { return is_equality_relation(kv.second); });
}

inline void check_gadget(const std::string& name, const PpGadget& g, const ConstraintLanguage& source) {
    for (const auto& atom : g.body) {
        int arity = 2;
        if (atom.relation == "eq") {
            if (!language_has_equality(source))
                throw ContractError("gadget for '" + name + "' uses equality but the source language lacks eq_D");
        } else {
            arity = source.at(atom.relation).arity();
        }
        if (static_cast<int>(atom.scope.size()) != arity)
            throw ContractError("gadget for '" + name + "' applies '" + atom.relation + "' with wrong arity");
        for (int pos : atom.scope)
            if (pos < 0 || pos >= g.arity + g.aux)
                throw ContractError("gadget for '" + name + "' refers to an unknown position");
    }
}

}  // namespace detail

/// Relation defined by a gadget over the source language, by enumerating all
/// assignments to x and y. Used to confirm a gadget defines f^{-1}(R).
inline Relation defined_relation(const PpGadget& g, const ConstraintLanguage& source,
                                 std::uint64_t budget = kDefaultBudget) {
    detail::check_gadget("<gadget>", g, source);
    const Domain d = source.domain;
    const int total = g.arity + g.aux;
    if (saturating_pow(d.size(), total) > budget) throw BudgetExceeded("gadget enumeration exceeds budget");
    const Relation eq = relations::equality(d);
    std::set<Tuple> out;
    Tuple x(total, 0), scratch;
    for (;;) {
        bool ok = true;
        for (const auto& atom : g.body) {
            scratch.clear();
            for (int pos : atom.scope) scratch.push_back(x[pos]);
            const Relation& r = atom.relation == "eq" ? eq : source.at(atom.relation);
            if (!r.contains(scratch)) {
                ok = false;
                break;
            }
        }
        if (ok) out.insert(Tuple(x.begin(), x.begin() + g.arity));
        int i = total - 1;
        while (i >= 0 && ++x[i] == d.size()) x[i--] = 0;
        if (i < 0) break;
    }
    return Relation(g.arity, d, std::vector<Tuple>(out.begin(), out.end()));
}

/// f^{-1}(R) restricted to F: the relation a gadget for R must define.
inline Relation preimage(const Relation& target_rel, const LabelMap& f) {
    return Relation::from_predicate(target_rel.arity(), f.source, [&](const Tuple& t) {
        Tuple img;
        for (Label b : t) {
            if (f.map[b] < 0) return false;
            img.push_back(f.map[b]);
        }
        return target_rel.contains(img);
    });
}

/// Rewrites an instance over the target language into one over the source
/// language: each constraint is replaced by its gadget body on the original
/// variables plus fresh zero-cost auxiliaries, and cost'(x, b) = cost(x, f(b))
/// for b in F, infinite otherwise.
inline Instance pp_apply(const Instance& target, const std::map<std::string, PpGadget>& gadgets, const LabelMap& f,
                         const ConstraintLanguage& source) {
    f.validate();
    if (!(f.target == target.domain()) || !(f.source == source.domain))
        throw ContractError("label map domains do not match the languages");
    for (const auto& c : target.constraints()) {
        auto it = gadgets.find(c.relation);
        if (it == gadgets.end()) throw ContractError("no gadget for relation '" + c.relation + "'");
        if (it->second.arity != target.relation(c.relation).arity())
            throw ContractError("gadget arity differs for '" + c.relation + "'");
        detail::check_gadget(c.relation, it->second, source);
    }
    InstanceBuilder b(source.domain);
    for (VarId v = 0; v < target.num_vars(); ++v) {
        VarId nv = b.variable(target.variables()[v]);
        for (Label s = 0; s < source.domain.size(); ++s)
            b.cost(nv, s, f.map[s] < 0 ? ExtendedCost::infinite() : target.costs().at(v, f.map[s]));
    }
    int fresh = 0;
    for (std::size_t ci = 0; ci < target.constraints().size(); ++ci) {
        const auto& c = target.constraints()[ci];
        const PpGadget& g = gadgets.at(c.relation);
        std::vector<VarId> slots(c.scope.begin(), c.scope.end());
        for (int j = 0; j < g.aux; ++j) {
            std::string name = "aux" + std::to_string(fresh++);
            while (target.find_variable(name)) name = "_" + name;
            slots.push_back(b.variable(name));
        }
        for (const auto& atom : g.body) {
            std::vector<VarId> scope;
            for (int pos : atom.scope) scope.push_back(slots[pos]);
            if (atom.relation == "eq")
                b.relation("eq", relations::equality(source.domain));
            else
                b.relation(atom.relation, source.at(atom.relation));
            b.constrain(atom.relation, std::move(scope));
        }
    }
    return b.build();
}

// ---------------------------------------------------------------------------
// Dichotomy for languages containing every permutation relation

enum class Approximability { Approximable, HardNoNU };

struct PermutationVerdict {
    Approximability verdict;
    /// 1-based fallback coordinate of the dual-discriminator variant that
    /// preserves the language, when approximable.
    std::optional<int> variant;
    /// Per variant, the violated relation and witness (empty when preserved).
    std::vector<std::optional<std::pair<std::string, PreservationWitness>>> violations;
    int ratio = 0;  ///< |D| when approximable
};

inline std::string permutation_name(const std::vector<Label>& sigma) {
    std::string s = "sigma=(";
    for (std::size_t i = 0; i < sigma.size(); ++i) s += (i ? "," : "") + std::to_string(sigma[i]);
    return s + ")";
}

/// Approximable iff one of the three majority-or-x_i operations preserves the
/// language. Requires every permutation relation to be present (under any name).
inline PermutationVerdict classify_permutation_language(const ConstraintLanguage& lang) {
    const Domain d = lang.domain;
    for (const auto& sigma : all_permutations(d)) {
        Relation r = permutation_relation(sigma);
        bool found = std::any_of(lang.relations.begin(), lang.relations.end(),
                                 [&](const auto& kv) { return kv.second == r; });
        if (!found) throw ContractError("language lacks the permutation relation " + permutation_name(sigma));
    }
    PermutationVerdict out{Approximability::HardNoNU, std::nullopt, {}, 0};
    for (int i = 1; i <= 3; ++i) {
        auto res = preserves_language(ops::dual_discriminator_variant(d, i), lang);
        if (res.preserved() && !out.variant) {
            out.verdict = Approximability::Approximable;
            out.variant = i;
            out.ratio = d.size();
        }
        out.violations.push_back(std::move(res.violation));
    }
    return out;
}

/// Adds all permutation relations to a language as "perm_<images>".
inline void add_permutation_relations(ConstraintLanguage& lang) {
    for (const auto& sigma : all_permutations(lang.domain)) {
        std::string name = "perm";
        for (Label a : sigma) name += "_" + std::to_string(a);
        lang.add(name, permutation_relation(sigma));
    }
}

// ---------------------------------------------------------------------------
// Random 0/1/all instances

struct RandomSpec {
    std::uint64_t seed = 0;
    int domain_size = 2;
    int num_vars = 4;
    double density = 0.5;  ///< probability that a pair is constrained
    int max_cost = 10;     ///< costs are multiples of 1/4 in [0, max_cost]
    /// Draw a hidden assignment first and make every relation contain its
    /// pair, so the instance is satisfiable.
    bool planted = false;
};

namespace detail {

inline LabelSet random_nonempty_subset(std::mt19937_64& rng, int d) {
    std::uniform_int_distribution<std::uint64_t> pick(1, (std::uint64_t{1} << d) - 1);
    return pick(rng);
}

/// A relation of one of the three 0/1/all shapes chosen uniformly. With a
/// planted pair (a, b), the relation is drawn so that it contains (a, b).
inline Relation random_01all_relation(std::mt19937_64& rng, Domain d,
                                      std::optional<std::pair<Label, Label>> planted = std::nullopt) {
    auto subset = [&](std::optional<Label> must) {
        LabelSet s = random_nonempty_subset(rng, d.size());
        return must ? s | singleton(*must) : s;
    };
    auto member = [&](LabelSet s) {
        auto ls = labels_of(s);
        return ls[std::uniform_int_distribution<std::size_t>(0, ls.size() - 1)(rng)];
    };
    const std::optional<Label> pa = planted ? std::optional<Label>(planted->first) : std::nullopt;
    const std::optional<Label> pb = planted ? std::optional<Label>(planted->second) : std::nullopt;
    std::uniform_int_distribution<int> kind(0, 2);
    std::vector<Tuple> ts;
    switch (kind(rng)) {
        case 0:
            ts = reconstruct(ProductForm{subset(pa), subset(pb)}, d).tuples();
            break;
        case 1: {
            // ({u} x Q) u (P x {v}); the planted pair enters through one arm.
            const bool via_u = std::bernoulli_distribution(0.5)(rng);
            LabelSet p = subset(via_u ? std::nullopt : pa), q = subset(via_u ? pb : std::nullopt);
            Label u = via_u && pa ? *pa : member(p);
            Label v = !via_u && pb ? *pb : member(q);
            ts = reconstruct(TwoFanForm{u, p | singleton(u), v, q | singleton(v)}, d).tuples();
            break;
        }
        default: {
            auto pl = labels_of(subset(pa));
            std::vector<Label> image(d.size());
            std::iota(image.begin(), image.end(), 0);
            std::shuffle(image.begin(), image.end(), rng);
            if (planted) {
                auto at = std::find(image.begin(), image.end(), *pb);
                std::iter_swap(at, image.begin() + (std::find(pl.begin(), pl.end(), *pa) - pl.begin()));
            }
            for (std::size_t i = 0; i < pl.size(); ++i) ts.push_back({pl[i], image[i]});
            break;
        }
    }
    return Relation(2, d, std::move(ts));
}

}  // namespace detail

/// Each pair u < v is constrained with probability `density` by a relation
/// drawn from the three 0/1/all shapes with equal probability. Deterministic
/// in the seed (and in `planted`).
inline Instance gen_random_01all(const RandomSpec& spec) {
    if (spec.domain_size < 1 || spec.domain_size > 16 || spec.num_vars < 0 || spec.density < 0 || spec.density > 1 ||
        spec.max_cost < 0)
        throw ContractError("random instance parameters out of range");
    std::mt19937_64 rng(spec.seed);
    const Domain d(spec.domain_size);
    InstanceBuilder b(d);
    std::uniform_int_distribution<int> quarter(0, 4 * spec.max_cost);
    for (int i = 0; i < spec.num_vars; ++i) {
        VarId v = b.variable("x" + std::to_string(i));
        for (Label a = 0; a < d.size(); ++a) b.cost(v, a, ExtendedCost(Rational(quarter(rng), 4)));
    }
    std::vector<Label> hidden(spec.num_vars);
    if (spec.planted)
        for (auto& a : hidden) a = std::uniform_int_distribution<Label>(0, d.size() - 1)(rng);
    std::bernoulli_distribution coin(spec.density);
    int k = 0;
    for (int u = 0; u < spec.num_vars; ++u)
        for (int v = u + 1; v < spec.num_vars; ++v) {
            if (!coin(rng)) continue;
            std::string name = "r" + std::to_string(k++);
            auto pair = spec.planted ? std::optional(std::pair(hidden[u], hidden[v])) : std::nullopt;
            b.relation(name, detail::random_01all_relation(rng, d, pair));
            b.constrain(name, {u, v});
        }
    return b.build();
}

}  // namespace mccsp

#endif  // MCCSP_REDUCTIONS_HPP
