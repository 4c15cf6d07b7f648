#ifndef MCCSP_TESTS_ORACLES_HPP
#define MCCSP_TESTS_ORACLES_HPP

// Reference computations for tests. None of these call the library's search,
// minimality, classification or LP code; they enumerate directly from
// definitions so that agreement is evidence rather than tautology.

#include "mccsp/mccsp.hpp"

#include <functional>
#include <random>

namespace oracle {

using mccsp::Assignment;
using mccsp::ExtendedCost;
using mccsp::Label;
using mccsp::Rational;
using mccsp::Tuple;

/// Calls fn on every vector in {0..base-1}^len, last position fastest.
inline void odometer(int len, int base, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> x(len, 0);
    for (;;) {
        fn(x);
        int i = len - 1;
        while (i >= 0 && ++x[i] == base) x[i--] = 0;
        if (i < 0) return;
    }
}

inline bool satisfies(const mccsp::Instance& inst, const Assignment& a) {
    for (const auto& c : inst.constraints()) {
        const auto& rel = inst.relation(c.relation);
        Tuple t;
        for (int v : c.scope) t.push_back(a[v]);
        if (std::find(rel.tuples().begin(), rel.tuples().end(), t) == rel.tuples().end()) return false;
    }
    return true;
}

inline ExtendedCost cost(const mccsp::Instance& inst, const Assignment& a) {
    ExtendedCost total(0);
    for (int v = 0; v < inst.num_vars(); ++v) total = total + inst.costs().at(v, a[v]);
    return total;
}

inline std::vector<Assignment> satisfying(const mccsp::Instance& inst) {
    std::vector<Assignment> out;
    odometer(inst.num_vars(), inst.domain().size(), [&](const std::vector<int>& a) {
        if (satisfies(inst, a)) out.push_back(a);
    });
    return out;
}

struct Optimum {
    ExtendedCost value;
    std::vector<Assignment> argmins;  ///< all optimal assignments
};

/// nullopt when no satisfying assignment has finite cost.
inline std::optional<Optimum> optimum(const mccsp::Instance& inst) {
    std::optional<Optimum> best;
    for (const auto& a : satisfying(inst)) {
        ExtendedCost c = cost(inst, a);
        if (c.is_infinite()) continue;
        if (!best || c < best->value) best = Optimum{c, {a}};
        else if (c == best->value) best->argmins.push_back(a);
    }
    return best;
}

/// Exact optimum by conditioning: enumerate labels of the variables in
/// `fixed`; the remaining variables fall into connected components of the
/// constraint graph with `fixed` removed, and each component is enumerated on
/// its own. Sound for any instance; fast when components are small.
/// `accept` filters the labelings of `fixed` that are considered.
inline std::optional<ExtendedCost> optimum_conditioned(
    const mccsp::Instance& inst, const std::vector<int>& fixed,
    const std::function<bool(const std::vector<int>&)>& accept = [](const std::vector<int>&) { return true; }) {
    const int n = inst.num_vars(), dn = inst.domain().size();
    std::vector<bool> is_fixed(n, false);
    for (int v : fixed) is_fixed[v] = true;
    std::vector<int> comp(n, -1);
    std::vector<std::vector<int>> members;
    for (int s = 0; s < n; ++s) {
        if (is_fixed[s] || comp[s] >= 0) continue;
        const int id = static_cast<int>(members.size());
        members.push_back({});
        std::vector<int> stack{s};
        comp[s] = id;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            members[id].push_back(v);
            for (const auto& c : inst.constraints()) {
                if (std::find(c.scope.begin(), c.scope.end(), v) == c.scope.end()) continue;
                for (int w : c.scope)
                    if (!is_fixed[w] && comp[w] < 0) {
                        comp[w] = id;
                        stack.push_back(w);
                    }
            }
        }
    }
    // Constraints grouped by the component they touch (-1: only fixed vars).
    std::vector<std::vector<const mccsp::Constraint*>> by_comp(members.size() + 1);
    for (const auto& c : inst.constraints()) {
        int id = -1;
        for (int w : c.scope)
            if (!is_fixed[w]) id = comp[w];
        by_comp[id + 1].push_back(&c);
    }
    auto ok = [&](const mccsp::Constraint* c, const Assignment& a) {
        Tuple t;
        for (int v : c->scope) t.push_back(a[v]);
        const auto& ts = inst.relation(c->relation).tuples();
        return std::find(ts.begin(), ts.end(), t) != ts.end();
    };
    std::optional<ExtendedCost> best;
    Assignment a(n, 0);
    odometer(static_cast<int>(fixed.size()), dn, [&](const std::vector<int>& fx) {
        if (!accept(fx)) return;
        for (std::size_t i = 0; i < fixed.size(); ++i) a[fixed[i]] = fx[i];
        for (const auto* c : by_comp[0])
            if (!ok(c, a)) return;
        ExtendedCost total(0);
        for (int v : fixed) total = total + inst.costs().at(v, a[v]);
        for (std::size_t id = 0; id < members.size(); ++id) {
            std::optional<ExtendedCost> part;
            const auto& vs = members[id];
            odometer(static_cast<int>(vs.size()), dn, [&](const std::vector<int>& lab) {
                for (std::size_t i = 0; i < vs.size(); ++i) a[vs[i]] = lab[i];
                for (const auto* c : by_comp[id + 1])
                    if (!ok(c, a)) return;
                ExtendedCost cst(0);
                for (int v : vs) cst = cst + inst.costs().at(v, a[v]);
                if (!part || cst < *part) part = cst;
            });
            if (!part) return;
            total = total + *part;
        }
        if (total.is_infinite()) return;
        if (!best || total < *best) best = total;
    });
    return best;
}

/// Satisfying assignments of a binary instance, read through allows/unary.
inline std::vector<Assignment> satisfying(const mccsp::BinaryInstance& bi) {
    std::vector<Assignment> out;
    const int n = bi.num_vars();
    odometer(n, bi.domain().size(), [&](const std::vector<int>& a) {
        for (int u = 0; u < n; ++u)
            if (!((bi.unary(u) >> a[u]) & 1U)) return;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (!bi.allows(u, v, a[u], a[v])) return;
        out.push_back(a);
    });
    return out;
}

inline std::optional<Rational> optimum(const mccsp::BinaryInstance& bi) {
    std::optional<Rational> best;
    for (const auto& a : satisfying(bi)) {
        Rational c = 0;
        bool finite = true;
        for (int v = 0; v < bi.num_vars(); ++v) {
            const auto& x = bi.costs().at(v, a[v]);
            if (x.is_infinite()) finite = false;
            else c += x.value();
        }
        if (finite && (!best || c < *best)) best = c;
    }
    return best;
}

/// Dual discriminator straight from its definition.
inline Label d(Label x, Label y, Label z) {
    if (x == y || x == z) return x;
    if (y == z) return y;
    return x;
}

/// d-closure of a relation of any arity, checked over all row triples.
inline bool d_preserves(const mccsp::Relation& rel) {
    const auto& ts = rel.tuples();
    for (const auto& a : ts)
        for (const auto& b : ts)
            for (const auto& c : ts) {
                Tuple img(a.size());
                for (std::size_t i = 0; i < a.size(); ++i) img[i] = d(a[i], b[i], c[i]);
                if (std::find(ts.begin(), ts.end(), img) == ts.end()) return false;
            }
    return true;
}

/// (2,3)-minimality checked literally on a binary instance: (a) R_{u,v} subset
/// of R_u x R_v, (b) projections equal R_u, (c) every pair extends to every w.
inline bool is_23_minimal(const mccsp::BinaryInstance& bi) {
    const int n = bi.num_vars(), dn = bi.domain().size();
    auto in_u = [&](int u, int a) { return ((bi.unary(u) >> a) & 1U) != 0; };
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            if (u == v) continue;
            for (int a = 0; a < dn; ++a) {
                bool has_partner = false;
                for (int b = 0; b < dn; ++b) {
                    if (!bi.allows(u, v, a, b)) continue;
                    if (!in_u(u, a) || !in_u(v, b)) return false;
                    has_partner = true;
                    for (int w = 0; w < n; ++w) {
                        if (w == u || w == v) continue;
                        bool ext = false;
                        for (int c = 0; c < dn && !ext; ++c)
                            ext = in_u(w, c) && bi.allows(u, w, a, c) && bi.allows(v, w, b, c);
                        if (!ext) return false;
                    }
                }
                if (in_u(u, a) && !has_partner) return false;
            }
        }
    return true;
}

/// Minimum weight of an edge set whose removal leaves the graph bipartite,
/// by enumerating 2-colourings.
inline Rational min_uncut(const mccsp::WeightedGraph& g) {
    std::optional<Rational> best;
    odometer(g.num_vertices, 2, [&](const std::vector<int>& col) {
        Rational w = 0;
        for (const auto& e : g.edges)
            if (col[e.u] == col[e.v]) w += e.weight;
        if (!best || w < *best) best = w;
    });
    return best.value_or(Rational(0));
}

inline Rational min_vertex_cover(const mccsp::Hypergraph& h) {
    std::optional<Rational> best;
    odometer(h.num_vertices, 2, [&](const std::vector<int>& in) {
        for (const auto& e : h.edges)
            if (std::none_of(e.begin(), e.end(), [&](int v) { return in[v] == 1; })) return;
        Rational w = 0;
        for (int v = 0; v < h.num_vertices; ++v)
            if (in[v]) w += h.weight(v);
        if (!best || w < *best) best = w;
    });
    return *best;
}

inline int nearest_codeword_distance(const mccsp::LinearCode& code) {
    int best = code.num_columns() + 1;
    odometer(code.num_columns(), code.p, [&](const std::vector<int>& y) {
        for (const auto& row : code.matrix) {
            long s = 0;
            for (std::size_t i = 0; i < row.size(); ++i) s += static_cast<long>(row[i]) * y[i];
            if (s % code.p != 0) return;
        }
        int dist = 0;
        for (int i = 0; i < code.num_columns(); ++i) dist += y[i] != code.target[i];
        best = std::min(best, dist);
    });
    return best;
}

/// All conservative majority operations on {0,1,2}: the 6 rows with distinct
/// arguments each pick one of their 3 arguments (3^6 = 729 tables).
/// Returns true if any of them preserves every relation.
inline bool some_conservative_majority_preserves(const std::vector<mccsp::Relation>& rels) {
    std::vector<Tuple> distinct;
    odometer(3, 3, [&](const std::vector<int>& x) {
        if (x[0] != x[1] && x[0] != x[2] && x[1] != x[2]) distinct.push_back(x);
    });
    bool found = false;
    odometer(6, 3, [&](const std::vector<int>& choice) {
        if (found) return;
        auto op = [&](Label x, Label y, Label z) -> Label {
            if (x == y || x == z) return x;
            if (y == z) return y;
            for (std::size_t r = 0; r < distinct.size(); ++r)
                if (distinct[r] == Tuple{x, y, z}) return distinct[r][choice[r]];
            return -1;
        };
        for (const auto& rel : rels) {
            const auto& ts = rel.tuples();
            for (const auto& a : ts)
                for (const auto& b : ts)
                    for (const auto& c : ts) {
                        Tuple img(a.size());
                        for (std::size_t i = 0; i < a.size(); ++i) img[i] = op(a[i], b[i], c[i]);
                        if (!std::binary_search(ts.begin(), ts.end(), img)) return;
                    }
        }
        found = true;
    });
    return found;
}

/// Exact Gaussian elimination: solves M y = rhs for square nonsingular M.
inline std::optional<std::vector<Rational>> solve_linear(std::vector<std::vector<Rational>> m, std::vector<Rational> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(m[piv], m[col]);
        std::swap(rhs[piv], rhs[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col] == 0) continue;
            Rational f = m[r][col] / m[col][col];
            for (std::size_t k = col; k < n; ++k) m[r][k] -= f * m[col][k];
            rhs[r] -= f * rhs[col];
        }
    }
    for (std::size_t i = 0; i < n; ++i) rhs[i] /= m[i][i];
    return rhs;
}

/// Certifies an optimal LP solution by recomputing the duals from the final
/// basis: y solves B^T y = c_B over the live rows, then every reduced cost
/// c_j - A_j^T y must be non-negative, and b^T y must equal the value.
/// Basis columns past the original variables are artificial slack columns
/// with unit coefficient in their own row and zero cost.
inline bool certify_optimal(const mccsp::LpProblem& lp, const mccsp::LpSolution& sol) {
    const std::size_t nv = lp.names.size();
    const std::size_t k = sol.basis_rows.size();
    if (sol.basis.size() != k) return false;
    auto coef = [&](std::size_t row, std::size_t col) -> Rational {
        if (col >= nv) return col - nv == row ? Rational(1) : Rational(0);
        Rational s = 0;
        for (const auto& [j, c] : lp.rows[row].terms)
            if (static_cast<std::size_t>(j) == col) s += c;
        return s;
    };
    auto cost_of = [&](std::size_t col) { return col < nv ? lp.objective[col] : Rational(0); };
    std::vector<std::vector<Rational>> bt(k, std::vector<Rational>(k));
    std::vector<Rational> cb(k);
    for (std::size_t i = 0; i < k; ++i) {
        cb[i] = cost_of(sol.basis[i]);
        for (std::size_t r = 0; r < k; ++r) bt[i][r] = coef(sol.basis_rows[r], sol.basis[i]);
    }
    auto y = solve_linear(bt, cb);
    if (!y) return false;
    for (std::size_t j = 0; j < nv; ++j) {
        Rational reduced = cost_of(j);
        for (std::size_t r = 0; r < k; ++r) reduced -= (*y)[r] * coef(sol.basis_rows[r], j);
        if (reduced < 0) return false;
    }
    Rational dual = 0;
    for (std::size_t r = 0; r < k; ++r) dual += (*y)[r] * lp.rows[sol.basis_rows[r]].rhs;
    if (dual != sol.value) return false;
    // Rows dropped as redundant must be implied: satisfied by the point.
    return lp.is_feasible(sol.point) && lp.value_of(sol.point) == sol.value;
}

}  // namespace oracle

#endif  // MCCSP_TESTS_ORACLES_HPP
