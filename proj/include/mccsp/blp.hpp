#ifndef MCCSP_BLP_HPP
#define MCCSP_BLP_HPP

// Basic LP relaxation, an exact rational simplex, and threshold rounding.

#include "mccsp/minimality.hpp"

#include <ostream>

namespace mccsp {

// ---------------------------------------------------------------------------
// Linear programs: minimize c.x subject to rows (equalities) and x >= 0.

struct LinearRow {
    std::vector<std::pair<int, Rational>> terms;
    Rational rhs;
};

struct LpProblem {
    std::vector<std::string> names;
    std::vector<Rational> objective;
    std::vector<LinearRow> rows;
    /// Set when some constraint has no allowed tuple; the LP is infeasible as built.
    bool trivially_infeasible = false;

    int num_vars() const { return static_cast<int>(names.size()); }

    int add_var(std::string name, Rational cost) {
        names.push_back(std::move(name));
        objective.push_back(std::move(cost));
        return num_vars() - 1;
    }

    Rational value_of(const std::vector<Rational>& x) const {
        Rational v = 0;
        for (int j = 0; j < num_vars(); ++j) v += objective[j] * x.at(j);
        return v;
    }

    bool is_feasible(const std::vector<Rational>& x) const {
        if (static_cast<int>(x.size()) != num_vars() || trivially_infeasible) return false;
        for (const auto& xi : x)
            if (xi < 0) return false;
        for (const auto& row : rows) {
            Rational lhs = 0;
            for (const auto& [j, c] : row.terms) lhs += c * x[j];
            if (lhs != row.rhs) return false;
        }
        return true;
    }

    /// Plain-text dump: a header, the objective, then one equality per line.
    ///   vars <n>
    ///   rows <m>
    ///   min: <c> <name> + ...
    ///   r<i>: <coef> <name> + ... = <rhs>
    /// Coefficients are exact rationals; zero objective terms are omitted.
    void write(std::ostream& os) const {
        os << "vars " << num_vars() << "\nrows " << rows.size() << "\n";
        if (trivially_infeasible) os << "infeasible\n";
        os << "min:";
        bool first = true;
        for (int j = 0; j < num_vars(); ++j) {
            if (objective[j] == 0) continue;
            os << (first ? " " : " + ") << to_string(objective[j]) << " " << names[j];
            first = false;
        }
        if (first) os << " 0";
        os << "\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            os << "r" << i << ":";
            for (std::size_t k = 0; k < rows[i].terms.size(); ++k)
                os << (k == 0 ? " " : " + ") << to_string(rows[i].terms[k].second) << " "
                   << names[rows[i].terms[k].first];
            os << " = " << to_string(rows[i].rhs) << "\n";
        }
    }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Rational value;
    std::vector<Rational> point;
    /// Final basis: basis[i] is the column basic in row basis_rows[i]. Rows
    /// found redundant during phase 1 are absent from basis_rows.
    std::vector<int> basis;
    std::vector<int> basis_rows;
    int pivots = 0;
};

namespace detail {

/// Dense tableau with a right-hand-side column; pivots skip zero entries.
class Tableau {
public:
    Tableau(int rows, int cols) : m_(rows), n_(cols), cells_(rows, std::vector<Rational>(cols + 1)) {}

    Rational& at(int i, int j) { return cells_[i][j]; }
    const Rational& at(int i, int j) const { return cells_[i][j]; }
    Rational& rhs(int i) { return cells_[i][n_]; }
    int rows() const { return m_; }
    int cols() const { return n_; }

    /// Pivot on (r, c); also updates the objective row `obj` (length cols+1).
    void pivot(int r, int c, std::vector<Rational>& obj) {
        auto& pr = cells_[r];
        const Rational inv = 1 / pr[c];
        std::vector<int> nz;
        for (int j = 0; j <= n_; ++j)
            if (sgn(pr[j]) != 0) {
                pr[j] *= inv;
                nz.push_back(j);
            }
        auto eliminate = [&](std::vector<Rational>& row) {
            if (sgn(row[c]) == 0) return;
            const Rational f = row[c];
            for (int j : nz) row[j] -= f * pr[j];
        };
        for (int i = 0; i < m_; ++i)
            if (i != r) eliminate(cells_[i]);
        eliminate(obj);
    }

private:
    int m_, n_;
    std::vector<std::vector<Rational>> cells_;
};

/// Bland's rule: lowest-index entering column with negative reduced cost;
/// ratio ties broken by lowest-index basic column. `allowed` masks columns
/// that may enter. Returns false when unbounded.
inline bool run_simplex(Tableau& t, std::vector<Rational>& obj, std::vector<int>& basis,
                        const std::vector<bool>& allowed, const std::vector<bool>& live_row, int& pivots) {
    for (;;) {
        int enter = -1;
        for (int j = 0; j < t.cols(); ++j)
            if (allowed[j] && sgn(obj[j]) < 0) {
                enter = j;
                break;
            }
        if (enter < 0) return true;
        int leave = -1;
        Rational best;
        for (int i = 0; i < t.rows(); ++i) {
            if (!live_row[i] || sgn(t.at(i, enter)) <= 0) continue;
            Rational ratio = t.rhs(i) / t.at(i, enter);
            if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave < 0) return false;
        t.pivot(leave, enter, obj);
        basis[leave] = enter;
        ++pivots;
    }
}

}  // namespace detail

/// Two-phase exact simplex with Bland's anti-cycling rule.
inline LpSolution lp_solve(const LpProblem& lp) {
    LpSolution sol;
    if (lp.trivially_infeasible) return sol;
    const int n = lp.num_vars();
    const int m = static_cast<int>(lp.rows.size());
    const int cols = n + m;  // originals, then one artificial per row
    detail::Tableau t(m, cols);
    for (int i = 0; i < m; ++i) {
        const bool flip = lp.rows[i].rhs < 0;
        for (const auto& [j, c] : lp.rows[i].terms) t.at(i, j) += flip ? Rational(-c) : c;
        t.rhs(i) = flip ? Rational(-lp.rows[i].rhs) : lp.rows[i].rhs;
        t.at(i, n + i) = 1;
    }
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;
    std::vector<bool> live(m, true);

    // Phase 1: minimize the sum of artificials.
    std::vector<Rational> obj(cols + 1);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) obj[j] -= t.at(i, j);
        obj[cols] -= t.rhs(i);
    }
    std::vector<bool> originals(cols, false);
    std::fill(originals.begin(), originals.begin() + n, true);
    detail::run_simplex(t, obj, basis, originals, live, sol.pivots);
    if (sgn(obj[cols]) != 0) return sol;

    // Drive remaining artificials out of the basis; rows without a usable
    // original column are redundant.
    for (int i = 0; i < m; ++i) {
        if (basis[i] < n) continue;
        int col = -1;
        for (int j = 0; j < n && col < 0; ++j)
            if (sgn(t.at(i, j)) != 0) col = j;
        if (col < 0) {
            live[i] = false;
            continue;
        }
        t.pivot(i, col, obj);
        basis[i] = col;
        ++sol.pivots;
    }

    // Phase 2.
    std::fill(obj.begin(), obj.end(), Rational(0));
    for (int j = 0; j < n; ++j) obj[j] = lp.objective[j];
    for (int i = 0; i < m; ++i) {
        if (!live[i]) continue;
        const Rational cb = lp.objective[basis[i]];
        if (sgn(cb) == 0) continue;
        for (int j = 0; j <= cols; ++j)
            if (sgn(t.at(i, j)) != 0) obj[j] -= cb * t.at(i, j);
    }
    if (!detail::run_simplex(t, obj, basis, originals, live, sol.pivots)) {
        sol.status = LpStatus::Unbounded;
        return sol;
    }

    sol.status = LpStatus::Optimal;
    sol.point.assign(n, Rational(0));
    for (int i = 0; i < m; ++i) {
        if (!live[i]) continue;
        sol.point[basis[i]] = t.rhs(i);
        sol.basis.push_back(basis[i]);
        sol.basis_rows.push_back(i);
    }
    sol.value = lp.value_of(sol.point);
    return sol;
}

// ---------------------------------------------------------------------------
// Basic LP relaxation

/// LP plus the map back to the CSP: label_var[v][a] is the column of p_{v,a}
/// (or -1 when the label is excluded), and each block lists the columns of
/// p_{C,x} for the tuples of one constraint.
struct BlpModel {
    LpProblem lp;
    std::vector<std::vector<int>> label_var;
    struct Block {
        std::vector<VarId> scope;
        std::vector<Tuple> tuples;
        std::vector<int> columns;
    };
    std::vector<Block> blocks;
};

namespace detail {

inline void add_block(BlpModel& m, const std::string& tag, const std::vector<VarId>& scope,
                      std::vector<Tuple> tuples, Domain d) {
    if (tuples.empty()) {
        m.lp.trivially_infeasible = true;
        return;
    }
    BlpModel::Block b{scope, std::move(tuples), {}};
    LinearRow one{{}, Rational(1)};
    for (const auto& x : b.tuples) {
        std::string name = "p[" + tag + ",(";
        for (std::size_t i = 0; i < x.size(); ++i) name += (i ? "," : "") + std::to_string(x[i]);
        name += ")]";
        int col = m.lp.add_var(std::move(name), Rational(0));
        b.columns.push_back(col);
        one.terms.emplace_back(col, Rational(1));
    }
    m.lp.rows.push_back(std::move(one));
    for (std::size_t pos = 0; pos < scope.size(); ++pos) {
        const VarId v = scope[pos];
        for (Label a = 0; a < d.size(); ++a) {
            LinearRow marginal{{}, Rational(0)};
            for (std::size_t k = 0; k < b.tuples.size(); ++k)
                if (b.tuples[k][pos] == a) marginal.terms.emplace_back(b.columns[k], Rational(1));
            const int pv = m.label_var[v][a];
            if (pv >= 0) marginal.terms.emplace_back(pv, Rational(-1));
            if (marginal.terms.empty()) continue;
            m.lp.rows.push_back(std::move(marginal));
        }
    }
    m.blocks.push_back(std::move(b));
}

inline void add_label_vars(BlpModel& m, const std::vector<std::string>& names, Domain d,
                           const std::function<bool(VarId, Label)>& keep, const CostMatrix& costs) {
    m.label_var.assign(names.size(), std::vector<int>(d.size(), -1));
    for (VarId v = 0; v < static_cast<VarId>(names.size()); ++v) {
        LinearRow one{{}, Rational(1)};
        for (Label a = 0; a < d.size(); ++a) {
            if (!keep(v, a)) continue;
            int col = m.lp.add_var("p[" + names[v] + "," + std::to_string(a) + "]", costs.at(v, a).value());
            m.label_var[v][a] = col;
            one.terms.emplace_back(col, Rational(1));
        }
        if (one.terms.empty()) m.lp.trivially_infeasible = true;
        m.lp.rows.push_back(std::move(one));
    }
}

}  // namespace detail

/// BLP of an ordinary instance: one p_{v,a} per finite-cost label (infinite
/// labels are fixed at zero by omission), one p_{C,x} per tuple of each
/// constraint, and marginal rows for every scope position and label.
inline BlpModel build_blp(const Instance& inst) {
    BlpModel m;
    const Domain d = inst.domain();
    detail::add_label_vars(
        m, inst.variables(), d, [&](VarId v, Label a) { return inst.costs().at(v, a).is_finite(); }, inst.costs());
    for (std::size_t ci = 0; ci < inst.constraints().size(); ++ci) {
        const auto& c = inst.constraints()[ci];
        detail::add_block(m, "C" + std::to_string(ci), c.scope, inst.relation(c.relation).tuples(), d);
    }
    return m;
}

/// BLP of a binary instance: p_{v,a} for a in R_v, and one constraint per pair
/// u < v whose relation is not already the product R_u x R_v.
inline BlpModel build_blp(const BinaryInstance& bi) {
    BlpModel m;
    const Domain d = bi.domain();
    for (VarId v = 0; v < bi.num_vars(); ++v)
        for_each_label(bi.unary(v), [&](Label a) {
            if (bi.costs().at(v, a).is_infinite())
                throw ContractError("infinite-cost label left in R_" + bi.names()[v]);
        });
    detail::add_label_vars(
        m, bi.names(), d, [&](VarId v, Label a) { return has_label(bi.unary(v), a); }, bi.costs());
    for (VarId u = 0; u < bi.num_vars(); ++u)
        for (VarId v = u + 1; v < bi.num_vars(); ++v) {
            std::vector<Tuple> ts;
            bool product = true;
            for (Label a = 0; a < d.size(); ++a)
                for (Label b = 0; b < d.size(); ++b) {
                    const bool in = bi.allows(u, v, a, b);
                    if (in != (has_label(bi.unary(u), a) && has_label(bi.unary(v), b))) product = false;
                    if (in) ts.push_back({a, b});
                }
            if (product) continue;
            detail::add_block(m, bi.names()[u] + "," + bi.names()[v], {u, v}, std::move(ts), d);
        }
    return m;
}

/// The LP point of an integral assignment: p_{v,A(v)} = 1, p_{C,A|C} = 1.
/// Returns nullopt when the assignment uses an excluded label or violates a block.
inline std::optional<std::vector<Rational>> indicator_point(const BlpModel& m, const Assignment& a) {
    std::vector<Rational> x(m.lp.num_vars());
    for (VarId v = 0; v < static_cast<VarId>(m.label_var.size()); ++v) {
        const int col = m.label_var[v].at(a.at(v));
        if (col < 0) return std::nullopt;
        x[col] = 1;
    }
    for (const auto& b : m.blocks) {
        Tuple proj;
        for (VarId v : b.scope) proj.push_back(a[v]);
        auto it = std::find(b.tuples.begin(), b.tuples.end(), proj);
        if (it == b.tuples.end()) return std::nullopt;
        x[b.columns[it - b.tuples.begin()]] = 1;
    }
    return x;
}

/// p_{v,a} values of an LP point (zero for excluded labels).
inline std::vector<std::vector<Rational>> label_marginals(const BlpModel& m, const std::vector<Rational>& point) {
    std::vector<std::vector<Rational>> p(m.label_var.size());
    for (std::size_t v = 0; v < m.label_var.size(); ++v) {
        p[v].assign(m.label_var[v].size(), Rational(0));
        for (std::size_t a = 0; a < m.label_var[v].size(); ++a)
            if (m.label_var[v][a] >= 0) p[v][a] = point.at(m.label_var[v][a]);
    }
    return p;
}

// ---------------------------------------------------------------------------
// Threshold rounding

struct LpRoundingResult {
    Assignment assignment;
    Rational lp_value;
    std::vector<std::vector<Rational>> marginals;  ///< p_{v,a}
    BinaryInstance rounded;                        ///< I'
    int pivots = 0;
};

/// I' of the rounding step: R'_v = {a in R_v : p_{v,a} >= 1/|D|}, with every
/// pair relation intersected with R'_u x R'_v. Throws InvariantViolation when
/// some R'_v is empty or I' is not (2,3)-minimal.
inline BinaryInstance round_at_threshold(const BinaryInstance& bi, const std::vector<std::vector<Rational>>& p) {
    const Rational threshold(1, bi.domain().size());
    BinaryInstance rounded = bi;
    for (VarId v = 0; v < bi.num_vars(); ++v) {
        LabelSet keep = 0;
        for_each_label(bi.unary(v), [&](Label a) {
            if (p.at(v).at(a) >= threshold) keep |= singleton(a);
        });
        if (keep == 0) throw InvariantViolation("no label of " + bi.names()[v] + " reaches 1/|D|");
        detail::shrink_unary(rounded, v, keep);
    }
    if (auto why = check_23_minimal(rounded))
        throw InvariantViolation("rounded instance is not (2,3)-minimal: " + *why);
    return rounded;
}

/// Solves the BLP, keeps labels with p_{v,a} >= 1/|D|, intersects every pair
/// relation with the surviving labels, confirms the result is (2,3)-minimal
/// and extracts a satisfying assignment from it.
inline LpRoundingResult solve_lp_rounding(const BinaryInstance& bi) {
    if (is_trivial(bi)) throw ContractError("instance is trivial (unsatisfiable)");
    if (auto why = check_23_minimal(bi)) throw ContractError("instance is not (2,3)-minimal: " + *why);
    require_dual_discriminator_closed(bi);

    BlpModel model = build_blp(bi);
    LpSolution sol = lp_solve(model.lp);
    if (sol.status != LpStatus::Optimal)
        throw InvariantViolation("BLP of a nontrivial (2,3)-minimal instance has no optimum");

    auto p = label_marginals(model, sol.point);
    BinaryInstance rounded = round_at_threshold(bi, p);
    Assignment a = solve_23minimal(rounded);
    return {std::move(a), sol.value, std::move(p), std::move(rounded), sol.pivots};
}

}  // namespace mccsp

#endif  // MCCSP_BLP_HPP
