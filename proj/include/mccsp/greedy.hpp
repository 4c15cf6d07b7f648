#ifndef MCCSP_GREEDY_HPP
#define MCCSP_GREEDY_HPP

// Greedy |D|-approximation for (2,3)-minimal instances whose binary relations
// are preserved by the dual discriminator. Labels are charged against a
// derived cost t that starts at cost and only decreases; the full bookkeeping
// of every round is recorded so the accounting can be audited afterwards.

#include "mccsp/minimality.hpp"

namespace mccsp {

/// t(u, a) per variable and label. Infinite-cost labels never enter the
/// accounting and are held at zero.
class DerivedCost {
public:
    DerivedCost(int num_vars, Domain d) : d_(d.size()), t_(static_cast<std::size_t>(num_vars) * d.size()) {}

    static DerivedCost from_costs(const CostMatrix& c) {
        DerivedCost t(c.num_vars(), c.domain());
        for (VarId v = 0; v < c.num_vars(); ++v)
            for (Label a = 0; a < c.domain().size(); ++a)
                if (c.at(v, a).is_finite()) t.at(v, a) = c.at(v, a).value();
        return t;
    }

    Rational& at(VarId v, Label a) { return t_.at(static_cast<std::size_t>(v) * d_ + a); }
    const Rational& at(VarId v, Label a) const { return t_.at(static_cast<std::size_t>(v) * d_ + a); }
    int num_vars() const { return d_ == 0 ? 0 : static_cast<int>(t_.size() / d_); }
    int domain_size() const { return d_; }

    friend bool operator==(const DerivedCost&, const DerivedCost&) = default;

private:
    int d_;
    std::vector<Rational> t_;
};

struct IterationTrace {
    VarId chosen;                                      ///< v
    std::vector<Label> labels;                         ///< R_v, ascending
    std::vector<std::map<VarId, Label>> fixed;         ///< F_a with A_a, aligned with labels
    std::vector<Rational> label_cost;                  ///< c_a
    Label chosen_label;                                ///< a_0
    std::vector<std::map<VarId, Rational>> charge;     ///< t_a(u)
    std::map<std::pair<VarId, Label>, Rational> decrease;  ///< nonzero entries of Δt
};

struct GreedyResult {
    Assignment assignment;
    std::vector<std::pair<VarId, Label>> predetermined;  ///< |R_u| = 1 before the loop
    std::vector<IterationTrace> trace;                   ///< empty unless recorded
    DerivedCost t_end;
    int iterations = 0;
};

namespace detail {

inline void require_finite_on_domains(const BinaryInstance& bi) {
    for (VarId u = 0; u < bi.num_vars(); ++u)
        for_each_label(bi.unary(u), [&](Label a) {
            if (bi.costs().at(u, a).is_infinite())
                throw ContractError("label " + std::to_string(a) + " of " + bi.names()[u] +
                                    " has infinite cost but is still in R_u");
        });
}

}  // namespace detail

/// Runs the greedy algorithm. "Pick v" resolves to the lowest-index open
/// variable, ties in c_a to the lowest label, and each t_a is obtained by
/// water-filling over F_a in ascending variable order.
inline GreedyResult solve_greedy(const BinaryInstance& bi, bool record_trace = true) {
    if (is_trivial(bi)) throw ContractError("instance is trivial (unsatisfiable)");
    if (auto why = check_23_minimal(bi)) throw ContractError("instance is not (2,3)-minimal: " + *why);
    require_dual_discriminator_closed(bi);
    detail::require_finite_on_domains(bi);

    const int n = bi.num_vars();
    GreedyResult out{Assignment(n, -1), {}, {}, DerivedCost::from_costs(bi.costs())};
    DerivedCost& t = out.t_end;

    std::vector<bool> open(n, false);
    for (VarId u = 0; u < n; ++u) {
        if (label_count(bi.unary(u)) >= 2) {
            open[u] = true;
            continue;
        }
        const Label a = lowest_label(bi.unary(u));
        out.assignment[u] = a;
        t.at(u, a) = 0;
        out.predetermined.emplace_back(u, a);
    }

    for (VarId v = 0; v < n; ++v) {
        if (!open[v]) continue;
        IterationTrace it;
        it.chosen = v;
        it.labels = labels_of(bi.unary(v));
        for (Label a : it.labels) {
            FixResult fix = fixed_set(bi, v, a, &open);
            Rational c = 0;
            for (const auto& [u, b] : fix.fixed) c += t.at(u, b);
            it.fixed.push_back(std::move(fix.fixed));
            it.label_cost.push_back(c);
        }
        std::size_t best = 0;
        for (std::size_t i = 1; i < it.labels.size(); ++i)
            if (it.label_cost[i] < it.label_cost[best]) best = i;
        it.chosen_label = it.labels[best];
        const Rational& budget = it.label_cost[best];

        for (std::size_t i = 0; i < it.labels.size(); ++i) {
            Rational remaining = budget;
            std::map<VarId, Rational> charge;
            for (const auto& [u, b] : it.fixed[i]) {
                Rational x = std::min(remaining, Rational(t.at(u, b)));
                remaining -= x;
                auto [slot, fresh] = it.decrease.try_emplace({u, b}, x);
                if (!fresh && slot->second < x) slot->second = x;
                charge.emplace(u, std::move(x));
            }
            if (remaining != 0) throw InvariantViolation("charge distribution fell short of c_{a_0}");
            it.charge.push_back(std::move(charge));
        }
        for (auto& [key, dt] : it.decrease) t.at(key.first, key.second) -= dt;
        std::erase_if(it.decrease, [](const auto& kv) { return kv.second == 0; });

        for (const auto& [u, b] : it.fixed[best]) {
            out.assignment[u] = b;
            open[u] = false;
        }
        ++out.iterations;
        if (record_trace) out.trace.push_back(std::move(it));
    }
    return out;
}

struct ChainLinks {
    Rational assigned_cost;        ///< Σ cost(v, A(v))
    Rational assigned_paid;        ///< Σ (cost - t_end)(v, A(v))
    Rational total_paid;           ///< Σ_{v,a} (cost - t_end)(v, a)
    Rational reference_paid;       ///< |D| · Σ (cost - t_end)(v, A'(v))
    Rational reference_cost;       ///< |D| · Σ cost(v, A'(v))
};

struct TraceReport {
    std::vector<std::string> violations;
    std::optional<ChainLinks> chain;
    bool ok() const { return violations.empty(); }
};

/// Audits a greedy run against the accounting facts its guarantee rests on:
/// (i) t_end(u, A(u)) = 0, (ii) t never increases, (iii) t stays non-negative,
/// (iv) with a reference satisfying assignment A', each round's total decrease
/// is at most |D| times the decrease along A'. Also checks the per-round
/// identities (Σ t_a = c_{a_0}, Δt = max t_a, t_{a_0} = t) and, given A', each
/// link of the cost chain separately. t is recomputed from the costs rather
/// than taken from the result.
inline TraceReport check_trace(const BinaryInstance& bi, const GreedyResult& result,
                               const std::optional<Assignment>& reference = std::nullopt) {
    TraceReport rep;
    auto fail = [&](std::string s) { rep.violations.push_back(std::move(s)); };
    const int n = bi.num_vars();
    const int d = bi.domain().size();
    const Rational dsize(d);

    if (static_cast<int>(result.assignment.size()) != n) {
        fail("assignment has the wrong length");
        return rep;
    }
    if (result.trace.size() != static_cast<std::size_t>(result.iterations))
        fail("trace was not recorded for every iteration");

    DerivedCost t = DerivedCost::from_costs(bi.costs());
    for (const auto& [u, a] : result.predetermined) {
        if (bi.unary(u) != singleton(a)) fail("predetermined variable " + bi.names()[u] + " is not forced");
        t.at(u, a) = 0;
    }

    for (std::size_t k = 0; k < result.trace.size(); ++k) {
        const auto& it = result.trace[k];
        const std::string at = "iteration " + std::to_string(k) + ": ";
        if (it.labels.empty() || it.labels.size() != it.fixed.size() || it.labels.size() != it.label_cost.size() ||
            it.labels.size() != it.charge.size()) {
            fail(at + "malformed record");
            continue;
        }
        auto best_it = std::find(it.labels.begin(), it.labels.end(), it.chosen_label);
        if (best_it == it.labels.end()) {
            fail(at + "a_0 is not in R_v");
            continue;
        }
        const std::size_t best = best_it - it.labels.begin();
        const Rational& c0 = it.label_cost[best];

        std::map<std::pair<VarId, Label>, Rational> expected_decrease;
        for (std::size_t i = 0; i < it.labels.size(); ++i) {
            const Label a = it.labels[i];
            auto self = it.fixed[i].find(it.chosen);
            if (self == it.fixed[i].end() || self->second != a) fail(at + "F_a does not contain v fixed to a");
            Rational c = 0, charged = 0;
            for (const auto& [u, b] : it.fixed[i]) {
                c += t.at(u, b);
                auto ch = it.charge[i].find(u);
                if (ch == it.charge[i].end()) {
                    fail(at + "missing charge for " + bi.names()[u]);
                    continue;
                }
                const Rational& x = ch->second;
                if (x < 0 || x > t.at(u, b)) fail(at + "charge outside [0, t(u, A_a(u))]");
                if (i == best && x != t.at(u, b)) fail(at + "t_{a_0}(u) differs from t(u, A_{a_0}(u))");
                charged += x;
                auto [slot, fresh] = expected_decrease.try_emplace({u, b}, x);
                if (!fresh && slot->second < x) slot->second = x;
            }
            if (c != it.label_cost[i]) fail(at + "recorded c_a disagrees with t");
            if (it.label_cost[i] < c0) fail(at + "a_0 is not a minimizer of c_a");
            if (charged != c0) fail(at + "Σ t_a(u) != c_{a_0} for label " + std::to_string(a));
        }
        std::erase_if(expected_decrease, [](const auto& kv) { return kv.second == 0; });
        if (expected_decrease != it.decrease) fail(at + "Δt is not the entrywise maximum of the charges");

        Rational total = 0, along_reference = 0;
        for (const auto& [key, dt] : it.decrease) {
            const auto [u, b] = key;
            if (dt < 0) fail(at + "(ii) t increases at " + bi.names()[u]);
            t.at(u, b) -= dt;
            if (t.at(u, b) < 0) fail(at + "(iii) t becomes negative at " + bi.names()[u]);
            total += dt;
            if (reference && (*reference)[u] == b) along_reference += dt;
        }
        if (reference && total > dsize * along_reference)
            fail(at + "(iv) round decrease " + to_string(total) + " exceeds |D| times " + to_string(along_reference));
    }

    if (!(t == result.t_end)) fail("recorded t_end disagrees with the replayed trace");
    for (VarId u = 0; u < n; ++u) {
        const Label a = result.assignment[u];
        if (!bi.domain().contains(a) || !has_label(bi.unary(u), a)) {
            fail("assignment leaves R_" + bi.names()[u]);
            continue;
        }
        if (t.at(u, a) != 0) fail("(i) t_end(" + bi.names()[u] + ", A) is not zero");
    }
    if (!evaluate(to_instance(bi), result.assignment).satisfying) fail("assignment does not satisfy the instance");

    if (reference) {
        ChainLinks ch;
        for (VarId u = 0; u < n; ++u) {
            const Label a = result.assignment[u];
            const Label r = (*reference)[u];
            ch.assigned_cost += bi.costs().at(u, a).value();
            ch.assigned_paid += bi.costs().at(u, a).value() - t.at(u, a);
            if (bi.costs().at(u, r).is_infinite()) {
                fail("reference assignment has infinite cost");
                return rep;
            }
            ch.reference_paid += bi.costs().at(u, r).value() - t.at(u, r);
            ch.reference_cost += bi.costs().at(u, r).value();
            for (Label b = 0; b < d; ++b)
                if (bi.costs().at(u, b).is_finite()) ch.total_paid += bi.costs().at(u, b).value() - t.at(u, b);
        }
        ch.reference_paid *= dsize;
        ch.reference_cost *= dsize;
        if (ch.assigned_cost > ch.assigned_paid) fail("chain link 1 fails");
        if (ch.assigned_paid > ch.total_paid) fail("chain link 2 fails");
        if (ch.total_paid > ch.reference_paid) fail("chain link 3 fails");
        if (ch.reference_paid > ch.reference_cost) fail("chain link 4 fails");
        rep.chain = std::move(ch);
    }
    return rep;
}

}  // namespace mccsp

#endif  // MCCSP_GREEDY_HPP
