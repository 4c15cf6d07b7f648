#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace mccsp;

namespace {

BinaryInstance prepare(const Instance& inst) { return make_23_minimal(binarize(inst)); }

Instance or_instance() {
    InstanceBuilder b(Domain(2));
    VarId x = b.variable("x"), y = b.variable("y");
    b.relation("OR", Relation(2, Domain(2), {{0, 1}, {1, 0}, {1, 1}})).constrain("OR", {x, y});
    b.cost(x, 1, ExtendedCost(3)).cost(y, 1, ExtendedCost(1));
    return b.build();
}

Rational cost_of(const BinaryInstance& bi, const Assignment& a) {
    Rational c = 0;
    for (VarId v = 0; v < bi.num_vars(); ++v) c += bi.costs().at(v, a[v]).value();
    return c;
}

/// Some optimal satisfying assignment, by enumeration.
std::optional<Assignment> optimal_assignment(const BinaryInstance& bi) {
    std::optional<Assignment> best;
    for (const auto& a : oracle::satisfying(bi))
        if (!best || cost_of(bi, a) < cost_of(bi, *best)) best = a;
    return best;
}

}  // namespace

TEST(Greedy, ForcedInstanceNeedsNoIterations) {
    const Relation pi(2, Domain(3), {{0, 1}, {1, 2}, {2, 0}});
    InstanceBuilder b(Domain(3));
    VarId x = b.variable("x"), y = b.variable("y");
    b.relation("pi", pi).constrain("pi", {x, y});
    b.relation("S", relations::unary(Domain(3), {2})).constrain("S", {x});
    b.cost(x, 2, ExtendedCost(5)).cost(y, 0, ExtendedCost(1));
    BinaryInstance bi = prepare(b.build());
    auto res = solve_greedy(bi);
    EXPECT_EQ(res.iterations, 0);
    EXPECT_EQ(res.assignment, (Assignment{2, 0}));
    EXPECT_EQ(res.predetermined.size(), 2u);
    EXPECT_TRUE(check_trace(bi, res).ok());
    EXPECT_TRUE(check_trace(bi, res, Assignment{2, 0}).ok());
}

TEST(Greedy, OrInstanceWithinFactorTwo) {
    BinaryInstance bi = prepare(or_instance());
    auto res = solve_greedy(bi);
    EXPECT_TRUE(evaluate(or_instance(), res.assignment).satisfying);
    EXPECT_LE(cost_of(bi, res.assignment), 2);
    auto ref = optimal_assignment(bi);
    ASSERT_TRUE(ref);
    EXPECT_EQ(cost_of(bi, *ref), 1);
    auto rep = check_trace(bi, res, ref);
    EXPECT_TRUE(rep.ok()) << (rep.violations.empty() ? "" : rep.violations.front());
    ASSERT_TRUE(rep.chain);
    EXPECT_LE(rep.chain->total_paid, rep.chain->reference_paid);
}

// The OR instance: v = x first. F_0 = {x->0, y->1} costs 1, F_1 = {x->1}
// costs 3, so a_0 = 0 and both distributions charge exactly 1.
TEST(Greedy, OrInstanceTraceValues) {
    BinaryInstance bi = prepare(or_instance());
    auto res = solve_greedy(bi);
    ASSERT_EQ(res.iterations, 1);
    const auto& it = res.trace.front();
    EXPECT_EQ(it.chosen, 0);
    EXPECT_EQ(it.labels, (std::vector<Label>{0, 1}));
    EXPECT_EQ(it.label_cost, (std::vector<Rational>{1, 3}));
    EXPECT_EQ(it.chosen_label, 0);
    EXPECT_EQ(it.fixed[0], (std::map<VarId, Label>{{0, 0}, {1, 1}}));
    EXPECT_EQ(it.charge[1], (std::map<VarId, Rational>{{0, 1}}));
    EXPECT_EQ(res.assignment, (Assignment{0, 1}));
    EXPECT_EQ(res.t_end.at(0, 1), 2);
    EXPECT_EQ(res.t_end.at(1, 1), 0);
}

TEST(Greedy, MutatedTraceIsRejected) {
    BinaryInstance bi = prepare(or_instance());
    auto res = solve_greedy(bi);
    auto bad = res;
    ASSERT_FALSE(bad.trace.front().decrease.empty());
    bad.trace.front().decrease.begin()->second += 5;
    EXPECT_FALSE(check_trace(bi, bad).ok());

    auto bad_charge = res;
    bad_charge.trace.front().charge[1].begin()->second += 1;
    EXPECT_FALSE(check_trace(bi, bad_charge).ok());

    auto bad_label = res;
    bad_label.trace.front().chosen_label = 1;
    EXPECT_FALSE(check_trace(bi, bad_label).ok());
}

TEST(Greedy, RejectsInputsOutsideItsContract) {
    BinaryInstance raw = binarize(or_instance());
    raw.restrict_unary(0, singleton(0));
    EXPECT_THROW(solve_greedy(raw), ContractError);  // not minimal
    raw.restrict_unary(1, singleton(0));
    EXPECT_THROW(solve_greedy(make_23_minimal(raw)), ContractError);  // trivial

    InstanceBuilder b(Domain(3));
    VarId x = b.variable("x"), y = b.variable("y");
    b.relation("P_H", relation_PH()).constrain("P_H", {x, y});
    EXPECT_THROW(solve_greedy(prepare(b.build())), ContractError);  // not d-closed
}

TEST(Greedy, RandomInstancesWithinDomainFactor) {
    int runs = 0;
    for (int trial = 0; trial < 200; ++trial) {
        RandomSpec spec{static_cast<std::uint64_t>(1000 + trial), 3, 8, 0.3 + 0.1 * (trial % 5), 10, true};
        BinaryInstance bi = prepare(gen_random_01all(spec));
        if (is_trivial(bi)) continue;
        auto res = solve_greedy(bi);
        auto ref = optimal_assignment(bi);
        ASSERT_TRUE(ref);
        EXPECT_LE(cost_of(bi, res.assignment), 3 * cost_of(bi, *ref)) << trial;
        EXPECT_LE(res.iterations, bi.num_vars());
        auto rep = check_trace(bi, res, ref);
        EXPECT_TRUE(rep.ok()) << trial << ": " << (rep.violations.empty() ? "" : rep.violations.front());
        for (const auto& it : res.trace)
            for (std::size_t i = 0; i < it.labels.size(); ++i) {
                EXPECT_EQ(it.fixed[i].at(it.chosen), it.labels[i]);
                EXPECT_GE(it.label_cost[i], it.label_cost[std::find(it.labels.begin(), it.labels.end(),
                                                                    it.chosen_label) - it.labels.begin()]);
            }
        ++runs;
    }
    EXPECT_EQ(runs, 200);
}

TEST(Greedy, ReferenceCanBeAnySatisfyingAssignment) {
    for (int trial = 0; trial < 60; ++trial) {
        RandomSpec spec{static_cast<std::uint64_t>(5000 + trial), 2 + trial % 3, 5, 0.4, 10, trial % 2 == 0};
        BinaryInstance bi = prepare(gen_random_01all(spec));
        if (is_trivial(bi)) continue;
        auto res = solve_greedy(bi);
        for (const auto& a : oracle::satisfying(bi)) {
            auto rep = check_trace(bi, res, a);
            EXPECT_TRUE(rep.ok()) << trial;
        }
    }
}

TEST(Greedy, DeterministicAndTraceOptional) {
    BinaryInstance bi = prepare(gen_random_01all({77, 4, 7, 0.5, 10, true}));
    ASSERT_FALSE(is_trivial(bi));
    auto a = solve_greedy(bi), b = solve_greedy(bi, false);
    EXPECT_EQ(a.assignment, b.assignment);
    EXPECT_EQ(a.t_end, b.t_end);
    EXPECT_TRUE(b.trace.empty());
}
