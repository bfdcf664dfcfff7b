#include <random>

#include "arb/bnb.hpp"
#include "arb/simplex.hpp"
#include "doctest.h"

using namespace arb;

namespace {

MilpInstance knapsack() {
    // max 5a + 4b s.t. 3a + 2b <= 3, binary -> minimize the negation
    MilpInstance m;
    int a = m.add_var("a", 0, 1, VarType::Binary);
    int b = m.add_var("b", 0, 1, VarType::Binary);
    m.objective[a] = -5;
    m.objective[b] = -4;
    m.add_con({{a, 3.0}, {b, 2.0}}, Relation::LE, 3.0);
    return m;
}

}  // namespace

TEST_CASE("lp: single bounded variable") {
    MilpInstance m;
    int x = m.add_var("x", 0, 10);
    m.objective[x] = 1.0;
    m.add_con({{x, 1.0}}, Relation::GE, 3.0);
    Solution s = solve_lp(m);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.objective == doctest::Approx(3.0));
    CHECK(s.values[x] == doctest::Approx(3.0));
}

TEST_CASE("lp: infeasible pair") {
    MilpInstance m;
    int x = m.add_var("x", 0, 10);
    m.add_con({{x, 1.0}}, Relation::LE, 1.0);
    m.add_con({{x, 1.0}}, Relation::GE, 2.0);
    CHECK(solve_lp(m).status == SolveStatus::Infeasible);
}

TEST_CASE("lp: unbounded detection") {
    MilpInstance m;
    int x = m.add_var("x", -kInf, kInf);
    m.objective[x] = 1.0;
    CHECK(solve_lp(m).status == SolveStatus::Unbounded);
}

TEST_CASE("lp: equalities with free variables") {
    // min x + y s.t. x + y = 4, x - y = 2  ->  x=3, y=1
    MilpInstance m;
    int x = m.add_var("x", -kInf, kInf);
    int y = m.add_var("y", -kInf, kInf);
    m.objective[x] = 1.0;
    m.objective[y] = 1.0;
    m.add_con({{x, 1.0}, {y, 1.0}}, Relation::EQ, 4.0);
    m.add_con({{x, 1.0}, {y, -1.0}}, Relation::EQ, 2.0);
    Solution s = solve_lp(m);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.values[x] == doctest::Approx(3.0));
    CHECK(s.values[y] == doctest::Approx(1.0));
}

TEST_CASE("lp: negative bounds and GE rows") {
    // min -x - 2y, x in [-5, 5], y in [-5, 5], x + y <= 3, x - y >= -4
    MilpInstance m;
    int x = m.add_var("x", -5, 5);
    int y = m.add_var("y", -5, 5);
    m.objective[x] = -1.0;
    m.objective[y] = -2.0;
    m.add_con({{x, 1.0}, {y, 1.0}}, Relation::LE, 3.0);
    m.add_con({{x, 1.0}, {y, -1.0}}, Relation::GE, -4.0);
    Solution s = solve_lp(m);
    REQUIRE(s.status == SolveStatus::Optimal);
    // optimum at intersection x+y=3, x-y=-4 -> x=-0.5, y=3.5
    CHECK(s.objective == doctest::Approx(-6.5));
}

TEST_CASE("milp: knapsack by 4-case enumeration") {
    Solution s = solve(knapsack());
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.objective == doctest::Approx(-5.0));
    CHECK(s.values[0] == doctest::Approx(1.0));
    CHECK(s.values[1] == doctest::Approx(0.0));
}

TEST_CASE("milp: all binaries fixed solves at the root") {
    MilpInstance m = knapsack();
    m.vars[0].lb = m.vars[0].ub = 1.0;
    m.vars[1].lb = m.vars[1].ub = 0.0;
    Solution s = solve(m);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.objective == doctest::Approx(-5.0));
    CHECK(s.stats.nodes == 1);
}

TEST_CASE("milp: determinism across repeated solves") {
    std::mt19937 rng(7);
    for (int rep = 0; rep < 5; ++rep) {
        MilpInstance m;
        std::uniform_real_distribution<double> coef(-5, 5);
        for (int j = 0; j < 8; ++j) {
            m.add_var("b" + std::to_string(j), 0, 1, VarType::Binary);
            m.objective[j] = coef(rng);
        }
        for (int i = 0; i < 4; ++i) {
            std::vector<std::pair<int, double>> row;
            for (int j = 0; j < 8; ++j) row.push_back({j, coef(rng)});
            m.add_con(std::move(row), Relation::LE, 3.0);
        }
        Solution a = solve(m);
        Solution b = solve(m);
        REQUIRE(a.status == b.status);
        CHECK(a.objective == b.objective);
        CHECK(a.stats.nodes == b.stats.nodes);
        CHECK(a.values == b.values);
    }
}

TEST_CASE("milp: returned assignment satisfies all constraints") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> coef(-4, 4);
    for (int rep = 0; rep < 20; ++rep) {
        MilpInstance m;
        const int nb = 6, nc = 3;
        for (int j = 0; j < nb; ++j) {
            m.add_var("b" + std::to_string(j), 0, 1, VarType::Binary);
            m.objective[j] = coef(rng);
        }
        int x = m.add_var("x", -2, 2);
        m.objective[x] = coef(rng);
        for (int i = 0; i < nc; ++i) {
            std::vector<std::pair<int, double>> row;
            for (int j = 0; j <= nb; ++j) row.push_back({j, coef(rng)});
            m.add_con(std::move(row), Relation::LE, 2.0);
        }
        Solution s = solve(m);
        if (s.status != SolveStatus::Optimal) continue;
        CHECK(s.gap <= 1e-6);
        CHECK(s.objective >= s.bound - 1e-9);
        for (const auto& c : m.cons) {
            double act = 0;
            for (auto [j, a] : c.coef) act += a * s.values[j];
            CHECK(act <= c.rhs + 1e-6);
        }
        for (int j = 0; j < m.num_vars(); ++j) {
            CHECK(s.values[j] >= m.vars[j].lb - 1e-9);
            CHECK(s.values[j] <= m.vars[j].ub + 1e-9);
        }
    }
}
