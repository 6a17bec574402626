#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cotforge/errors.hpp"
#include "cotforge/rng.hpp"
#include "cotforge/simplex.hpp"

using namespace cotforge;

namespace {

bool margins_ok(const std::vector<std::vector<double>>& rows, const std::vector<double>& w) {
    for (const auto& row : rows) {
        double acc = 0.0;
        for (std::size_t i = 0; i < row.size(); ++i) acc += row[i] * w[i];
        if (acc < 1.0) return false;
    }
    return true;
}

// Random system feasible by construction: pick integer w*, emit rows signed
// to satisfy margin 1 after scaling w* up.
std::vector<std::vector<double>> feasible_system(int d, int m, Rng& rng) {
    std::vector<double> wstar(static_cast<std::size_t>(d));
    for (auto& v : wstar) v = static_cast<double>(static_cast<long long>(rng.below(11)) - 5);
    std::vector<std::vector<double>> rows;
    while (static_cast<int>(rows.size()) < m) {
        std::vector<double> row(static_cast<std::size_t>(d), 0.0);
        double acc = 0.0;
        for (int i = 0; i < d; ++i) {
            row[static_cast<std::size_t>(i)] = rng.bit() ? 1.0 : 0.0;
            acc += row[static_cast<std::size_t>(i)] * wstar[static_cast<std::size_t>(i)];
        }
        if (acc == 0.0) continue;  // keep rows with a strict sign so margins scale
        if (acc < 0)
            for (auto& v : row) v = -v;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

TEST_CASE("empty system is feasible with w = 0") {
    const auto res = solve_margin_system({}, 4);
    CHECK(res.feasible);
    CHECK(res.w == std::vector<double>(4, 0.0));
}

TEST_CASE("one-constraint systems") {
    const auto res = solve_margin_system({{1, 0}}, 2);
    REQUIRE(res.feasible);
    CHECK(res.w[0] >= 1.0);

    // w >= 1 and -w >= 1 cannot hold together
    const auto bad = solve_margin_system({{1}, {-1}}, 1);
    CHECK_FALSE(bad.feasible);
}

TEST_CASE("hand feasibility example") {
    // label-1 window (1,0) and label-0 window (1,1), folded to margin rows
    const std::vector<std::vector<double>> rows = {{1, 0}, {-1, -1}};
    for (auto engine : {SolverEngine::FloatingPoint, SolverEngine::ExactRational}) {
        const auto res = solve_margin_system(rows, 2, engine);
        REQUIRE(res.feasible);
        CHECK(margins_ok(rows, res.w));
    }
}

TEST_CASE("random feasible systems are solved by both engines") {
    Rng rng(61);
    for (int trial = 0; trial < 60; ++trial) {
        const int d = 2 + static_cast<int>(rng.below(10));
        const int m = 1 + static_cast<int>(rng.below(60));
        const auto rows = feasible_system(d, m, rng);
        const auto fp = solve_margin_system(rows, d, SolverEngine::FloatingPoint);
        REQUIRE(fp.feasible);
        CHECK(margins_ok(rows, fp.w));
        const auto exact = solve_margin_system(rows, d, SolverEngine::ExactRational);
        REQUIRE(exact.feasible);
        CHECK(margins_ok(rows, exact.w));
    }
}

TEST_CASE("engines agree on infeasible systems") {
    Rng rng(67);
    int infeasible_seen = 0;
    for (int trial = 0; trial < 120; ++trial) {
        const int d = 2 + static_cast<int>(rng.below(5));
        const int m = 4 + static_cast<int>(rng.below(24));
        // Unconstrained random signed 0/1 rows; many such systems clash.
        std::vector<std::vector<double>> rows;
        for (int j = 0; j < m; ++j) {
            std::vector<double> row(static_cast<std::size_t>(d), 0.0);
            bool nonzero = false;
            for (auto& v : row) {
                const int pick = static_cast<int>(rng.below(3)) - 1;
                v = pick;
                nonzero |= pick != 0;
            }
            if (!nonzero) row[0] = 1;
            rows.push_back(std::move(row));
        }
        const auto exact = solve_margin_system(rows, d, SolverEngine::ExactRational);
        const auto fp = solve_margin_system(rows, d, SolverEngine::FloatingPoint);
        CHECK(exact.feasible == fp.feasible);
        if (!exact.feasible) ++infeasible_seen;
        if (exact.feasible) CHECK(margins_ok(rows, exact.w));
        if (fp.feasible) CHECK(margins_ok(rows, fp.w));
    }
    CHECK(infeasible_seen > 10);  // the trial mix actually exercises both verdicts
}

TEST_CASE("auto engine returns verified solutions on larger systems") {
    Rng rng(71);
    const auto rows = feasible_system(40, 1500, rng);
    const auto res = solve_margin_system(rows, 40, SolverEngine::Auto);
    REQUIRE(res.feasible);
    CHECK(margins_ok(rows, res.w));
}

TEST_CASE("exact engine refuses non-integral input") {
    CHECK_THROWS_AS(solve_margin_system({{0.5, 1.0}}, 2, SolverEngine::ExactRational), Error);
}

// Independent oracle for d <= 3: any feasible system with {-1,0,1} rows has a
// basic solution whose entries are ratios of 3x3 {-1,0,1} subdeterminants
// (magnitude <= 4), so scaling by the denominator gives an integer solution
// in [-16, 16]^d. Exhaustive enumeration over that box decides feasibility.
TEST_CASE("verdicts match exhaustive integer enumeration in low dimension") {
    Rng rng(731);
    auto brute_force = [](const std::vector<std::vector<double>>& rows, int d) {
        std::vector<int> w(static_cast<std::size_t>(d), -16);
        while (true) {
            bool ok = true;
            for (const auto& row : rows) {
                int acc = 0;
                for (int i = 0; i < d; ++i)
                    acc += static_cast<int>(row[static_cast<std::size_t>(i)]) *
                           w[static_cast<std::size_t>(i)];
                if (acc < 1) {
                    ok = false;
                    break;
                }
            }
            if (ok) return true;
            int i = 0;
            while (i < d && w[static_cast<std::size_t>(i)] == 16) {
                w[static_cast<std::size_t>(i)] = -16;
                ++i;
            }
            if (i == d) return false;
            ++w[static_cast<std::size_t>(i)];
        }
    };
    int feasible_seen = 0;
    for (int trial = 0; trial < 150; ++trial) {
        const int d = 1 + static_cast<int>(rng.below(3));
        const int m = 1 + static_cast<int>(rng.below(8));
        std::vector<std::vector<double>> rows;
        for (int j = 0; j < m; ++j) {
            std::vector<double> row(static_cast<std::size_t>(d), 0.0);
            bool nonzero = false;
            for (auto& v : row) {
                const int pick = static_cast<int>(rng.below(3)) - 1;
                v = pick;
                nonzero |= pick != 0;
            }
            if (!nonzero) row[0] = 1;
            rows.push_back(std::move(row));
        }
        const bool expected = brute_force(rows, d);
        const auto fp = solve_margin_system(rows, d, SolverEngine::FloatingPoint);
        const auto exact = solve_margin_system(rows, d, SolverEngine::ExactRational);
        REQUIRE(fp.feasible == expected);
        REQUIRE(exact.feasible == expected);
        feasible_seen += expected;
    }
    CHECK(feasible_seen > 20);
    CHECK(feasible_seen < 130);
}
