#include <doctest.h>

#include <algorithm>
#include <random>

#include "boxlab/error.hpp"
#include "boxlab/lp.hpp"
#include "lp_suite.hpp"
#include "oracle.hpp"

using namespace boxlab;

namespace {

std::vector<std::vector<Rational>> dense_rows(const LinearProgram& lp) {
    std::vector<std::vector<Rational>> A(lp.rows(), std::vector<Rational>(lp.cols()));
    for (std::size_t i = 0; i < lp.rows(); ++i) {
        for (std::size_t j = 0; j < lp.cols(); ++j) A[i][j] = lp.coefficient(i, j);
    }
    return A;
}

void check_optimal_solution(const LinearProgram& lp, const LpSolution& sol) {
    const auto cert = oracle::certify(lp, sol);
    CHECK(cert.primal_feasible);
    CHECK(cert.dual_feasible);
    CHECK(cert.gap_closed);
    REQUIRE(sol.reduced_costs.size() == lp.cols());
    for (const auto& r : sol.reduced_costs) CHECK(sgn(r) >= 0);
    for (std::size_t j = 0; j < lp.cols(); ++j) {
        Rational r = lp.objective()[j];
        for (std::size_t i = 0; i < lp.rows(); ++i) r -= sol.duals[i] * lp.coefficient(i, j);
        CHECK(r == sol.reduced_costs[j]);
    }
    for (std::size_t j = 0; j < lp.cols(); ++j) {
        if (sgn(sol.point[j]) > 0) CHECK(std::binary_search(sol.basis.begin(), sol.basis.end(), j));
    }
}

LinearProgram random_feasible(std::mt19937_64& rng, std::size_t m, std::size_t n) {
    std::vector<Rational> A(m * n), x(n), c(n);
    for (auto& v : A) v = ratio(long(rng() % 11) - 5, long(rng() % 3) + 1);
    for (auto& v : x) v = rng() % 3 == 0 ? Rational(0) : ratio(long(rng() % 7), long(rng() % 4) + 1);
    for (auto& v : c) v = ratio(long(rng() % 9), 1);
    std::vector<Rational> b(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) b[i] += A[i * n + j] * x[j];
    }
    return LinearProgram(m, n, A, b, c);
}

}  // namespace

TEST_CASE("suite statuses and values") {
    const auto suite = lp_suite::cases();
    CHECK(suite.size() == 20);
    for (const auto& item : suite) {
        CAPTURE(item.name);
        const LpSolution sol = solve(item.lp);
        CHECK(sol.status == item.status);
        if (sol.status != LpStatus::optimal) continue;
        check_optimal_solution(item.lp, sol);
        if (item.value) CHECK(sol.value == *item.value);
    }
}

TEST_CASE("suite against vertex enumeration") {
    for (const auto& item : lp_suite::cases()) {
        if (!item.enumerable) continue;
        CAPTURE(item.name);
        const auto truth = oracle::enumerate_vertices(dense_rows(item.lp), item.lp.rhs(), item.lp.objective());
        const LpSolution sol = solve(item.lp);
        if (!truth.feasible) {
            CHECK(sol.status == LpStatus::infeasible);
        } else if (!truth.bounded) {
            CHECK(sol.status == LpStatus::unbounded);
        } else {
            REQUIRE(sol.status == LpStatus::optimal);
            CHECK(sol.value == truth.value);
            bool is_vertex = false;
            for (const auto& v : truth.optimal_vertices) is_vertex = is_vertex || v == sol.point;
            CHECK(is_vertex);
        }
    }
}

TEST_CASE("both arithmetic paths agree") {
    for (const auto& item : lp_suite::cases()) {
        CAPTURE(item.name);
        const LpSolution fast = solve(item.lp, LpArithmetic::automatic);
        const LpSolution exact = solve(item.lp, LpArithmetic::multiprecision);
        CHECK(fast.status == exact.status);
        CHECK(fast.point == exact.point);
        CHECK(fast.basis == exact.basis);
        CHECK(fast.duals == exact.duals);
    }
}

TEST_CASE("solve is deterministic") {
    for (const auto& item : lp_suite::cases()) {
        const LpSolution a = solve(item.lp), b = solve(item.lp);
        CHECK(a.status == b.status);
        CHECK(a.basis == b.basis);
        CHECK(a.point == b.point);
    }
}

TEST_CASE("random programs feasible by construction") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t m = 1 + rng() % 4, n = m + 1 + rng() % 4;
        const LinearProgram lp = random_feasible(rng, m, n);
        const LpSolution sol = solve(lp);
        CHECK(sol.status != LpStatus::infeasible);
        const auto truth = oracle::enumerate_vertices(dense_rows(lp), lp.rhs(), lp.objective());
        REQUIRE(truth.feasible);
        CHECK(truth.bounded);  // objective is nonnegative
        if (sol.status == LpStatus::optimal) {
            check_optimal_solution(lp, sol);
            CHECK(sol.value == truth.value);
        }
    }
}

TEST_CASE("random programs with mixed-sign objectives") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t m = 1 + rng() % 3, n = m + 1 + rng() % 3;
        LinearProgram base = random_feasible(rng, m, n);
        std::vector<Rational> A(m * n), c(n);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) A[i * n + j] = base.coefficient(i, j);
        }
        for (auto& v : c) v = long(rng() % 7) - 3;
        const LinearProgram lp(m, n, A, base.rhs(), c);
        const auto truth = oracle::enumerate_vertices(dense_rows(lp), lp.rhs(), lp.objective());
        const LpSolution sol = solve(lp);
        if (!truth.bounded) {
            CHECK(sol.status == LpStatus::unbounded);
        } else {
            REQUIRE(sol.status == LpStatus::optimal);
            CHECK(sol.value == truth.value);
            check_optimal_solution(lp, sol);
        }
    }
}

TEST_CASE("dimension checks") {
    CHECK_THROWS_AS(LinearProgram(2, 2, std::vector<Rational>(3), {1, 1}, {1, 1}), Error);
    CHECK_THROWS_AS(LinearProgram(1, 2, std::vector<Rational>(2), {1, 1}, {1, 1}), Error);
    CHECK_THROWS_AS(LinearProgram(0, 0, {}, {}, {}), Error);
}

TEST_CASE("alternative vertex: single point has none") {
    const auto lp = lp_suite::dense({{"1", "1"}, {"1", "-1"}}, {"1", "1"}, {"0", "0"});
    const LpSolution sol = solve(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK_FALSE(find_alternative_vertex(lp, sol).has_value());
}

TEST_CASE("alternative vertex: uniform noise over local strategies") {
    std::vector<std::vector<LinearProgram::SparseEntry>> columns;
    std::vector<int> ids;
    for (const auto& d : enumerate_deterministic()) {
        if (d.cost_bits() != 0) continue;
        ids.push_back(d.id());
        std::vector<LinearProgram::SparseEntry> col;
        for (int s = 0; s < 4; ++s) col.push_back({std::size_t(4 * s + d.outcome(s)), Rational(1)});
        columns.push_back(col);
    }
    const LinearProgram lp = LinearProgram::from_columns(16, columns, std::vector<Rational>(16, ratio(1, 4)),
                                                         std::vector<Rational>(16, Rational(0)));
    const LpSolution first = solve(lp);
    REQUIRE(first.status == LpStatus::optimal);
    const auto second = find_alternative_vertex(lp, first);
    REQUIRE(second.has_value());
    CHECK(support(second->point) != support(first.point));
    CHECK(oracle::certify(lp, *second).ok());
    CHECK(second->value == 0);
}

TEST_CASE("alternative vertex: pr cost program keeps the value") {
    const auto lp = cost_program(canonical("pr"), Basis::full256);
    const LpSolution first = solve(lp);
    REQUIRE(first.status == LpStatus::optimal);
    const auto second = find_alternative_vertex(lp, first);
    if (second) {
        CHECK(second->value == 1);
        CHECK(second->value == first.value);
        CHECK(oracle::certify(lp, *second).primal_feasible);
    }
}

TEST_CASE("alternative vertex agrees with enumeration on small programs") {
    std::mt19937_64 rng(7);
    int multiple = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 1 + rng() % 3, n = m + 2 + rng() % 3;
        std::vector<Rational> A(m * n), c(n);
        for (auto& v : A) v = long(rng() % 3);
        for (auto& v : c) v = long(rng() % 2);
        std::vector<Rational> b(m);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) b[i] += A[i * n + j];
        }
        const LinearProgram lp(m, n, A, b, c);
        const LpSolution sol = solve(lp);
        REQUIRE(sol.status == LpStatus::optimal);
        const auto truth = oracle::enumerate_vertices(dense_rows(lp), b, c);
        std::vector<std::vector<std::size_t>> supports;
        for (const auto& v : truth.optimal_vertices) {
            const auto s = support(v);
            if (std::find(supports.begin(), supports.end(), s) == supports.end()) supports.push_back(s);
        }
        const auto alt = find_alternative_vertex(lp, sol);
        CHECK(alt.has_value() == (supports.size() > 1));
        if (alt) {
            ++multiple;
            CHECK(alt->value == sol.value);
            CHECK(support(alt->point) != support(sol.point));
            bool is_vertex = false;
            for (const auto& v : truth.optimal_vertices) is_vertex = is_vertex || v == alt->point;
            CHECK(is_vertex);
        }
    }
    CHECK(multiple > 10);
}

TEST_CASE("alternative vertex rejects non-optimal input") {
    const auto lp = lp_suite::dense({{"1", "1"}}, {"1"}, {"1", "0"});
    LpSolution bogus;
    bogus.status = LpStatus::infeasible;
    CHECK_THROWS_AS(find_alternative_vertex(lp, bogus), Error);
}
