#include "support.hpp"

#include "kmsphase/errors.hpp"
#include "kmsphase/model.hpp"

#include <catch_amalgamated.hpp>

#include <set>

using namespace kmsphase;
using namespace testing;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::InvalidArgument;
}

std::optional<std::size_t> index_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.index();
    }
    return std::nullopt;
}

}  // namespace

TEST_CASE("build_model validates input") {
    REQUIRE_NOTHROW(build_model({{1, 1}, {1, 1}}, std::vector<double>{2, 2}));

    const auto zero_row = [] { (void)build_model({{0, 0}, {1, 1}}, std::vector<double>{2, 2}); };
    CHECK(code_of(zero_row) == ErrorCode::ZeroRow);
    CHECK(index_of(zero_row) == 0u);

    const auto low_energy = [] { (void)build_model({{1, 1}, {1, 1}}, std::vector<double>{2, 1}); };
    CHECK(code_of(low_energy) == ErrorCode::EnergyNotAboveOne);
    CHECK(index_of(low_energy) == 1u);

    CHECK(code_of([] { (void)build_model({{1, 1}, {1}}, std::vector<double>{2, 2}); }) == ErrorCode::DimensionMismatch);
    CHECK(code_of([] { (void)build_model({{1, 1}, {1, 1}}, std::vector<double>{2}); }) == ErrorCode::DimensionMismatch);
    CHECK(code_of([] { (void)build_model({{1, 2}, {1, 1}}, std::vector<double>{2, 2}); }) == ErrorCode::NotBoolean);
    CHECK(code_of([] { (void)build_model({}, std::vector<double>{}); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("properties") {
    CHECK(properties(two_cycle()).irreducible);
    CHECK_FALSE(properties(build_model({{1, 1}, {0, 1}}, std::vector<double>{2, 2})).irreducible);

    const auto lower = build_model({{1, 0}, {1, 1}}, std::vector<double>{2, 3});
    const auto p = properties(lower);
    CHECK(p.no_zero_column);
    CHECK(p.energy_gap == 2.0);
    CHECK_FALSE(p.ta_equals_oa);
    REQUIRE(p.finite_target_set);
    // every row must hit the witness set
    for (Generator x = 0; x < 2; ++x) {
        bool hit = false;
        for (Generator y : *p.finite_target_set) hit = hit || lower.adjacent(x, y);
        CHECK(hit);
    }
    const auto& cs = lower.columns();
    REQUIRE(cs.d() == 2);
    CHECK(lower.column(0) == BitVector{true, true});
    CHECK(lower.column(1) == BitVector{false, true});

    const auto zero_col = build_model({{1, 0}, {1, 0}}, std::vector<double>{2, 2});
    CHECK_FALSE(properties(zero_col).no_zero_column);
    CHECK(zero_col.columns().contains_zero);
}

TEST_CASE("irreducible implies no zero column on random matrices") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        const auto m = static_cast<std::size_t>(1 + i % 6);
        const auto A = random_matrix(rng, m, 0.35);
        const auto model = build_model(A, std::vector<double>(m, 2.0));
        const auto p = properties(model);
        CHECK(p.irreducible == strongly_connected(A));
        if (p.irreducible) CHECK(p.no_zero_column);
        CHECK(p.finite_target_set.has_value());
    }
}

TEST_CASE("column space") {
    CHECK(column_space(full(2, 2)).d() == 1);
    CHECK(column_space(full(3, 2)).d() == 1);
    const auto gm = build_model({{0, 1}, {1, 1}}, std::vector<double>{2, 2});
    const auto& cs = column_space(gm);
    REQUIRE(cs.d() == 2);
    CHECK(cs.points[0] == BitVector{false, true});
    CHECK(cs.points[1] == BitVector{true, true});
    CHECK(cs.column_of == std::vector<std::size_t>{0, 1});
}

TEST_CASE("column space size equals distinct columns") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        const std::size_t m = 1 + static_cast<std::size_t>(i % 7);
        const auto A = random_matrix(rng, m, 0.5);
        const auto model = build_model(A, std::vector<double>(m, 3.0));
        std::set<std::vector<int>> cols;
        for (std::size_t z = 0; z < m; ++z) {
            std::vector<int> c;
            for (std::size_t x = 0; x < m; ++x) c.push_back(A[x][z]);
            cols.insert(c);
        }
        CHECK(model.columns().d() == cols.size());
        for (std::size_t z = 0; z < m; ++z) CHECK(model.columns().points[model.columns().column_of[z]] == model.column(z));
    }
}

TEST_CASE("a_xyz") {
    const auto gm = build_model({{0, 1}, {1, 1}}, std::vector<double>{2, 2});
    const std::vector<Generator> none;
    for (Generator z = 0; z < 2; ++z) CHECK(a_xyz(gm, none, none, z) == 1);
    const std::vector<Generator> x0{0}, x1{1};
    CHECK(a_xyz(gm, x0, none, 0) == 0);
    CHECK(a_xyz(gm, x0, none, 1) == 1);
    CHECK(a_xyz(gm, x0, x1, 0) == 0);
    CHECK(a_xyz(gm, x1, x0, 0) == 1);
}

TEST_CASE("strongly connected components and ancestors") {
    // 0 <-> 1, 1 -> 2, 2 -> 2
    const auto model = build_model({{0, 1, 0}, {1, 0, 1}, {0, 0, 1}}, std::vector<double>{2, 2, 2});
    const auto comps = strongly_connected_components(model);
    REQUIRE(comps.size() == 2);
    CHECK(comps[0] == std::vector<Generator>{0, 1});
    CHECK(comps[1] == std::vector<Generator>{2});
    CHECK(ancestors(model, 2) == std::vector<Generator>{0, 1, 2});
    CHECK(ancestors(model, 0) == std::vector<Generator>{0, 1});
}

TEST_CASE("weight at infinity is zero") {
    const auto model = full(2, 3.0);
    CHECK(model.weight(0, std::numeric_limits<double>::infinity()) == 0.0);
    CHECK(model.weight(0, 2.0) == Catch::Approx(1.0 / 9.0));
}
