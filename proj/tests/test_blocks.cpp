#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <hedgelab/blocks.hpp>

#include <nlohmann/json.hpp>

using namespace hedgelab;

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(build_block({Rat(3, 4), Rat(1), Rat(2), Rat(3)}), InvalidParams);
    CHECK_THROWS_AS(build_block({Rat(1, 2), Rat(0), Rat(2), Rat(3)}), InvalidParams);
    CHECK_THROWS_AS(build_block({Rat(1, 4), Rat(1), Rat(2), Rat(2)}), InvalidParams);
    CHECK_THROWS_AS(build_block({Rat(1, 4), Rat(1), Rat(7, 2), Rat(3)}), InvalidParams);
    CHECK_NOTHROW(build_block({Rat(1, 2), Rat(2), Rat(2), Rat(3)}));
}

TEST_CASE("standard block atom probabilities") {
    BlockModel block = build_block({Rat(1, 2), Rat(2), Rat(2), Rat(3)});
    // (S_1 = 1, X = 0, S_2 = a): (1/2)(1/2)(3/4).
    int atom = block.space->atom_index("s1+:x0:up");
    CHECK(block.space->prob(atom) == Rat(3, 16));
    CHECK(block.S.slice(2)[atom] == Rat(2));

    // P(A~) = 1/2 + eps/2 by inclusion-exclusion with independence.
    CHECK(block.space->event_probability(block.A_tilde) == Rat(3, 4));
    CHECK(block.space->event_probability(block.A) == Rat(1, 2));
}

TEST_CASE("S_2 levels follow the A~ split") {
    for (const auto& params : sweep_grid()) {
        BlockModel block = build_block(params);
        for (int i = 0; i < 8; ++i) {
            Rat level = rat_abs(block.S.slice(2)[i]);
            CHECK(level == (block.atoms[i].in_a_tilde() ? params.a : params.b));
        }
    }
}

TEST_CASE("canonical decomposition reconstructs f with cost M") {
    BlockModel block = build_block({Rat(1, 2), Rat(2), Rat(2), Rat(3)});
    auto [H, h] = canonical_decomposition(block);
    RandomVariable u = stochastic_integral(H, block.S);
    RandomVariable v = evaluate_static(h, block.S);
    CHECK(u + v == block.f);
    CHECK(moment(u, 1) == block.params.M / 2);
    CHECK(moment(v, 1) == block.params.M / 2);
}

TEST_CASE("verify_block passes on the standard block") {
    BlockModel block = build_block({Rat(1, 2), Rat(2), Rat(2), Rat(3)});
    BlockReport report = verify_block(block);
    for (const auto& item : report.items) {
        INFO(item.name, ": ", item.detail);
        if (item.hard) CHECK(item.pass);
    }
    CHECK(report.pass);
    CHECK(moment(block.f, 2) == Rat(1));  // eps M^2 / 2
}

TEST_CASE("full sweep: every grid block verifies") {
    auto grid = sweep_grid();
    auto reports = verify_sweep(grid);
    REQUIRE(reports.size() == grid.size());
    for (size_t i = 0; i < reports.size(); ++i) {
        INFO("block eps=", rat_str(grid[i].epsilon), " M=", rat_str(grid[i].M));
        CHECK(reports[i].pass);
    }
}

TEST_CASE("moment identity across the sweep, p = 1..4") {
    for (const auto& params : sweep_grid()) {
        BlockModel block = build_block(params);
        for (int p = 1; p <= 4; ++p)
            CHECK(moment(block.f, p) == rat_pow(params.M, p) * params.epsilon / 2);
    }
}

TEST_CASE("block json dump carries the whole model") {
    BlockModel block = build_block({Rat(1, 2), Rat(2), Rat(2), Rat(3)});
    auto j = block_to_json(block);
    auto space = space_from_json(j.at("space"));
    CHECK(space->num_atoms() == 8);
    CHECK(space_to_json(*space) == j.at("space"));
    auto S = process_from_json(j.at("S"), space);
    CHECK(verify_martingale(S).pass);
    CHECK(rv_from_json(j.at("f"), space).values() == block.f.values());
}
