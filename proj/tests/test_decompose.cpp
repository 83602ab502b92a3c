#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <hedgelab/blocks.hpp>
#include <hedgelab/decompose.hpp>

#include "oracles.hpp"

using namespace hedgelab;

namespace {

BlockModel std_block() { return build_block({Rat(1, 2), Rat(2), Rat(2), Rat(3)}); }

}  // namespace

TEST_CASE("zero payoff decomposes at zero cost") {
    BlockModel block = std_block();
    auto dec = min_l1_decomposition(block.S, RandomVariable::zero(block.space));
    CHECK(dec.cost == 0);
    CHECK(dec.u == RandomVariable::zero(block.space));
    CHECK(dec.v == RandomVariable::zero(block.space));
    CHECK(dec.certificate_ok());
}

TEST_CASE("block payoff: optimum between M/24 and M, matches the oracle") {
    BlockModel block = std_block();
    auto dec = min_l1_decomposition(block.S, block.f);
    const Rat M = block.params.M;
    CHECK(dec.cost >= M / 24);
    CHECK(dec.cost <= M);  // canonical pair is feasible at cost M
    std::string why;
    CHECK_MESSAGE(dec.certificate_ok(&why), why);
    // Independent formulation: per-atom u constrained through the
    // orthogonal complement of the gains space.
    CHECK(dec.cost == oracle::min_l1_cost_by_complement(block.S, block.f));
    // Optimizer invariants.
    CHECK(dec.u == stochastic_integral(dec.strategy, block.S));
    CHECK(dec.v == evaluate_static(dec.claim, block.S));
    for (int a = 0; a < 8; ++a) CHECK(dec.slack[a] >= 0);
    CHECK(dec.cost == moment(dec.u, 1) + moment(dec.v, 1));
}

TEST_CASE("decomposing S_2 itself costs no more than ||S_2||_1") {
    BlockModel block = std_block();
    RandomVariable s2 = block.S.slice(2);
    auto dec = min_l1_decomposition(block.S, s2);
    CHECK(dec.cost <= moment(s2, 1));
    CHECK(dec.certificate_ok());
    CHECK(dec.cost == oracle::min_l1_cost_by_complement(block.S, s2));
}

TEST_CASE("positive homogeneity and monotonicity of the minimal cost") {
    BlockModel block = std_block();
    auto base = min_l1_decomposition(block.S, block.f);
    for (const Rat& lambda : {Rat(2), Rat(1, 3)}) {
        auto scaled = min_l1_decomposition(block.S, lambda * block.f);
        CHECK(scaled.cost == lambda * base.cost);
    }
    // f <= f + |S_2| pointwise.
    auto larger = min_l1_decomposition(block.S, block.f + block.S.slice(2).abs());
    CHECK(base.cost <= larger.cost);
}

TEST_CASE("max_u_correlation: zero payoff, lemma bound, and vertex oracle") {
    for (const auto& params : sweep_grid()) {
        BlockModel block = build_block(params);
        CHECK(max_u_correlation(block.S, RandomVariable::zero(block.space)) == 0);
        Rat corr = max_u_correlation(block.S, block.f);
        CHECK(corr <= params.epsilon * params.M);
        CHECK(corr == oracle::max_u_correlation_by_vertices(block.S, block.f));
    }
}

TEST_CASE("max_u_correlation attains known feasible points") {
    BlockModel block = std_block();
    RandomVariable s2 = block.S.slice(2);  // element of U via H = (1, 1)
    Rat corr = max_u_correlation(block.S, s2);
    Rat feasible_value = moment(s2, 2) / moment(s2, 1);  // u = S_2 / ||S_2||_1
    CHECK(corr >= feasible_value);
    CHECK(corr == oracle::max_u_correlation_by_vertices(block.S, s2));
}

TEST_CASE("max_v_correlation closed form") {
    BlockModel block = std_block();
    CHECK(max_v_correlation(block.S, RandomVariable::constant(block.space, Rat(5, 7))) ==
          Rat(5, 7));

    // For the block payoff the largest conditional expectation sits at
    // S_2 = -a: M (eps/2)(a+1)/(2a) / P(S_2 = -a) = M (3/16)/(5/16).
    Rat corr = max_v_correlation(block.S, block.f);
    CHECK(corr == block.params.M * Rat(3, 5));
    CHECK(corr <= 8 * block.params.epsilon * block.params.M);

    // Payoff supported on {S_2 = b} only.
    std::vector<Rat> vals(8, Rat(0));
    for (int a = 0; a < 8; ++a)
        if (block.S.slice(2)[a] == Rat(3)) vals[a] = Rat(10);
    RandomVariable g(block.space, vals);
    CHECK(max_v_correlation(block.S, g) == 10);
}

TEST_CASE("per-cell pieces E[X | S_2 = s] for the standard block") {
    BlockModel block = std_block();
    auto ce = terminal_cond_expectations(block.S, block.X);
    CHECK(ce.at(Rat(2)) == Rat(4, 7));
    CHECK(ce.at(Rat(-2)) == Rat(4, 5));
    CHECK(ce.at(Rat(3)) == 0);
    CHECK(ce.at(Rat(-3)) == 0);
}

TEST_CASE("lower-bound chain ties the pieces together") {
    // (eps M^2)/2 = E[f^2] <= E[f u*] + E[f v*] at any optimizer, so the
    // correlation bounds force cost >= (eps M^2 / 2) / (8 eps M) = M/16.
    for (const auto& params : sweep_grid()) {
        BlockModel block = build_block(params);
        auto dec = min_l1_decomposition(block.S, block.f);
        Rat mu = max_u_correlation(block.S, block.f);
        Rat mv = max_v_correlation(block.S, block.f);
        Rat bound = params.epsilon * params.M * params.M / 2;
        CHECK(bound <= mu * moment(dec.u, 1) + mv * moment(dec.v, 1));
        Rat denom = mu > mv ? mu : mv;
        CHECK(dec.cost >= bound / denom);
    }
}

TEST_CASE("payoff on a different space is rejected") {
    BlockModel b1 = std_block();
    BlockModel b2 = build_block({Rat(1, 4), Rat(1), Rat(9, 4), Rat(11, 4)});
    CHECK_THROWS_AS(min_l1_decomposition(b1.S, b2.f), SpaceMismatch);
    CHECK_THROWS_AS(max_u_correlation(b1.S, b2.f), SpaceMismatch);
    CHECK_THROWS_AS(max_v_correlation(b1.S, b2.f), SpaceMismatch);
}
