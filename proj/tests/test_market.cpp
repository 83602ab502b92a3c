#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <hedgelab/blocks.hpp>
#include <hedgelab/market.hpp>
#include <hedgelab/pasting.hpp>

#include <nlohmann/json.hpp>

using namespace hedgelab;

namespace {

BlockModel std_block() { return build_block({Rat(1, 2), Rat(2), Rat(2), Rat(3)}); }

}  // namespace

TEST_CASE("zero strategy integrates to zero") {
    BlockModel block = std_block();
    PredictableStrategy zero(block.space, {RandomVariable::zero(block.space),
                                           RandomVariable::zero(block.space)});
    CHECK(stochastic_integral(zero, block.S) == RandomVariable::zero(block.space));
}

TEST_CASE("canonical hedge leg equals -(M/2) S_1") {
    BlockModel block = std_block();
    PredictableStrategy H(block.space, {RandomVariable::constant(block.space, Rat(-1)),
                                        RandomVariable::zero(block.space)});
    RandomVariable u = stochastic_integral(H, block.S);
    for (int a = 0; a < 8; ++a) CHECK(u[a] == -block.S.slice(1)[a]);
}

TEST_CASE("gains of (0, 1) have zero time-0 conditional expectation") {
    BlockModel block = std_block();
    PredictableStrategy H(block.space, {RandomVariable::zero(block.space),
                                        RandomVariable::constant(block.space, Rat(1))});
    RandomVariable u = stochastic_integral(H, block.S);
    CHECK(u == block.S.slice(2) - block.S.slice(1));
    CHECK(cond_expectation(u, 0) == RandomVariable::zero(block.space));
}

TEST_CASE("predictability is enforced") {
    BlockModel block = std_block();
    // A position for the first interval that already depends on S_1.
    CHECK_THROWS_AS(PredictableStrategy(block.space, {block.S.slice(1),
                                                      RandomVariable::zero(block.space)}),
                    PredictabilityViolation);
}

TEST_CASE("static claim evaluation") {
    BlockModel block = std_block();
    StaticClaim constant;
    for (const Rat& s : {Rat(2), Rat(-2), Rat(3), Rat(-3)}) constant.set(s, Rat(7));
    CHECK(evaluate_static(constant, block.S) ==
          RandomVariable::constant(block.space, Rat(7)));

    // The digital leg: +M/2 on |S_2| = a, -M/2 on |S_2| = b.
    RandomVariable digital = evaluate_static(block.canonical_h, block.S);
    for (int a = 0; a < 8; ++a)
        CHECK(digital[a] == (rat_abs(block.S.slice(2)[a]) == Rat(2) ? Rat(1) : Rat(-1)));

    StaticClaim identity;
    for (const Rat& s : {Rat(2), Rat(-2), Rat(3), Rat(-3)}) identity.set(s, s);
    CHECK(evaluate_static(identity, block.S) == block.S.slice(2));

    StaticClaim partial;
    partial.set(Rat(2), Rat(1));
    CHECK_THROWS_AS(evaluate_static(partial, block.S), MissingTerminalValue);
}

TEST_CASE("martingale verification") {
    BlockModel block = std_block();
    CHECK(verify_martingale(block.S).pass);

    PriceProcess constant(block.space, {RandomVariable::constant(block.space, Rat(1)),
                                        RandomVariable::constant(block.space, Rat(1)),
                                        RandomVariable::constant(block.space, Rat(1))});
    CHECK(verify_martingale(constant).pass);

    // Perturbing the terminal conditional law breaks the t=2 step only.
    std::vector<Rat> bent = block.S.slice(2).values();
    for (int a = 0; a < 8; ++a) bent[a] += block.S.slice(2)[a] > 0 ? Rat(1, 100) : Rat(0);
    PriceProcess perturbed(block.space,
                           {block.S.slice(0), block.S.slice(1),
                            RandomVariable(block.space, bent)});
    auto report = verify_martingale(perturbed);
    CHECK_FALSE(report.pass);
    CHECK(report.steps[0].pass);
    CHECK_FALSE(report.steps[1].pass);
}

TEST_CASE("terminal partition") {
    BlockModel block = std_block();
    CHECK(terminal_partition(block.S).size() == 4);

    PriceProcess constant(block.space, {RandomVariable::zero(block.space),
                                        RandomVariable::zero(block.space),
                                        RandomVariable::zero(block.space)});
    CHECK(terminal_partition(constant).size() == 1);

    PastedModel pasted = paste(default_schedule(), 2);
    CHECK(terminal_partition(pasted.S).size() == 9);  // 4 per block + {0}
}

TEST_CASE("zero-expectation and bilinearity of the integral") {
    BlockModel block = std_block();
    std::vector<PredictableStrategy> hs;
    hs.emplace_back(block.space, std::vector<RandomVariable>{
                                     RandomVariable::constant(block.space, Rat(3)),
                                     cond_expectation(block.X, 1)});
    hs.emplace_back(block.space, std::vector<RandomVariable>{
                                     RandomVariable::constant(block.space, Rat(-2, 5)),
                                     cond_expectation(block.S.slice(1), 1)});
    for (const auto& h : hs) CHECK(expectation(stochastic_integral(h, block.S)) == 0);

    // Linearity in H.
    std::vector<RandomVariable> sum_pos;
    for (int t = 1; t <= 2; ++t)
        sum_pos.push_back(hs[0].position(t) + Rat(4) * hs[1].position(t));
    PredictableStrategy combined(block.space, sum_pos);
    CHECK(stochastic_integral(combined, block.S) ==
          stochastic_integral(hs[0], block.S) +
              Rat(4) * stochastic_integral(hs[1], block.S));
}

TEST_CASE("eq reconstruction: dynamic plus digital equals f") {
    for (const auto& params : sweep_grid()) {
        BlockModel block = build_block(params);
        auto [H, h] = canonical_decomposition(block);
        CHECK(stochastic_integral(H, block.S) + evaluate_static(h, block.S) == block.f);
    }
}

TEST_CASE("strategy and claim json round-trip") {
    BlockModel block = std_block();
    auto js = strategy_to_json(block.canonical_H);
    auto hs = strategy_from_json(js, block.space);
    CHECK(strategy_to_json(hs) == js);
    auto jc = claim_to_json(block.canonical_h);
    StaticClaim hc = claim_from_json(jc);
    CHECK(claim_to_json(hc) == jc);
    CHECK(evaluate_static(hc, block.S) == evaluate_static(block.canonical_h, block.S));
}
