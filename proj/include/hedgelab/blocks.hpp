#pragma once

#include <hedgelab/decompose.hpp>
#include <hedgelab/market.hpp>

#include <optional>
#include <string>
#include <vector>

namespace hedgelab {

struct InvalidParams : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parameters of one three-period block: S_1 = +-1, an independent
/// Bernoulli(epsilon) flag X revealed at t=1, terminal prices +-a on
/// A~ = {S_1 = 1} u {X = 1} and +-b off it, payoff f = M X 1{S_1 = -1}.
struct BlockParams {
    Rat epsilon;  // in (0, 1/2]
    Rat M;        // > 0
    Rat a;        // in [2, 3]
    Rat b;        // in [2, 3], b != a

    void validate() const;
};

// One of the eight block atoms: (sign of S_1, X, sign of S_2).
struct BlockAtom {
    int s1 = 1;       // +-1
    int x = 0;        // 0/1
    int s2_sign = 1;  // +-1

    bool in_a() const { return s1 == 1; }
    bool in_a_tilde() const { return s1 == 1 || x == 1; }
    std::string label(int block_index = 0) const;
};

struct BlockModel {
    BlockParams params;
    SpacePtr space;  // 8 atoms, filtration F0 trivial, F1 = sigma(S1,X), F2 full
    std::vector<BlockAtom> atoms;
    PriceProcess S;
    RandomVariable X;
    std::vector<int> A;        // {S_1 = 1}
    std::vector<int> A_tilde;  // A u {X = 1}
    RandomVariable f;
    PredictableStrategy canonical_H;
    StaticClaim canonical_h;
};

BlockModel build_block(const BlockParams& params);

/// The digital-plus-hedge pair: H = (-M/2, 0), h(+-a) = M/2, h(+-b) = -M/2.
/// Reconstructs f exactly.
std::pair<PredictableStrategy, StaticClaim> canonical_decomposition(const BlockModel& block);

struct CheckItem {
    std::string name;
    bool pass = false;
    bool hard = true;  // soft items are reported but do not fail the block
    std::string detail;
};

struct BlockReport {
    std::vector<CheckItem> items;
    Rat cost;          // exact LP minimum of ||u||_1 + ||v||_1
    Rat max_u_corr;    // sup E[fu] over ||u||_1 <= 1
    Rat max_v_corr;    // max_s E[f | S_2 = s]
    bool pass = true;  // all hard items

    void add(std::string name, bool ok, std::string detail = "", bool hard = true);
};

/// Runs every exact identity and bound of the single-block analysis,
/// including the LP lower bound (hard at M/24, reported at M/16).
BlockReport verify_block(const BlockModel& block);

/// Parameter grid spanning the corners and interior of the admissible box.
std::vector<BlockParams> sweep_grid();

/// Verifies every grid block; parallel across blocks, results in grid order.
std::vector<BlockReport> verify_sweep(const std::vector<BlockParams>& grid);

nlohmann::json block_to_json(const BlockModel& block);

}  // namespace hedgelab
