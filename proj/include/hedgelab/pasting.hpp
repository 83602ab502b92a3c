#pragma once

#include <hedgelab/blocks.hpp>

#include <vector>

namespace hedgelab {

struct InvalidDepth : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IndexOutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Per-index block parameters of the pasted construction:
/// eps_n = 2^{-n^2}, M_n = 2^n, block mass 2^{-n}. The terminal levels
/// a_n = 2 + 1/4n and b_n = 3 - 1/4n are pairwise distinct across blocks
/// (a_n < 9/4 < 11/4 <= b_m) and within each family.
struct PastingSchedule {
    BlockParams block_params(int n) const;
    Rat block_mass(int n) const { return pow2_neg(static_cast<unsigned>(n)); }
};

inline PastingSchedule default_schedule() { return {}; }

/// Truncated disjoint union of N blocks plus a dummy atom of mass 2^{-N}
/// carrying S = 0 and g = 0, so the block masses 2^{-n} appear verbatim
/// while the total mass stays exactly 1.
struct PastedModel {
    int depth = 0;
    PastingSchedule schedule;
    std::vector<BlockModel> blocks;  // standalone copies, for per-block LPs
    SpacePtr space;                  // 8N + 1 atoms
    PriceProcess S;
    std::vector<std::vector<int>> block_events;  // Omega_1..Omega_N, then dummy
    RandomVariable g_full;
    std::vector<RandomVariable> g_partials;  // g_m for m = 0..N
};

PastedModel paste(const PastingSchedule& schedule, int depth);

struct ConvergenceRow {
    int m = 0;
    int p = 0;
    Rat computed;        // E[|g_full - g_m|^p] atomwise on the model
    Rat closed_form;     // (1/2) sum_{n=m+1}^N 2^{-n(n+1-p)}
    bool equal = false;
    Rat tail_lo, tail_hi;  // brackets for the omitted infinite tail
};

std::vector<ConvergenceRow> convergence_table(const PastedModel& model, int p, int m_max);

/// Global (H, h) with H = sum_{n<=m} H^n 1_{Omega_n} and h matching h^n on
/// {+-a_n, +-b_n} for n <= m, zero on the other terminal values.
/// Reconstructs g_m exactly.
std::pair<PredictableStrategy, StaticClaim> g_partial_decomposition(const PastedModel& model,
                                                                    int m);

struct DivergenceRow {
    int depth = 0;
    Rat global_cost;        // LP minimum for g_full on the pasted model
    Rat sum_block_costs;    // sum_n 2^{-n} * per-block LP minimum
    bool decoupled = false; // the two agree exactly
    Rat bound24;            // depth / 24
    Rat bound16;            // depth / 16
    bool pass24 = false;
};

DivergenceRow divergence_check(const PastedModel& model);

nlohmann::json pasted_to_json(const PastedModel& model);

}  // namespace hedgelab
