#pragma once

#include <hedgelab/rational.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hedgelab {

struct MalformedProgram : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Relation { LessEq, Equal, GreaterEq };
enum class Sense { Minimize, Maximize };
enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPRow {
    std::vector<Rat> coeffs;
    Relation rel = Relation::LessEq;
    Rat rhs;
};

/// min/max c'x subject to rows and per-variable bounds. Bounds default to
/// free; finite bounds are handled internally as extra rows.
struct LinearProgram {
    Sense sense = Sense::Minimize;
    std::vector<Rat> objective;
    std::vector<LPRow> rows;
    std::vector<std::optional<Rat>> lower;  // empty vector = all free
    std::vector<std::optional<Rat>> upper;

    int num_vars() const { return static_cast<int>(objective.size()); }

    void add_row(std::vector<Rat> coeffs, Relation rel, Rat rhs) {
        rows.push_back({std::move(coeffs), rel, std::move(rhs)});
    }
    void set_nonneg(int j);
};

/// Dual values are reported for the normalized row list: the original rows
/// first, then one row per finite bound in variable order (lower before
/// upper).
struct LPSolution {
    LPStatus status = LPStatus::Infeasible;
    std::vector<Rat> primal;
    std::vector<Rat> dual;
    Rat objective;
};

/// Exact simplex with Bland's rule; deterministic.
LPSolution solve(const LinearProgram& lp);

/// Re-checks the primal/dual certificate with plain rational arithmetic:
/// feasibility, dual sign conditions, reduced costs, complementary
/// slackness, and zero duality gap. Independent of the solver's internals.
bool verify_certificate(const LinearProgram& lp, const LPSolution& sol,
                        std::string* why = nullptr);

/// Plain-text tabular dump, values as "num/den", for external cross-checks.
std::string dump_program(const LinearProgram& lp);

}  // namespace hedgelab
