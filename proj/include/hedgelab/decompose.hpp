#pragma once

#include <hedgelab/lp.hpp>
#include <hedgelab/market.hpp>

#include <map>

namespace hedgelab {

/// Optimizer of min ||u||_1 + ||v||_1 over u = (H.S)_T, v = h(S_T) with
/// u + v >= f, together with the LP certificate that proves optimality.
struct DecompositionResult {
    Rat cost;
    PredictableStrategy strategy;
    StaticClaim claim;
    RandomVariable u;
    RandomVariable v;
    RandomVariable slack;  // u + v - f, nonnegative atomwise
    LinearProgram program;
    LPSolution lp_solution;

    bool certificate_ok(std::string* why = nullptr) const {
        return verify_certificate(program, lp_solution, why);
    }
};

/// Exact minimum of ||u||_1 + ||v||_1 subject to u + v >= f. Always
/// feasible on a finite space (v = max f constant works). S must be a
/// martingale so that every stochastic integral is an admissible gain.
DecompositionResult min_l1_decomposition(const PriceProcess& S, const RandomVariable& f);

/// sup { E[fu] : u = (H.S)_T, ||u||_1 <= 1 }, exact, via LP.
/// The certificate is re-verified before returning.
Rat max_u_correlation(const PriceProcess& S, const RandomVariable& f);

/// sup { E[fv] / ||v||_1 : v sigma(S_T)-measurable } for f >= 0, computed
/// in closed form as the largest conditional expectation E[f | S_T = s].
/// For general f the absolute conditional expectations are used.
Rat max_v_correlation(const PriceProcess& S, const RandomVariable& f);

/// E[f | S_T = s] per attained terminal value, exact.
std::map<Rat, Rat> terminal_cond_expectations(const PriceProcess& S, const RandomVariable& f);

}  // namespace hedgelab
