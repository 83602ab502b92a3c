#pragma once

#include <hedgelab/probspace.hpp>

#include <map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace hedgelab {

struct PredictabilityViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AdaptednessViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MissingTerminalValue : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Adapted price process: one slice per time index, each constant on the
/// cells of its partition.
class PriceProcess {
public:
    PriceProcess(SpacePtr space, std::vector<RandomVariable> slices);

    const SpacePtr& space() const { return space_; }
    int horizon() const { return static_cast<int>(slices_.size()) - 1; }
    const RandomVariable& slice(int t) const { return slices_.at(t); }
    const RandomVariable& terminal() const { return slices_.back(); }

private:
    SpacePtr space_;
    std::vector<RandomVariable> slices_;
};

/// Position held over (t-1, t] for t = 1..T, constant on each (t-1)-cell.
class PredictableStrategy {
public:
    PredictableStrategy(SpacePtr space, std::vector<RandomVariable> positions);

    const SpacePtr& space() const { return space_; }
    int steps() const { return static_cast<int>(positions_.size()); }
    // Position over (t-1, t], t in 1..steps().
    const RandomVariable& position(int t) const { return positions_.at(t - 1); }

private:
    SpacePtr space_;
    std::vector<RandomVariable> positions_;
};

/// Payoff of a European claim as a map terminal price -> payout.
class StaticClaim {
public:
    StaticClaim() = default;
    explicit StaticClaim(std::map<Rat, Rat> payoff) : payoff_(std::move(payoff)) {}

    void set(const Rat& price, const Rat& payout) { payoff_[price] = payout; }
    const std::map<Rat, Rat>& payoff_map() const { return payoff_; }

    const Rat& at(const Rat& price) const;

private:
    std::map<Rat, Rat> payoff_;
};

/// (H . S)_T = sum_t H_t (S_t - S_{t-1}).
RandomVariable stochastic_integral(const PredictableStrategy& H, const PriceProcess& S);

/// h(S_T) atomwise; every attained terminal value must be in the map.
RandomVariable evaluate_static(const StaticClaim& h, const PriceProcess& S);

struct MartingaleReport {
    struct Step {
        int t = 0;
        bool pass = false;
    };
    std::vector<Step> steps;
    bool pass = true;
};

/// Exact check of E[S_t | F_{t-1}] = S_{t-1} for every t.
MartingaleReport verify_martingale(const PriceProcess& S);

/// sigma(S_T) as a partition: atoms grouped by exact terminal value.
Partition terminal_partition(const PriceProcess& S);

nlohmann::json strategy_to_json(const PredictableStrategy& H);
PredictableStrategy strategy_from_json(const nlohmann::json& j, SpacePtr space);
nlohmann::json claim_to_json(const StaticClaim& h);
StaticClaim claim_from_json(const nlohmann::json& j);
nlohmann::json process_to_json(const PriceProcess& S);
PriceProcess process_from_json(const nlohmann::json& j, SpacePtr space);

}  // namespace hedgelab
