#include <hedgelab/market.hpp>

#include <map>

#include <nlohmann/json.hpp>

namespace hedgelab {

namespace {

void require_constant_on_cells(const RandomVariable& rv, int t, const char* what) {
    const auto& space = *rv.space();
    for (const auto& cell : space.partition(t)) {
        for (size_t k = 1; k < cell.size(); ++k) {
            if (rv[cell[k]] != rv[cell[0]])
                throw PredictabilityViolation(std::string(what) +
                                              " not constant on cell at t=" + std::to_string(t));
        }
    }
}

}  // namespace

PriceProcess::PriceProcess(SpacePtr space, std::vector<RandomVariable> slices)
    : space_(std::move(space)), slices_(std::move(slices)) {
    if (slices_.empty()) throw std::invalid_argument("price process needs at least one slice");
    if (static_cast<int>(slices_.size()) != space_->horizon() + 1)
        throw std::invalid_argument("slice count does not match filtration length");
    for (int t = 0; t < static_cast<int>(slices_.size()); ++t) {
        if (slices_[t].space() != space_) throw SpaceMismatch("price slice on wrong space");
        try {
            require_constant_on_cells(slices_[t], t, "price slice");
        } catch (const PredictabilityViolation& e) {
            throw AdaptednessViolation(e.what());
        }
    }
}

PredictableStrategy::PredictableStrategy(SpacePtr space, std::vector<RandomVariable> positions)
    : space_(std::move(space)), positions_(std::move(positions)) {
    if (static_cast<int>(positions_.size()) != space_->horizon())
        throw std::invalid_argument("position count must equal number of trading steps");
    for (int t = 1; t <= static_cast<int>(positions_.size()); ++t) {
        if (positions_[t - 1].space() != space_) throw SpaceMismatch("position on wrong space");
        require_constant_on_cells(positions_[t - 1], t - 1, "position");
    }
}

const Rat& StaticClaim::at(const Rat& price) const {
    auto it = payoff_.find(price);
    if (it == payoff_.end())
        throw MissingTerminalValue("claim has no payout for terminal price " + rat_str(price));
    return it->second;
}

RandomVariable stochastic_integral(const PredictableStrategy& H, const PriceProcess& S) {
    if (H.space() != S.space()) throw SpaceMismatch("strategy and price process on different spaces");
    RandomVariable acc = RandomVariable::zero(S.space());
    for (int t = 1; t <= S.horizon(); ++t) {
        RandomVariable incr = S.slice(t) - S.slice(t - 1);
        acc += H.position(t).hadamard(incr);
    }
    return acc;
}

RandomVariable evaluate_static(const StaticClaim& h, const PriceProcess& S) {
    const RandomVariable& terminal = S.terminal();
    std::vector<Rat> out(terminal.values().size());
    for (size_t a = 0; a < out.size(); ++a) out[a] = h.at(terminal[static_cast<int>(a)]);
    return RandomVariable(S.space(), std::move(out));
}

MartingaleReport verify_martingale(const PriceProcess& S) {
    MartingaleReport report;
    for (int t = 1; t <= S.horizon(); ++t) {
        bool ok = cond_expectation(S.slice(t), t - 1) == S.slice(t - 1);
        report.steps.push_back({t, ok});
        report.pass = report.pass && ok;
    }
    return report;
}

Partition terminal_partition(const PriceProcess& S) {
    const RandomVariable& terminal = S.terminal();
    std::map<Rat, std::vector<int>> groups;
    for (int a = 0; a < S.space()->num_atoms(); ++a) groups[terminal[a]].push_back(a);
    Partition part;
    for (auto& [value, cell] : groups) part.push_back(std::move(cell));
    return part;
}

nlohmann::json strategy_to_json(const PredictableStrategy& H) {
    nlohmann::json positions = nlohmann::json::array();
    for (int t = 1; t <= H.steps(); ++t) positions.push_back(rv_to_json(H.position(t)));
    return nlohmann::json{{"positions", positions}};
}

PredictableStrategy strategy_from_json(const nlohmann::json& j, SpacePtr space) {
    std::vector<RandomVariable> positions;
    for (const auto& p : j.at("positions")) positions.push_back(rv_from_json(p, space));
    return PredictableStrategy(std::move(space), std::move(positions));
}

nlohmann::json claim_to_json(const StaticClaim& h) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [price, payout] : h.payoff_map())
        pairs.push_back({rat_str(price), rat_str(payout)});
    return nlohmann::json{{"payoff", pairs}};
}

StaticClaim claim_from_json(const nlohmann::json& j) {
    std::map<Rat, Rat> payoff;
    for (const auto& pair : j.at("payoff"))
        payoff[parse_rat(pair.at(0).get<std::string>())] = parse_rat(pair.at(1).get<std::string>());
    return StaticClaim(std::move(payoff));
}

nlohmann::json process_to_json(const PriceProcess& S) {
    nlohmann::json slices = nlohmann::json::array();
    for (int t = 0; t <= S.horizon(); ++t) slices.push_back(rv_to_json(S.slice(t)));
    return nlohmann::json{{"slices", slices}};
}

PriceProcess process_from_json(const nlohmann::json& j, SpacePtr space) {
    std::vector<RandomVariable> slices;
    for (const auto& s : j.at("slices")) slices.push_back(rv_from_json(s, space));
    return PriceProcess(std::move(space), std::move(slices));
}

}  // namespace hedgelab
