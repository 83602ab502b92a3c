#include <hedgelab/pasting.hpp>

#include <nlohmann/json.hpp>

namespace hedgelab {

namespace {

// 2^e for any integer e.
Rat pow2_signed(long e) {
    if (e >= 0) {
        mpz_class num(1);
        num <<= static_cast<unsigned>(e);
        return Rat(num);
    }
    return pow2_neg(static_cast<unsigned>(-e));
}

}  // namespace

BlockParams PastingSchedule::block_params(int n) const {
    if (n < 1) throw IndexOutOfRange("block index must be >= 1");
    return BlockParams{pow2_neg(static_cast<unsigned>(n) * static_cast<unsigned>(n)),
                       pow2_signed(n), Rat(2) + Rat(1, 4 * n), Rat(3) - Rat(1, 4 * n)};
}

PastedModel paste(const PastingSchedule& schedule, int depth) {
    if (depth < 1) throw InvalidDepth("depth must be >= 1");

    std::vector<BlockModel> blocks;
    for (int n = 1; n <= depth; ++n) blocks.push_back(build_block(schedule.block_params(n)));

    std::vector<std::string> labels;
    std::vector<Rat> probs;
    Partition f0, f1, f2;
    std::vector<std::vector<int>> block_events;
    std::vector<Rat> s1_vals, s2_vals, g_vals;

    for (int n = 1; n <= depth; ++n) {
        const BlockModel& block = blocks[n - 1];
        Rat mass = schedule.block_mass(n);
        int base = static_cast<int>(labels.size());
        std::vector<int> event;
        for (int i = 0; i < 8; ++i) {
            labels.push_back(block.atoms[i].label(n));
            probs.push_back(mass * block.space->prob(i));
            s1_vals.push_back(block.S.slice(1)[i]);
            s2_vals.push_back(block.S.slice(2)[i]);
            g_vals.push_back(block.f[i]);
            event.push_back(base + i);
            f2.push_back({base + i});
        }
        f0.push_back(event);
        for (const auto& cell : block.space->partition(1)) {
            std::vector<int> shifted;
            for (int i : cell) shifted.push_back(base + i);
            f1.push_back(std::move(shifted));
        }
        block_events.push_back(std::move(event));
    }
    int dummy = static_cast<int>(labels.size());
    labels.push_back("dummy");
    probs.push_back(schedule.block_mass(depth));  // residual mass 2^{-N}
    f0.push_back({dummy});
    f1.push_back({dummy});
    f2.push_back({dummy});
    s1_vals.push_back(Rat(0));
    s2_vals.push_back(Rat(0));
    g_vals.push_back(Rat(0));
    block_events.push_back({dummy});

    SpacePtr space = make_space(labels, probs, {f0, f1, f2});
    PriceProcess S(space, {RandomVariable::zero(space), RandomVariable(space, s1_vals),
                           RandomVariable(space, s2_vals)});
    RandomVariable g_full(space, g_vals);

    // Re-verify each block inside the pasted space: the enlarged filtration
    // must not disturb the martingale property or the conditional laws.
    if (!verify_martingale(S).pass)
        throw std::logic_error("pasted price process lost the martingale property");
    for (int n = 1; n <= depth; ++n) {
        const BlockModel& block = blocks[n - 1];
        Rat mass = schedule.block_mass(n);
        for (int i = 0; i < 8; ++i) {
            int atom = block_events[n - 1][i];
            if (space->prob(atom) != mass * block.space->prob(i))
                throw std::logic_error("pasted atom mass mismatch");
            if (g_full[atom] != block.f[i])
                throw std::logic_error("pasted payoff restriction mismatch");
        }
    }

    std::vector<RandomVariable> g_partials;
    for (int m = 0; m <= depth; ++m) {
        std::vector<Rat> vals(space->num_atoms(), Rat(0));
        for (int n = 1; n <= m; ++n)
            for (int i = 0; i < 8; ++i)
                vals[block_events[n - 1][i]] = blocks[n - 1].f[i];
        g_partials.emplace_back(space, std::move(vals));
    }

    return PastedModel{depth,
                       schedule,
                       std::move(blocks),
                       std::move(space),
                       std::move(S),
                       std::move(block_events),
                       std::move(g_full),
                       std::move(g_partials)};
}

std::vector<ConvergenceRow> convergence_table(const PastedModel& model, int p, int m_max) {
    if (p < 1) throw InvalidRange("p must be >= 1");
    if (m_max < 0 || m_max >= model.depth)
        throw InvalidRange("m_max must lie in [0, depth)");

    std::vector<ConvergenceRow> rows;
    for (int m = 0; m <= m_max; ++m) {
        ConvergenceRow row;
        row.m = m;
        row.p = p;
        row.computed = moment(model.g_full - model.g_partials[m], p);
        Rat sum(0);
        for (int n = m + 1; n <= model.depth; ++n)
            sum += pow2_signed(-static_cast<long>(n) * (n + 1 - p));
        row.closed_form = sum / 2;
        row.equal = row.computed == row.closed_form;

        // Bracket for the tail beyond the truncation depth: successive terms
        // shrink by at least 2^{-(2n+2-p)}.
        long n1 = model.depth + 1;
        Rat t1 = pow2_signed(-n1 * (n1 + 1 - p)) / 2;
        row.tail_lo = t1;
        long decay = 2 * n1 + 2 - p;
        if (decay > 0) {
            Rat r = pow2_signed(-decay);
            row.tail_hi = t1 / (Rat(1) - r);
        } else {
            row.tail_hi = t1;  // not bracketable for large p; depth too small
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::pair<PredictableStrategy, StaticClaim> g_partial_decomposition(const PastedModel& model,
                                                                    int m) {
    if (m < 0 || m > model.depth) throw IndexOutOfRange("m must lie in [0, depth]");
    const auto& space = model.space;

    std::vector<Rat> pos1(space->num_atoms(), Rat(0));
    for (int n = 1; n <= m; ++n) {
        Rat h1 = -model.blocks[n - 1].params.M / 2;
        for (int atom : model.block_events[n - 1]) pos1[atom] = h1;
    }
    PredictableStrategy H(space, {RandomVariable(space, pos1), RandomVariable::zero(space)});

    StaticClaim h;
    h.set(Rat(0), Rat(0));  // dummy block terminal value
    for (int n = 1; n <= model.depth; ++n) {
        const BlockParams& P = model.blocks[n - 1].params;
        Rat payout = n <= m ? P.M / 2 : Rat(0);
        h.set(P.a, payout);
        h.set(-P.a, payout);
        h.set(P.b, -payout);
        h.set(-P.b, -payout);
    }

    RandomVariable rebuilt = stochastic_integral(H, model.S) + evaluate_static(h, model.S);
    if (!(rebuilt == model.g_partials[m]))
        throw std::logic_error("semi-static pair fails to reconstruct g_m");
    return {std::move(H), std::move(h)};
}

DivergenceRow divergence_check(const PastedModel& model) {
    DivergenceRow row;
    row.depth = model.depth;

    DecompositionResult global = min_l1_decomposition(model.S, model.g_full);
    std::string why;
    if (!global.certificate_ok(&why))
        throw std::logic_error("global decomposition certificate rejected: " + why);
    row.global_cost = global.cost;

    Rat sum(0);
    for (int n = 1; n <= model.depth; ++n) {
        const BlockModel& block = model.blocks[n - 1];
        DecompositionResult dec = min_l1_decomposition(block.S, block.f);
        if (!dec.certificate_ok(&why))
            throw std::logic_error("block decomposition certificate rejected: " + why);
        sum += model.schedule.block_mass(n) * dec.cost;
    }
    row.sum_block_costs = sum;
    row.decoupled = row.global_cost == row.sum_block_costs;
    row.bound24 = rat(model.depth, 24);
    row.bound16 = rat(model.depth, 16);
    row.pass24 = row.global_cost >= row.bound24;
    return row;
}

nlohmann::json pasted_to_json(const PastedModel& model) {
    nlohmann::json j;
    j["depth"] = model.depth;
    j["space"] = space_to_json(*model.space);
    j["S"] = process_to_json(model.S);
    j["g_full"] = rv_to_json(model.g_full);
    nlohmann::json partials = nlohmann::json::array();
    for (const auto& g : model.g_partials) partials.push_back(rv_to_json(g));
    j["g_partials"] = partials;
    return j;
}

}  // namespace hedgelab
