#include <hedgelab/decompose.hpp>

#include <stdexcept>

namespace hedgelab {

namespace {

// LP columns for the dynamic leg: one free variable per cell of the
// (t-1)-partition for each trading step t. u(omega) is linear in these.
struct StrategyColumns {
    // var_index[t-1][cell] -> LP column
    std::vector<std::vector<int>> var_index;
    int count = 0;

    explicit StrategyColumns(const FiniteFilteredSpace& space, int first_col) {
        for (int t = 1; t <= space.horizon(); ++t) {
            std::vector<int> cells(space.partition(t - 1).size());
            for (int c = 0; c < static_cast<int>(cells.size()); ++c)
                cells[c] = first_col + count++;
            var_index.push_back(std::move(cells));
        }
    }

    // Adds the coefficients of u(atom) into a row.
    void add_integral_coeffs(const PriceProcess& S, int atom, std::vector<Rat>& row,
                             const Rat& scale) const {
        const auto& space = *S.space();
        for (int t = 1; t <= space.horizon(); ++t) {
            Rat incr = S.slice(t)[atom] - S.slice(t - 1)[atom];
            if (incr == 0) continue;
            row[var_index[t - 1][space.cell_of(atom, t - 1)]] += scale * incr;
        }
    }

    PredictableStrategy extract(const PriceProcess& S, const std::vector<Rat>& primal) const {
        const auto& space = S.space();
        std::vector<RandomVariable> positions;
        for (int t = 1; t <= space->horizon(); ++t) {
            std::vector<Rat> vals(space->num_atoms());
            for (int a = 0; a < space->num_atoms(); ++a)
                vals[a] = primal[var_index[t - 1][space->cell_of(a, t - 1)]];
            positions.emplace_back(space, std::move(vals));
        }
        return PredictableStrategy(space, std::move(positions));
    }
};

}  // namespace

DecompositionResult min_l1_decomposition(const PriceProcess& S, const RandomVariable& f) {
    if (f.space() != S.space()) throw SpaceMismatch("payoff on a different space");
    const auto& space = *S.space();
    const int n_atoms = space.num_atoms();
    const Partition term = terminal_partition(S);
    const int n_term = static_cast<int>(term.size());

    StrategyColumns strat(space, 0);
    const int claim0 = strat.count;              // one free var per terminal value
    const int uplus0 = claim0 + n_term;          // |u| split, per atom
    const int uminus0 = uplus0 + n_atoms;
    const int vplus0 = uminus0 + n_atoms;        // |h| split, per terminal cell
    const int vminus0 = vplus0 + n_term;
    const int n_vars = vminus0 + n_term;

    std::vector<int> term_cell(n_atoms);
    for (int c = 0; c < n_term; ++c)
        for (int atom : term[c]) term_cell[atom] = c;

    LinearProgram lp;
    lp.sense = Sense::Minimize;
    lp.objective.assign(n_vars, Rat(0));
    for (int a = 0; a < n_atoms; ++a) {
        lp.objective[uplus0 + a] = space.prob(a);
        lp.objective[uminus0 + a] = space.prob(a);
    }
    for (int c = 0; c < n_term; ++c) {
        Rat mass = space.event_probability(term[c]);
        lp.objective[vplus0 + c] = mass;
        lp.objective[vminus0 + c] = mass;
    }
    lp.lower.assign(n_vars, std::nullopt);
    lp.upper.assign(n_vars, std::nullopt);
    for (int j = uplus0; j < n_vars; ++j) lp.lower[j] = Rat(0);

    // u(atom) - uplus + uminus = 0
    for (int a = 0; a < n_atoms; ++a) {
        std::vector<Rat> row(n_vars, Rat(0));
        strat.add_integral_coeffs(S, a, row, Rat(1));
        row[uplus0 + a] = -1;
        row[uminus0 + a] = 1;
        lp.add_row(std::move(row), Relation::Equal, Rat(0));
    }
    // h(cell) - vplus + vminus = 0
    for (int c = 0; c < n_term; ++c) {
        std::vector<Rat> row(n_vars, Rat(0));
        row[claim0 + c] = 1;
        row[vplus0 + c] = -1;
        row[vminus0 + c] = 1;
        lp.add_row(std::move(row), Relation::Equal, Rat(0));
    }
    // u(atom) + h(cell(atom)) >= f(atom)
    for (int a = 0; a < n_atoms; ++a) {
        std::vector<Rat> row(n_vars, Rat(0));
        strat.add_integral_coeffs(S, a, row, Rat(1));
        row[claim0 + term_cell[a]] += 1;
        lp.add_row(std::move(row), Relation::GreaterEq, f[a]);
    }

    LPSolution sol = solve(lp);
    if (sol.status != LPStatus::Optimal)
        throw std::logic_error("decomposition LP must be feasible and bounded");

    PredictableStrategy H = strat.extract(S, sol.primal);
    StaticClaim h;
    for (int c = 0; c < n_term; ++c) h.set(S.terminal()[term[c][0]], sol.primal[claim0 + c]);

    RandomVariable u = stochastic_integral(H, S);
    RandomVariable v = evaluate_static(h, S);
    RandomVariable slack = u + v - f;
    for (int a = 0; a < n_atoms; ++a)
        if (slack[a] < 0) throw std::logic_error("negative slack in LP optimizer");
    Rat cost = moment(u, 1) + moment(v, 1);
    if (cost != sol.objective)
        throw std::logic_error("LP objective disagrees with ||u||_1 + ||v||_1");

    return DecompositionResult{cost,
                               std::move(H),
                               std::move(h),
                               std::move(u),
                               std::move(v),
                               std::move(slack),
                               std::move(lp),
                               std::move(sol)};
}

Rat max_u_correlation(const PriceProcess& S, const RandomVariable& f) {
    if (f.space() != S.space()) throw SpaceMismatch("payoff on a different space");
    const auto& space = *S.space();
    const int n_atoms = space.num_atoms();

    StrategyColumns strat(space, 0);
    const int tplus0 = strat.count;
    const int tminus0 = tplus0 + n_atoms;
    const int n_vars = tminus0 + n_atoms;

    LinearProgram lp;
    lp.sense = Sense::Maximize;
    lp.objective.assign(n_vars, Rat(0));
    lp.lower.assign(n_vars, std::nullopt);
    lp.upper.assign(n_vars, std::nullopt);
    for (int j = tplus0; j < n_vars; ++j) lp.lower[j] = Rat(0);

    // objective: E[f u] = sum_a p_a f_a u(a)
    for (int a = 0; a < n_atoms; ++a) {
        if (f[a] == 0) continue;
        strat.add_integral_coeffs(S, a, lp.objective, space.prob(a) * f[a]);
    }
    // u(a) - t+ + t- = 0, and sum p (t+ + t-) <= 1
    for (int a = 0; a < n_atoms; ++a) {
        std::vector<Rat> row(n_vars, Rat(0));
        strat.add_integral_coeffs(S, a, row, Rat(1));
        row[tplus0 + a] = -1;
        row[tminus0 + a] = 1;
        lp.add_row(std::move(row), Relation::Equal, Rat(0));
    }
    std::vector<Rat> ball(n_vars, Rat(0));
    for (int a = 0; a < n_atoms; ++a) {
        ball[tplus0 + a] = space.prob(a);
        ball[tminus0 + a] = space.prob(a);
    }
    lp.add_row(std::move(ball), Relation::LessEq, Rat(1));

    LPSolution sol = solve(lp);
    if (sol.status != LPStatus::Optimal)
        throw std::logic_error("correlation LP must be feasible and bounded");
    std::string why;
    if (!verify_certificate(lp, sol, &why))
        throw std::logic_error("correlation LP certificate rejected: " + why);
    return sol.objective;
}

std::map<Rat, Rat> terminal_cond_expectations(const PriceProcess& S, const RandomVariable& f) {
    if (f.space() != S.space()) throw SpaceMismatch("payoff on a different space");
    const auto& space = *S.space();
    std::map<Rat, Rat> out;
    for (const auto& cell : terminal_partition(S)) {
        Rat mass(0), weighted(0);
        for (int a : cell) {
            mass += space.prob(a);
            weighted += space.prob(a) * f[a];
        }
        out[S.terminal()[cell[0]]] = weighted / mass;
    }
    return out;
}

Rat max_v_correlation(const PriceProcess& S, const RandomVariable& f) {
    Rat best(0);
    for (const auto& [value, ce] : terminal_cond_expectations(S, f)) {
        Rat mag = rat_abs(ce);
        if (mag > best) best = mag;
    }
    return best;
}

}  // namespace hedgelab
