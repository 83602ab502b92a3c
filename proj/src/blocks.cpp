#include <hedgelab/blocks.hpp>

#include <sstream>

#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hedgelab {

void BlockParams::validate() const {
    if (epsilon <= 0 || epsilon > Rat(1, 2))
        throw InvalidParams("epsilon must lie in (0, 1/2], got " + rat_str(epsilon));
    if (M <= 0) throw InvalidParams("M must be > 0, got " + rat_str(M));
    if (a < 2 || a > 3) throw InvalidParams("a must lie in [2, 3], got " + rat_str(a));
    if (b < 2 || b > 3) throw InvalidParams("b must lie in [2, 3], got " + rat_str(b));
    if (a == b) throw InvalidParams("a and b must be distinct");
}

std::string BlockAtom::label(int block_index) const {
    std::ostringstream os;
    if (block_index > 0) os << 'n' << block_index << ':';
    os << (s1 > 0 ? "s1+" : "s1-") << ":x" << x << ':' << (s2_sign > 0 ? "up" : "dn");
    return os.str();
}

BlockModel build_block(const BlockParams& params) {
    params.validate();

    std::vector<BlockAtom> atoms;
    std::vector<std::string> labels;
    std::vector<Rat> probs;
    std::vector<Rat> s1_vals, s2_vals, x_vals, f_vals;
    for (int s1 : {1, -1}) {
        for (int x : {0, 1}) {
            for (int sign : {1, -1}) {
                BlockAtom atom{s1, x, sign};
                Rat level = atom.in_a_tilde() ? params.a : params.b;
                // P(S_1) * P(X) * P(S_2 | F_1), the last from the martingale
                // condition: P(S_2 = +L | F_1) = (L + S_1) / 2L.
                Rat p_up = (level + s1) / (2 * level);
                Rat p = Rat(1, 2) * (x ? params.epsilon : Rat(1) - params.epsilon) *
                        (sign > 0 ? p_up : Rat(1) - p_up);
                atoms.push_back(atom);
                labels.push_back(atom.label());
                probs.push_back(p);
                s1_vals.push_back(Rat(s1));
                s2_vals.push_back(Rat(sign) * level);
                x_vals.push_back(Rat(x));
                f_vals.push_back(atom.x == 1 && !atom.in_a() ? params.M : Rat(0));
            }
        }
    }

    Partition f0{{0, 1, 2, 3, 4, 5, 6, 7}};
    Partition f1{{0, 1}, {2, 3}, {4, 5}, {6, 7}};  // sigma(S_1, X)
    Partition f2{{0}, {1}, {2}, {3}, {4}, {5}, {6}, {7}};
    SpacePtr space = make_space(labels, probs, {f0, f1, f2});

    PriceProcess S(space, {RandomVariable::zero(space), RandomVariable(space, s1_vals),
                           RandomVariable(space, s2_vals)});
    RandomVariable X(space, x_vals);
    RandomVariable f(space, f_vals);

    std::vector<int> A, A_tilde;
    for (int i = 0; i < 8; ++i) {
        if (atoms[i].in_a()) A.push_back(i);
        if (atoms[i].in_a_tilde()) A_tilde.push_back(i);
    }

    Rat half_m = params.M / 2;
    PredictableStrategy H(space, {RandomVariable::constant(space, -half_m),
                                  RandomVariable::zero(space)});
    StaticClaim h;
    h.set(params.a, half_m);
    h.set(-params.a, half_m);
    h.set(params.b, -half_m);
    h.set(-params.b, -half_m);

    return BlockModel{params,        space,        std::move(atoms), std::move(S),
                      std::move(X),  std::move(A), std::move(A_tilde), std::move(f),
                      std::move(H),  std::move(h)};
}

std::pair<PredictableStrategy, StaticClaim> canonical_decomposition(const BlockModel& block) {
    return {block.canonical_H, block.canonical_h};
}

void BlockReport::add(std::string name, bool ok, std::string detail, bool hard) {
    if (hard) pass = pass && ok;
    items.push_back({std::move(name), ok, hard, std::move(detail)});
}

namespace {

std::string vs(const Rat& got, const char* rel, const Rat& want) {
    return rat_str(got) + " " + rel + " " + rat_str(want);
}

}  // namespace

BlockReport verify_block(const BlockModel& block) {
    BlockReport report;
    const BlockParams& P = block.params;
    const auto& space = *block.space;

    bool nonneg = true;
    for (int a = 0; a < space.num_atoms(); ++a) nonneg = nonneg && block.f[a] >= 0;
    report.add("f >= 0 atomwise", nonneg);

    report.add("S martingale", verify_martingale(block.S).pass);

    // f = M(1_{A~} - 1_A) must agree with f = M X 1_{A^c} atomwise.
    bool formulas_agree = true;
    for (int i = 0; i < space.num_atoms(); ++i) {
        Rat via_events = P.M * (Rat(block.atoms[i].in_a_tilde() ? 1 : 0) -
                                Rat(block.atoms[i].in_a() ? 1 : 0));
        formulas_agree = formulas_agree && via_events == block.f[i];
    }
    report.add("f = M(1_{A~} - 1_A) = M X 1_{A^c}", formulas_agree);

    // Conditional probabilities on each F_1 cell.
    bool cond_ok = true;
    for (const auto& cell : space.partition(1)) {
        Rat mass(0), up_mass(0);
        for (int a : cell) {
            mass += space.prob(a);
            if (block.S.slice(2)[a] > 0) up_mass += space.prob(a);
        }
        const BlockAtom& atom = block.atoms[cell[0]];
        Rat level = atom.in_a_tilde() ? P.a : P.b;
        cond_ok = cond_ok && up_mass / mass == (level + atom.s1) / (2 * level);
    }
    report.add("P(S_2 = +L | F_1) = (L + S_1)/2L", cond_ok);

    // Independence of X and S_1: E[X phi(S_1)] = eps E[phi(S_1)].
    RandomVariable s1 = block.S.slice(1);
    bool indep = expectation(block.X.hadamard(s1)) == P.epsilon * expectation(s1);
    std::vector<Rat> ind_a(space.num_atoms(), Rat(0));
    for (int i : block.A) ind_a[i] = 1;
    RandomVariable one_a(block.space, ind_a);
    indep = indep && expectation(block.X.hadamard(one_a)) == P.epsilon * expectation(one_a);
    report.add("X independent of S_1", indep);

    bool moments_ok = true;
    for (int p = 1; p <= 4; ++p) {
        Rat target = rat_pow(P.M, p) * P.epsilon / 2;
        moments_ok = moments_ok && moment(block.f, p) == target;
    }
    report.add("E[|f|^p] = M^p eps/2, p = 1..4", moments_ok);

    std::vector<int> s2_eq_a;
    for (int i = 0; i < space.num_atoms(); ++i)
        if (block.S.slice(2)[i] == P.a) s2_eq_a.push_back(i);
    Rat p_s2_a = space.event_probability(s2_eq_a);
    report.add("P(S_2 = a) >= 1/8", p_s2_a >= Rat(1, 8), vs(p_s2_a, ">=", Rat(1, 8)));

    // E[X | S_2 = s]: <= 8 eps on +-a, zero on +-b.
    auto x_cond = terminal_cond_expectations(block.S, block.X);
    bool x_bounds = x_cond.at(P.a) <= 8 * P.epsilon && x_cond.at(-P.a) <= 8 * P.epsilon &&
                    x_cond.at(P.b) == 0 && x_cond.at(-P.b) == 0;
    report.add("E[X | S_2 = +-a] <= 8 eps, = 0 on +-b", x_bounds);

    // Canonical pair reconstructs f with ||u||_1 = ||v||_1 = M/2.
    RandomVariable cu = stochastic_integral(block.canonical_H, block.S);
    RandomVariable cv = evaluate_static(block.canonical_h, block.S);
    report.add("canonical (H, h) reconstructs f", cu + cv == block.f);
    report.add("canonical ||u||_1 = ||v||_1 = M/2",
               moment(cu, 1) == P.M / 2 && moment(cv, 1) == P.M / 2);

    report.max_u_corr = max_u_correlation(block.S, block.f);
    report.add("max E[fu] <= eps M", report.max_u_corr <= P.epsilon * P.M,
               vs(report.max_u_corr, "<=", P.epsilon * P.M));

    report.max_v_corr = max_v_correlation(block.S, block.f);
    report.add("max E[f | S_2] <= 8 eps M", report.max_v_corr <= 8 * P.epsilon * P.M,
               vs(report.max_v_corr, "<=", 8 * P.epsilon * P.M));
    report.add("max E[f | S_2] <= 12 eps M", report.max_v_corr <= 12 * P.epsilon * P.M,
               vs(report.max_v_corr, "<=", 12 * P.epsilon * P.M), /*hard=*/false);

    DecompositionResult dec = min_l1_decomposition(block.S, block.f);
    report.cost = dec.cost;
    std::string why;
    report.add("LP dual certificate", dec.certificate_ok(&why), why);
    report.add("LP cost >= M/24", dec.cost >= P.M / 24, vs(dec.cost, ">=", P.M / 24));
    report.add("LP cost >= M/16", dec.cost >= P.M / 16, vs(dec.cost, ">=", P.M / 16),
               /*hard=*/false);
    report.add("LP cost <= M", dec.cost <= P.M, vs(dec.cost, "<=", P.M));

    return report;
}

std::vector<BlockParams> sweep_grid() {
    std::vector<Rat> eps = {Rat(1, 2), Rat(1, 4), Rat(1, 16), pow2_neg(9)};
    std::vector<Rat> ms = {Rat(1), Rat(2), Rat(16)};
    std::vector<std::pair<Rat, Rat>> abs = {
        {Rat(2), Rat(3)}, {Rat(9, 4), Rat(11, 4)}, {Rat(17, 8), Rat(23, 8)}};
    std::vector<BlockParams> grid;
    for (const Rat& e : eps)
        for (const Rat& m : ms)
            for (const auto& [a, b] : abs) grid.push_back({e, m, a, b});
    return grid;
}

std::vector<BlockReport> verify_sweep(const std::vector<BlockParams>& grid) {
    std::vector<BlockReport> reports(grid.size());
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < static_cast<int>(grid.size()); ++i)
        reports[i] = verify_block(build_block(grid[i]));
    return reports;
}

nlohmann::json block_to_json(const BlockModel& block) {
    nlohmann::json j;
    j["params"] = {{"epsilon", rat_str(block.params.epsilon)},
                   {"M", rat_str(block.params.M)},
                   {"a", rat_str(block.params.a)},
                   {"b", rat_str(block.params.b)}};
    j["space"] = space_to_json(*block.space);
    j["S"] = process_to_json(block.S);
    j["X"] = rv_to_json(block.X);
    j["f"] = rv_to_json(block.f);
    j["canonical_H"] = strategy_to_json(block.canonical_H);
    j["canonical_h"] = claim_to_json(block.canonical_h);
    return j;
}

}  // namespace hedgelab
