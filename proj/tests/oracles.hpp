// Test-only brute-force oracles, independent of the LP builders they check.
#pragma once

#include <hedgelab/decompose.hpp>
#include <hedgelab/market.hpp>

#include <vector>

namespace hedgelab::oracle {

using Matrix = std::vector<std::vector<Rat>>;

// Basis of the nullspace {x : A x = 0} by rational Gaussian elimination.
inline Matrix nullspace(Matrix a, int n_cols) {
    int m = static_cast<int>(a.size());
    std::vector<int> pivot_col;
    int row = 0;
    for (int col = 0; col < n_cols && row < m; ++col) {
        int pr = -1;
        for (int r = row; r < m; ++r)
            if (a[r][col] != 0) {
                pr = r;
                break;
            }
        if (pr < 0) continue;
        std::swap(a[row], a[pr]);
        Rat inv = Rat(1) / a[row][col];
        for (Rat& v : a[row]) v *= inv;
        for (int r = 0; r < m; ++r) {
            if (r == row || a[r][col] == 0) continue;
            Rat factor = a[r][col];
            for (int cc = 0; cc < n_cols; ++cc) a[r][cc] -= factor * a[row][cc];
        }
        pivot_col.push_back(col);
        ++row;
    }
    std::vector<bool> is_pivot(n_cols, false);
    for (int c : pivot_col) is_pivot[c] = true;
    Matrix basis;
    for (int free_col = 0; free_col < n_cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<Rat> x(n_cols, Rat(0));
        x[free_col] = 1;
        for (int r = 0; r < static_cast<int>(pivot_col.size()); ++r)
            x[pivot_col[r]] = -a[r][free_col];
        basis.push_back(std::move(x));
    }
    return basis;
}

// Spanning vectors of U = {(H.S)_T} as atomwise value vectors: one per
// filtration cell per trading step.
inline Matrix gains_basis(const PriceProcess& S) {
    const auto& space = *S.space();
    Matrix basis;
    for (int t = 1; t <= space.horizon(); ++t) {
        for (const auto& cell : space.partition(t - 1)) {
            std::vector<Rat> v(space.num_atoms(), Rat(0));
            bool nonzero = false;
            for (int atom : cell) {
                v[atom] = S.slice(t)[atom] - S.slice(t - 1)[atom];
                nonzero = nonzero || v[atom] != 0;
            }
            if (nonzero) basis.push_back(std::move(v));
        }
    }
    return basis;
}

// sup { E[fu] : u in U, ||u||_1 <= 1 } by enumerating the vertices of the
// weighted l1 ball intersected with the subspace U. Vertices are the
// directions where enough coordinates of u vanish; every vertex direction
// shows up as the 1-dimensional nullspace of some subset of atom rows.
inline Rat max_u_correlation_by_vertices(const PriceProcess& S, const RandomVariable& f) {
    const auto& space = *S.space();
    const int n = space.num_atoms();
    Matrix basis = gains_basis(S);
    const int dim = static_cast<int>(basis.size());
    if (dim == 0) return Rat(0);

    Rat best(0);
    std::vector<int> subset;
    auto consider = [&](const std::vector<int>& zeros) {
        Matrix rows;
        for (int atom : zeros) {
            std::vector<Rat> row(dim);
            for (int k = 0; k < dim; ++k) row[k] = basis[k][atom];
            rows.push_back(std::move(row));
        }
        Matrix dirs = nullspace(rows, dim);
        if (dirs.size() != 1) return;
        std::vector<Rat> u(n, Rat(0));
        for (int k = 0; k < dim; ++k)
            for (int atom = 0; atom < n; ++atom) u[atom] += dirs[0][k] * basis[k][atom];
        Rat norm(0), corr(0);
        for (int atom = 0; atom < n; ++atom) {
            norm += space.prob(atom) * rat_abs(u[atom]);
            corr += space.prob(atom) * f[atom] * u[atom];
        }
        if (norm == 0) return;
        Rat value = rat_abs(corr) / norm;
        if (value > best) best = value;
    };
    // All zero-sets of size dim-1 .. n-1.
    auto recurse = [&](auto&& self, int start, int remaining) -> void {
        if (remaining == 0) {
            consider(subset);
            return;
        }
        for (int atom = start; atom <= n - remaining; ++atom) {
            subset.push_back(atom);
            self(self, atom + 1, remaining - 1);
            subset.pop_back();
        }
    };
    for (int size = dim - 1; size < n; ++size) recurse(recurse, 0, size);
    return best;
}

// Second, structurally different LP for min ||u||_1 + ||v||_1 subject to
// u + v >= f: u lives in per-atom variables constrained to U through its
// orthogonal complement, rather than through strategy parameters.
inline Rat min_l1_cost_by_complement(const PriceProcess& S, const RandomVariable& f) {
    const auto& space = *S.space();
    const int n = space.num_atoms();
    Matrix basis = gains_basis(S);
    const int dim = static_cast<int>(basis.size());

    // u in U iff u is orthogonal to the nullspace of the basis matrix.
    Matrix b_rows = basis;  // dim x n
    Matrix perp = nullspace(std::move(b_rows), n);
    (void)dim;

    Partition term = terminal_partition(S);
    const int n_term = static_cast<int>(term.size());
    std::vector<int> term_cell(n);
    for (int c = 0; c < n_term; ++c)
        for (int atom : term[c]) term_cell[atom] = c;

    const int u0 = 0, h0 = n, t0 = h0 + n_term, s0 = t0 + n;
    const int n_vars = s0 + n_term;

    LinearProgram lp;
    lp.objective.assign(n_vars, Rat(0));
    lp.lower.assign(n_vars, std::nullopt);
    lp.upper.assign(n_vars, std::nullopt);
    for (int a = 0; a < n; ++a) {
        lp.objective[t0 + a] = space.prob(a);
        lp.lower[t0 + a] = Rat(0);
    }
    for (int c = 0; c < n_term; ++c) {
        lp.objective[s0 + c] = space.event_probability(term[c]);
        lp.lower[s0 + c] = Rat(0);
    }
    for (const auto& w : perp) {
        std::vector<Rat> row(n_vars, Rat(0));
        for (int a = 0; a < n; ++a) row[u0 + a] = w[a];
        lp.add_row(std::move(row), Relation::Equal, Rat(0));
    }
    for (int a = 0; a < n; ++a) {
        std::vector<Rat> row(n_vars, Rat(0));
        row[u0 + a] = 1;
        row[h0 + term_cell[a]] = 1;
        lp.add_row(std::move(row), Relation::GreaterEq, f[a]);
        std::vector<Rat> plus(n_vars, Rat(0));
        plus[t0 + a] = 1;
        plus[u0 + a] = -1;
        lp.add_row(std::move(plus), Relation::GreaterEq, Rat(0));
        std::vector<Rat> minus(n_vars, Rat(0));
        minus[t0 + a] = 1;
        minus[u0 + a] = 1;
        lp.add_row(std::move(minus), Relation::GreaterEq, Rat(0));
    }
    for (int c = 0; c < n_term; ++c) {
        std::vector<Rat> plus(n_vars, Rat(0));
        plus[s0 + c] = 1;
        plus[h0 + c] = -1;
        lp.add_row(std::move(plus), Relation::GreaterEq, Rat(0));
        std::vector<Rat> minus(n_vars, Rat(0));
        minus[s0 + c] = 1;
        minus[h0 + c] = 1;
        lp.add_row(std::move(minus), Relation::GreaterEq, Rat(0));
    }
    LPSolution sol = solve(lp);
    if (sol.status != LPStatus::Optimal) throw std::logic_error("oracle LP not optimal");
    std::string why;
    if (!verify_certificate(lp, sol, &why))
        throw std::logic_error("oracle LP certificate rejected: " + why);
    return sol.objective;
}

}  // namespace hedgelab::oracle
