#include <hedgelab/lp.hpp>

#include <sstream>

namespace hedgelab {

void LinearProgram::set_nonneg(int j) {
    if (static_cast<int>(lower.size()) < num_vars()) lower.resize(num_vars());
    if (static_cast<int>(upper.size()) < num_vars()) upper.resize(num_vars());
    lower[j] = Rat(0);
}

namespace {

enum class VarKind { Free, NonNeg };

// Minimization form with bounds folded into rows. A plain lower bound of
// zero with no upper bound becomes variable nonnegativity instead of a row.
struct Normalized {
    std::vector<Rat> objective;  // minimize
    std::vector<LPRow> rows;     // original rows first, then bound rows
    std::vector<VarKind> kinds;
    int num_original_rows = 0;
};

Normalized normalize(const LinearProgram& lp) {
    const int n = lp.num_vars();
    for (const auto& row : lp.rows)
        if (static_cast<int>(row.coeffs.size()) != n)
            throw MalformedProgram("row length does not match variable count");
    if (!lp.lower.empty() && static_cast<int>(lp.lower.size()) != n)
        throw MalformedProgram("lower bound vector length mismatch");
    if (!lp.upper.empty() && static_cast<int>(lp.upper.size()) != n)
        throw MalformedProgram("upper bound vector length mismatch");

    Normalized nf;
    nf.objective = lp.objective;
    if (lp.sense == Sense::Maximize)
        for (Rat& c : nf.objective) c = -c;
    nf.rows = lp.rows;
    nf.num_original_rows = static_cast<int>(lp.rows.size());
    nf.kinds.assign(n, VarKind::Free);

    auto unit_row = [n](int j, Relation rel, Rat rhs) {
        LPRow row;
        row.coeffs.assign(n, Rat(0));
        row.coeffs[j] = 1;
        row.rel = rel;
        row.rhs = std::move(rhs);
        return row;
    };
    for (int j = 0; j < n; ++j) {
        std::optional<Rat> lo = lp.lower.empty() ? std::nullopt : lp.lower[j];
        std::optional<Rat> hi = lp.upper.empty() ? std::nullopt : lp.upper[j];
        if (lo && hi && *lo > *hi) throw MalformedProgram("crossing bounds");
        if (lo && *lo == 0 && !hi) {
            nf.kinds[j] = VarKind::NonNeg;
            continue;
        }
        if (lo) nf.rows.push_back(unit_row(j, Relation::GreaterEq, *lo));
        if (hi) nf.rows.push_back(unit_row(j, Relation::LessEq, *hi));
    }
    return nf;
}

// Full-tableau two-phase simplex, Bland's rule throughout.
class Simplex {
public:
    explicit Simplex(const Normalized& nf) : nf_(nf) { build(); }

    LPStatus run() {
        // Phase 1: minimize the sum of artificials.
        std::vector<Rat> phase1(total_cols_, Rat(0));
        for (int i = 0; i < m_; ++i) phase1[art_start_ + i] = 1;
        optimize(phase1, /*allow_artificials=*/true);
        Rat infeas(0);
        for (int i = 0; i < m_; ++i)
            if (basis_[i] >= art_start_) infeas += rhs(i);
        if (infeas != 0) return LPStatus::Infeasible;
        drive_out_artificials();

        std::vector<Rat> phase2(total_cols_, Rat(0));
        for (int j = 0; j < struct_cols_; ++j) phase2[j] = cost_[j];
        if (!optimize(phase2, /*allow_artificials=*/false)) return LPStatus::Unbounded;
        return LPStatus::Optimal;
    }

    // Primal values of the structural columns.
    std::vector<Rat> structural_values() const {
        std::vector<Rat> x(struct_cols_, Rat(0));
        for (int i = 0; i < m_; ++i)
            if (basis_[i] < struct_cols_) x[basis_[i]] = rhs(i);
        return x;
    }

    // y' = c_B' B^{-1}, read off the artificial columns (initial identity).
    // Sign-corrected back to the normalized rows.
    std::vector<Rat> row_duals() const {
        std::vector<Rat> y(m_, Rat(0));
        for (int i = 0; i < m_; ++i) {
            Rat yi(0);
            for (int k = 0; k < m_; ++k) {
                if (basis_[k] < struct_cols_ && cost_[basis_[k]] != 0)
                    yi += cost_[basis_[k]] * tab_[k][art_start_ + i];
            }
            y[i] = row_sign_[i] * yi;
        }
        return y;
    }

    int struct_cols() const { return struct_cols_; }
    std::vector<Rat>& cost() { return cost_; }

private:
    const Normalized& nf_;
    int m_ = 0;
    int struct_cols_ = 0;  // split variables + slack/surplus columns
    int art_start_ = 0;
    int total_cols_ = 0;
    std::vector<std::vector<Rat>> tab_;  // m x (total_cols + 1), rhs last
    std::vector<Rat> cost_;              // phase-2 cost of structural columns
    std::vector<int> basis_;
    std::vector<int> row_sign_;

    const Rat& rhs(int i) const { return tab_[i][total_cols_]; }

    void build() {
        const int n = static_cast<int>(nf_.kinds.size());
        m_ = static_cast<int>(nf_.rows.size());

        // Column layout: per variable one (NonNeg) or two (Free split)
        // columns, then slack/surplus columns, then artificials.
        std::vector<int> col_pos(n), col_neg(n, -1);
        int cols = 0;
        for (int j = 0; j < n; ++j) {
            col_pos[j] = cols++;
            if (nf_.kinds[j] == VarKind::Free) col_neg[j] = cols++;
        }
        var_cols_ = cols;
        int slack_cols = 0;
        for (const auto& row : nf_.rows)
            if (row.rel != Relation::Equal) ++slack_cols;
        struct_cols_ = cols + slack_cols;
        art_start_ = struct_cols_;
        total_cols_ = struct_cols_ + m_;

        cost_.assign(struct_cols_, Rat(0));
        for (int j = 0; j < n; ++j) {
            cost_[col_pos[j]] = nf_.objective[j];
            if (col_neg[j] >= 0) cost_[col_neg[j]] = -nf_.objective[j];
        }

        tab_.assign(m_, std::vector<Rat>(total_cols_ + 1, Rat(0)));
        basis_.assign(m_, -1);
        row_sign_.assign(m_, 1);
        col_pos_ = col_pos;
        col_neg_ = col_neg;

        int next_slack = cols;
        for (int i = 0; i < m_; ++i) {
            const LPRow& row = nf_.rows[i];
            auto& t = tab_[i];
            for (int j = 0; j < n; ++j) {
                t[col_pos[j]] = row.coeffs[j];
                if (col_neg[j] >= 0) t[col_neg[j]] = -row.coeffs[j];
            }
            if (row.rel == Relation::LessEq) t[next_slack++] = 1;
            else if (row.rel == Relation::GreaterEq) t[next_slack++] = -1;
            t[total_cols_] = row.rhs;
            if (t[total_cols_] < 0) {
                row_sign_[i] = -1;
                for (Rat& v : t) v = -v;
            }
            t[art_start_ + i] = 1;
            basis_[i] = art_start_ + i;
        }
    }

    void pivot(int r, int e, std::vector<Rat>& reduced, Rat& objval) {
        auto& prow = tab_[r];
        Rat inv = Rat(1) / prow[e];
        for (Rat& v : prow) v *= inv;
        for (int i = 0; i < m_; ++i) {
            if (i == r || tab_[i][e] == 0) continue;
            Rat factor = tab_[i][e];
            auto& row = tab_[i];
            for (int j = 0; j <= total_cols_; ++j)
                if (prow[j] != 0) row[j] -= factor * prow[j];
        }
        if (reduced[e] != 0) {
            Rat factor = reduced[e];
            for (int j = 0; j < total_cols_; ++j)
                if (prow[j] != 0) reduced[j] -= factor * prow[j];
            objval += factor * prow[total_cols_];
        }
        basis_[r] = e;
    }

    // Returns false on unboundedness.
    bool optimize(const std::vector<Rat>& c, bool allow_artificials) {
        std::vector<Rat> reduced(total_cols_, Rat(0));
        Rat objval(0);
        for (int j = 0; j < total_cols_; ++j) {
            Rat d = c[j];
            for (int i = 0; i < m_; ++i)
                if (c[basis_[i]] != 0 && tab_[i][j] != 0) d -= c[basis_[i]] * tab_[i][j];
            reduced[j] = d;
        }
        const int limit = allow_artificials ? total_cols_ : art_start_;
        for (;;) {
            int enter = -1;
            for (int j = 0; j < limit; ++j) {
                if (reduced[j] < 0) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return true;
            int leave = -1;
            Rat best_ratio;
            for (int i = 0; i < m_; ++i) {
                if (tab_[i][enter] <= 0) continue;
                Rat ratio = rhs(i) / tab_[i][enter];
                if (leave < 0 || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter, reduced, objval);
        }
    }

    // After phase 1, swap basic artificials for structural columns where the
    // row allows it; rows that do not are redundant and keep a zero-valued
    // artificial in the basis.
    void drive_out_artificials() {
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < art_start_) continue;
            int e = -1;
            for (int j = 0; j < struct_cols_; ++j) {
                if (tab_[i][j] != 0) {
                    e = j;
                    break;
                }
            }
            if (e < 0) continue;
            std::vector<Rat> dummy(total_cols_, Rat(0));
            Rat obj(0);
            pivot(i, e, dummy, obj);
        }
    }

public:
    // Maps structural values back onto the normalized variables.
    std::vector<Rat> variable_values() const {
        std::vector<Rat> xs = structural_values();
        const int n = static_cast<int>(nf_.kinds.size());
        std::vector<Rat> x(n);
        for (int j = 0; j < n; ++j) {
            x[j] = xs[col_pos_[j]];
            if (col_neg_[j] >= 0) x[j] -= xs[col_neg_[j]];
        }
        return x;
    }

private:
    int var_cols_ = 0;
    std::vector<int> col_pos_, col_neg_;
};

Rat dot(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    Rat s(0);
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
    return s;
}

}  // namespace

LPSolution solve(const LinearProgram& lp) {
    Normalized nf = normalize(lp);
    Simplex simplex(nf);
    LPSolution sol;
    sol.status = simplex.run();
    if (sol.status != LPStatus::Optimal) return sol;
    sol.primal = simplex.variable_values();
    sol.dual = simplex.row_duals();
    sol.objective = dot(lp.objective, sol.primal);
    return sol;
}

bool verify_certificate(const LinearProgram& lp, const LPSolution& sol, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (sol.status != LPStatus::Optimal) return fail("no certificate for non-optimal status");
    Normalized nf = normalize(lp);
    const int n = lp.num_vars();
    const auto& x = sol.primal;
    const auto& y = sol.dual;
    if (static_cast<int>(x.size()) != n) return fail("primal size mismatch");
    if (y.size() != nf.rows.size()) return fail("dual size mismatch");

    for (int j = 0; j < n; ++j)
        if (nf.kinds[j] == VarKind::NonNeg && x[j] < 0) return fail("primal bound violated");

    std::vector<Rat> slack(nf.rows.size());
    for (size_t i = 0; i < nf.rows.size(); ++i) {
        const LPRow& row = nf.rows[i];
        Rat lhs = dot(row.coeffs, x);
        slack[i] = lhs - row.rhs;
        switch (row.rel) {
            case Relation::LessEq:
                if (slack[i] > 0) return fail("primal row violated");
                if (y[i] > 0) return fail("dual sign violated on <= row");
                break;
            case Relation::GreaterEq:
                if (slack[i] < 0) return fail("primal row violated");
                if (y[i] < 0) return fail("dual sign violated on >= row");
                break;
            case Relation::Equal:
                if (slack[i] != 0) return fail("primal row violated");
                break;
        }
        if (y[i] != 0 && slack[i] != 0) return fail("complementary slackness (rows)");
    }

    Rat dual_obj(0);
    for (size_t i = 0; i < nf.rows.size(); ++i)
        if (y[i] != 0) dual_obj += y[i] * nf.rows[i].rhs;
    for (int j = 0; j < n; ++j) {
        Rat d = nf.objective[j];
        for (size_t i = 0; i < nf.rows.size(); ++i)
            if (y[i] != 0 && nf.rows[i].coeffs[j] != 0) d -= y[i] * nf.rows[i].coeffs[j];
        if (nf.kinds[j] == VarKind::Free) {
            if (d != 0) return fail("reduced cost of free variable nonzero");
        } else {
            if (d < 0) return fail("negative reduced cost");
            if (d != 0 && x[j] != 0) return fail("complementary slackness (columns)");
        }
    }

    Rat primal_obj = dot(nf.objective, x);
    if (primal_obj != dual_obj) return fail("duality gap nonzero");
    Rat reported = lp.sense == Sense::Maximize ? Rat(-primal_obj) : primal_obj;
    if (sol.objective != reported) return fail("reported objective mismatch");
    return true;
}

std::string dump_program(const LinearProgram& lp) {
    std::ostringstream os;
    os << (lp.sense == Sense::Minimize ? "min" : "max");
    for (const Rat& c : lp.objective) os << ' ' << rat_str(c);
    os << '\n';
    for (const auto& row : lp.rows) {
        for (const Rat& c : row.coeffs) os << rat_str(c) << ' ';
        os << (row.rel == Relation::LessEq ? "<=" : row.rel == Relation::Equal ? "=" : ">=");
        os << ' ' << rat_str(row.rhs) << '\n';
    }
    for (int j = 0; j < lp.num_vars(); ++j) {
        std::optional<Rat> lo = lp.lower.empty() ? std::nullopt : lp.lower[j];
        std::optional<Rat> hi = lp.upper.empty() ? std::nullopt : lp.upper[j];
        if (!lo && !hi) continue;
        os << 'x' << j << ": " << (lo ? rat_str(*lo) : std::string("-inf")) << " .. "
           << (hi ? rat_str(*hi) : std::string("inf")) << '\n';
    }
    return os.str();
}

}  // namespace hedgelab
