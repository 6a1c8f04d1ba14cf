#include "hdinfer/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hdinfer::lp {

namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kOptTol = 1e-9;
constexpr double kPivotTol = 1e-10;

// Dense tableau: rows of B^{-1}[A | b] plus a reduced-cost row kept in sync.
struct Tableau {
    std::size_t nrows;
    std::size_t ncols;  // structural + slack + artificial columns
    Matrix body;        // nrows x (ncols + 1); last column is the rhs
    Vector cost;        // ncols + 1; last entry is -(current objective)
    std::vector<std::size_t> basis;

    double& at(std::size_t i, std::size_t j) { return body(i, j); }
    double rhs(std::size_t i) const { return body(i, ncols); }

    void pivot(std::size_t prow, std::size_t pcol) {
        const double pv = body(prow, pcol);
        for (std::size_t j = 0; j <= ncols; ++j) body(prow, j) /= pv;
        for (std::size_t i = 0; i < nrows; ++i) {
            if (i == prow) continue;
            const double f = body(i, pcol);
            if (std::fabs(f) < 1e-300) continue;
            for (std::size_t j = 0; j <= ncols; ++j) body(i, j) -= f * body(prow, j);
        }
        const double fc = cost[pcol];
        if (std::fabs(fc) >= 1e-300)
            for (std::size_t j = 0; j <= ncols; ++j) cost[j] -= fc * body(prow, j);
        basis[prow] = pcol;
    }
};

enum class IterateResult { Optimal, Unbounded };

IterateResult run_simplex(Tableau& t, const std::vector<bool>& allowed) {
    const std::size_t bland_after = 3 * (t.nrows + t.ncols);
    const std::size_t hard_cap = 50 * (t.nrows + t.ncols) + 10000;
    for (std::size_t iter = 0;; ++iter) {
        if (iter > hard_cap) throw std::runtime_error("solve_lp: iteration limit exceeded");
        const bool bland = iter >= bland_after;
        // Entering column: largest-coefficient rule, Bland's lowest-index fallback.
        std::size_t enter = t.ncols;
        double best = -kOptTol;
        for (std::size_t j = 0; j < t.ncols; ++j) {
            if (!allowed[j]) continue;
            if (t.cost[j] < best) {
                best = t.cost[j];
                enter = j;
                if (bland) break;
            }
        }
        if (enter == t.ncols) return IterateResult::Optimal;
        // Ratio test; degenerate ties broken by the lowest basic-variable index.
        std::size_t leave = t.nrows;
        double best_ratio = 0.0;
        for (std::size_t i = 0; i < t.nrows; ++i) {
            const double a = t.body(i, enter);
            if (a <= kPivotTol) continue;
            const double ratio = t.rhs(i) / a;
            if (leave == t.nrows || ratio < best_ratio - 1e-12 ||
                (ratio < best_ratio + 1e-12 && t.basis[i] < t.basis[leave])) {
                best_ratio = ratio;
                leave = i;
            }
        }
        if (leave == t.nrows) return IterateResult::Unbounded;
        t.pivot(leave, enter);
    }
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
    const std::size_t nvar = lp.objective.size();
    const std::size_t nrow = lp.rhs.size();
    if (lp.constraints.cols != nvar || lp.constraints.rows != nrow ||
        lp.senses.size() != nrow)
        throw std::invalid_argument("solve_lp: dimension mismatch");
    if (!lp.lower_bounds.empty() && lp.lower_bounds.size() != nvar)
        throw std::invalid_argument("solve_lp: lower_bounds size mismatch");
    if (!lp.upper_bounds.empty() && lp.upper_bounds.size() != nvar)
        throw std::invalid_argument("solve_lp: upper_bounds size mismatch");

    // Shift variables so every lower bound is zero, and turn finite upper
    // bounds into extra <= rows.
    Vector shift(nvar, 0.0);
    if (!lp.lower_bounds.empty()) shift = lp.lower_bounds;
    double obj_constant = 0.0;
    for (std::size_t j = 0; j < nvar; ++j) obj_constant += lp.objective[j] * shift[j];

    std::size_t extra_rows = 0;
    for (std::size_t j = 0; j < nvar && !lp.upper_bounds.empty(); ++j)
        if (lp.upper_bounds[j].has_value()) ++extra_rows;

    const std::size_t m = nrow + extra_rows;
    Matrix a(m, nvar, 0.0);
    Vector b(m, 0.0);
    std::vector<Sense> senses(m);
    for (std::size_t i = 0; i < nrow; ++i) {
        double bi = lp.rhs[i];
        for (std::size_t j = 0; j < nvar; ++j) {
            a(i, j) = lp.constraints(i, j);
            bi -= a(i, j) * shift[j];
        }
        b[i] = bi;
        senses[i] = lp.senses[i];
    }
    {
        std::size_t r = nrow;
        for (std::size_t j = 0; j < nvar && !lp.upper_bounds.empty(); ++j) {
            if (!lp.upper_bounds[j].has_value()) continue;
            a(r, j) = 1.0;
            b[r] = *lp.upper_bounds[j] - shift[j];
            senses[r] = Sense::LessEqual;
            ++r;
        }
    }

    // Normalize so the rhs is nonnegative.
    for (std::size_t i = 0; i < m; ++i) {
        if (b[i] >= 0.0) continue;
        b[i] = -b[i];
        for (std::size_t j = 0; j < nvar; ++j) a(i, j) = -a(i, j);
        if (senses[i] == Sense::LessEqual)
            senses[i] = Sense::GreaterEqual;
        else if (senses[i] == Sense::GreaterEqual)
            senses[i] = Sense::LessEqual;
    }

    // Column layout: structural | slack/surplus | artificial.
    std::size_t nslack = 0, nart = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (senses[i] != Sense::Equal) ++nslack;
        if (senses[i] != Sense::LessEqual) ++nart;
    }
    const std::size_t ncols = nvar + nslack + nart;

    Tableau t;
    t.nrows = m;
    t.ncols = ncols;
    t.body = Matrix(m, ncols + 1, 0.0);
    t.cost.assign(ncols + 1, 0.0);
    t.basis.assign(m, 0);

    std::vector<bool> is_artificial(ncols, false);
    {
        std::size_t slack_col = nvar;
        std::size_t art_col = nvar + nslack;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < nvar; ++j) t.body(i, j) = a(i, j);
            t.body(i, ncols) = b[i];
            switch (senses[i]) {
                case Sense::LessEqual:
                    t.body(i, slack_col) = 1.0;
                    t.basis[i] = slack_col++;
                    break;
                case Sense::GreaterEqual:
                    t.body(i, slack_col) = -1.0;
                    ++slack_col;
                    t.body(i, art_col) = 1.0;
                    is_artificial[art_col] = true;
                    t.basis[i] = art_col++;
                    break;
                case Sense::Equal:
                    t.body(i, art_col) = 1.0;
                    is_artificial[art_col] = true;
                    t.basis[i] = art_col++;
                    break;
            }
        }
    }

    LpSolution sol;

    if (nart > 0) {
        // Phase 1: drive the artificial variables to zero.
        for (std::size_t j = 0; j < ncols; ++j) t.cost[j] = is_artificial[j] ? 1.0 : 0.0;
        t.cost[ncols] = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (!is_artificial[t.basis[i]]) continue;
            for (std::size_t j = 0; j <= ncols; ++j) t.cost[j] -= t.body(i, j);
        }
        std::vector<bool> allowed(ncols, true);
        run_simplex(t, allowed);  // phase 1 is bounded below by 0
        if (-t.cost[ncols] > kFeasTol) {
            sol.status = LpStatus::Infeasible;
            return sol;
        }
        // Pivot remaining artificials out of the basis where possible.
        for (std::size_t i = 0; i < m; ++i) {
            if (!is_artificial[t.basis[i]]) continue;
            std::size_t piv = ncols;
            for (std::size_t j = 0; j < nvar + nslack; ++j) {
                if (std::fabs(t.body(i, j)) > kPivotTol) {
                    piv = j;
                    break;
                }
            }
            if (piv != ncols) t.pivot(i, piv);
            // Otherwise the row is redundant; the artificial stays basic at zero.
        }
    }

    // Phase 2 with the true objective; artificials barred from entering.
    for (std::size_t j = 0; j < ncols; ++j)
        t.cost[j] = (j < nvar && !is_artificial[j]) ? lp.objective[j] : 0.0;
    t.cost[ncols] = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t bj = t.basis[i];
        const double cb = (bj < nvar) ? lp.objective[bj] : 0.0;
        if (cb == 0.0) continue;
        for (std::size_t j = 0; j <= ncols; ++j) t.cost[j] -= cb * t.body(i, j);
    }
    std::vector<bool> allowed(ncols, true);
    for (std::size_t j = 0; j < ncols; ++j)
        if (is_artificial[j]) allowed[j] = false;
    if (run_simplex(t, allowed) == IterateResult::Unbounded) {
        sol.status = LpStatus::Unbounded;
        return sol;
    }

    Vector x(nvar, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (t.basis[i] < nvar) x[t.basis[i]] = t.rhs(i);
    double obj = obj_constant;
    for (std::size_t j = 0; j < nvar; ++j) {
        x[j] += shift[j];
        obj += lp.objective[j] * (x[j] - shift[j]);
    }
    sol.status = LpStatus::Optimal;
    sol.x = std::move(x);
    sol.objective_value = obj;
    return sol;
}

}  // namespace hdinfer::lp
