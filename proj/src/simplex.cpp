#include "groupvote/simplex.hpp"

#include <cmath>
#include <limits>

#include "groupvote/errors.hpp"

namespace groupvote::lp {

void LinearProgram::add_le(std::vector<Term> terms, double rhs) {
    for (const auto& [var, coef] : terms) {
        if (var >= variables_) throw IndexError("LP variable index out of range");
        (void)coef;
    }
    rows_.push_back(std::move(terms));
    rhs_.push_back(rhs);
}

void LinearProgram::add_ge(std::vector<Term> terms, double rhs) {
    for (auto& term : terms) term.second = -term.second;
    add_le(std::move(terms), -rhs);
}

void LinearProgram::add_eq(std::vector<Term> terms, double rhs) {
    add_le(terms, rhs);
    add_ge(std::move(terms), rhs);
}

void LinearProgram::set_objective(std::vector<Term> terms) {
    std::fill(objective_.begin(), objective_.end(), 0.0);
    for (const auto& [var, coef] : terms) {
        if (var >= variables_) throw IndexError("LP variable index out of range");
        objective_[var] += coef;
    }
}

namespace {

// Dictionary form: for row i, x_{basic[i]} + sum_j T[i][j] x_{nonbasic[j]} = T[i][rhs].
// Row `obj` holds the objective as z + sum_j T[obj][j] x_{nonbasic[j]} = T[obj][rhs],
// row `aux` the phase-one objective (maximize -artificial).
class Tableau {
public:
    Tableau(const LinearProgram& lp, double eps)
        : rows_(lp.constraints()),
          cols_(lp.variables() + 1),  // last nonbasic column is the artificial variable
          width_(cols_ + 1),
          eps_(eps),
          data_((rows_ + 2) * width_, 0.0),
          basic_(rows_),
          nonbasic_(cols_) {
        const std::size_t n = lp.variables();
        for (std::size_t i = 0; i < rows_; ++i) {
            for (const auto& [var, coef] : lp.rows()[i]) at(i, var) += coef;
            at(i, cols_ - 1) = -1.0;
            at(i, rhs_col()) = lp.rhs()[i];
            basic_[i] = n + 1 + i;  // slack variables
        }
        for (std::size_t j = 0; j < n; ++j) {
            nonbasic_[j] = j;
            at(obj_row(), j) = -lp.objective()[j];
        }
        nonbasic_[cols_ - 1] = n;  // artificial
        artificial_ = n;
        at(aux_row(), cols_ - 1) = 1.0;
    }

    Solution run() {
        Solution out;
        std::size_t worst = 0;
        for (std::size_t i = 1; i < rows_; ++i) {
            if (at(i, rhs_col()) < at(worst, rhs_col())) worst = i;
        }
        if (rows_ > 0 && at(worst, rhs_col()) < -eps_) {
            pivot(worst, cols_ - 1);
            if (!optimize(aux_row())) throw InvariantViolation("phase one of the simplex method is unbounded");
            if (at(aux_row(), rhs_col()) < -eps_) {
                out.status = Status::Infeasible;
                out.pivots = pivots_;
                return out;
            }
            for (std::size_t i = 0; i < rows_; ++i) {
                if (basic_[i] != artificial_) continue;
                std::size_t best = cols_;
                for (std::size_t j = 0; j < cols_; ++j) {
                    if (std::abs(at(i, j)) > eps_ && (best == cols_ || nonbasic_[j] < nonbasic_[best])) best = j;
                }
                if (best != cols_) pivot(i, best);
            }
        }
        if (!optimize(obj_row())) {
            out.status = Status::Unbounded;
            out.value = std::numeric_limits<double>::infinity();
            out.pivots = pivots_;
            return out;
        }
        out.status = Status::Optimal;
        out.value = at(obj_row(), rhs_col());
        out.x.assign(artificial_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            if (basic_[i] < artificial_) out.x[basic_[i]] = at(i, rhs_col());
        }
        out.pivots = pivots_;
        return out;
    }

private:
    double& at(std::size_t r, std::size_t c) { return data_[r * width_ + c]; }
    std::size_t rhs_col() const { return cols_; }
    std::size_t obj_row() const { return rows_; }
    std::size_t aux_row() const { return rows_ + 1; }

    // Returns false when the objective in `row` is unbounded.
    bool optimize(std::size_t row) {
        const std::size_t limit = 1000 * (rows_ + cols_) + 100000;
        while (true) {
            std::size_t enter = cols_;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (row == obj_row() && nonbasic_[j] == artificial_) continue;
                if (at(row, j) < -eps_ && (enter == cols_ || nonbasic_[j] < nonbasic_[enter])) enter = j;
            }
            if (enter == cols_) return true;

            std::size_t leave = rows_;
            double best_ratio = 0;
            for (std::size_t i = 0; i < rows_; ++i) {
                const double a = at(i, enter);
                if (a <= eps_) continue;
                const double ratio = at(i, rhs_col()) / a;
                if (leave == rows_ || ratio < best_ratio - eps_ ||
                    (ratio <= best_ratio + eps_ && basic_[i] < basic_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == rows_) return false;
            pivot(leave, enter);
            if (pivots_ > limit) throw InvariantViolation("simplex pivot limit exceeded");
        }
    }

    void pivot(std::size_t r, std::size_t s) {
        ++pivots_;
        const double inv = 1.0 / at(r, s);
        double* prow = &at(r, 0);
        for (std::size_t i = 0; i < rows_ + 2; ++i) {
            if (i == r) continue;
            double* row = &at(i, 0);
            const double factor = row[s] * inv;
            if (factor == 0.0) continue;
            for (std::size_t j = 0; j < width_; ++j) row[j] -= prow[j] * factor;
            row[s] = -factor;
        }
        for (std::size_t j = 0; j < width_; ++j) prow[j] *= inv;
        prow[s] = inv;
        std::swap(basic_[r], nonbasic_[s]);
    }

    std::size_t rows_;
    std::size_t cols_;
    std::size_t width_;
    double eps_;
    std::vector<double> data_;
    std::vector<std::size_t> basic_;
    std::vector<std::size_t> nonbasic_;
    std::size_t artificial_ = 0;
    std::size_t pivots_ = 0;
};

}  // namespace

Solution solve(const LinearProgram& program, double eps) {
    return Tableau(program, eps).run();
}

}  // namespace groupvote::lp
