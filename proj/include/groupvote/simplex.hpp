#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace groupvote::lp {

/// maximize c.x subject to A x <= b, x >= 0.
///
/// Rows are stored sparsely while the problem is built; the solver works on
/// a dense tableau.
class LinearProgram {
public:
    using Term = std::pair<std::size_t, double>;

    explicit LinearProgram(std::size_t variables) : variables_(variables), objective_(variables, 0.0) {}

    std::size_t variables() const noexcept { return variables_; }
    std::size_t constraints() const noexcept { return rows_.size(); }

    void add_le(std::vector<Term> terms, double rhs);
    void add_ge(std::vector<Term> terms, double rhs);
    void add_eq(std::vector<Term> terms, double rhs);
    void set_objective(std::vector<Term> terms);

    const std::vector<std::vector<Term>>& rows() const noexcept { return rows_; }
    const std::vector<double>& rhs() const noexcept { return rhs_; }
    const std::vector<double>& objective() const noexcept { return objective_; }

private:
    std::size_t variables_;
    std::vector<std::vector<Term>> rows_;
    std::vector<double> rhs_;
    std::vector<double> objective_;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
    Status status = Status::Infeasible;
    double value = 0;
    std::vector<double> x;
    std::size_t pivots = 0;
};

/// Two-phase dense simplex. Entering and leaving variables follow Bland's
/// smallest-index rule, so the method terminates on degenerate problems.
Solution solve(const LinearProgram& program, double eps = 1e-9);

}  // namespace groupvote::lp
