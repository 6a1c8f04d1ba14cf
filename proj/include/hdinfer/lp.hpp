#pragma once

#include <optional>
#include <vector>

#include "hdinfer/linalg.hpp"

namespace hdinfer::lp {

enum class Sense { LessEqual, GreaterEqual, Equal };

enum class LpStatus { Optimal, Infeasible, Unbounded };

// Minimize c'x subject to A x (sense) b, with per-variable lower bounds
// (default 0) and optional upper bounds.
struct LinearProgram {
    Vector objective;            // c, length = number of variables
    Matrix constraints;          // A
    Vector rhs;                  // b
    std::vector<Sense> senses;   // one per row
    Vector lower_bounds;         // empty => all zeros
    std::vector<std::optional<double>> upper_bounds;  // empty => none
};

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Vector x;
    double objective_value = 0.0;
};

LpSolution solve_lp(const LinearProgram& lp);

}  // namespace hdinfer::lp
