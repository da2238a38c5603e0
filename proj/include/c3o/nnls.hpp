#pragma once

#include <vector>

namespace c3o {

// Solves min ||A x - b||^2 subject to x >= 0 for a small number of columns by
// enumerating candidate support sets and solving each restricted least-squares
// problem via the normal equations. Exact for the column counts used here
// (<= 4): the optimal support's restricted solution is always among the
// candidates. Returns the minimizer; ties resolve to the smallest support.
std::vector<double> nnls(const std::vector<std::vector<double>>& columns,
                         const std::vector<double>& rhs);

}  // namespace c3o
