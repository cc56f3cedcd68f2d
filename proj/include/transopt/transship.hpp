#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "matrix.hpp"

namespace transopt::transship {

// Shipment matrix together with its aggregate income
//   K = sum_ij profit(i,j) * T(i,j).
struct TransshipmentPlan {
    Matrix quantities;             // T(i,j): units shipped from surplus i to shortage j
    double objective_value = 0.0;  // K
};

namespace detail {

constexpr double kReducedCostEps = 1e-11;
constexpr std::size_t kNoCell = static_cast<std::size_t>(-1);

inline void require_instance(const Matrix& profit, const std::vector<double>& surplus,
                             const std::vector<double>& shortage) {
    if (profit.rows() != surplus.size() || profit.cols() != shortage.size())
        throw std::invalid_argument("transshipment: profit matrix does not match surplus/shortage lengths");
    for (double s : surplus)
        if (!std::isfinite(s) || s < 0.0)
            throw std::invalid_argument("transshipment: surplus must be finite and >= 0");
    for (double s : shortage)
        if (!std::isfinite(s) || s < 0.0)
            throw std::invalid_argument("transshipment: shortage must be finite and >= 0");
    for (double p : profit.data())
        if (!std::isfinite(p)) throw std::invalid_argument("transshipment: profit entries must be finite");
}

// Balanced transportation tableau solved with the MODI simplex. The last row
// is a slack source feeding shortages we choose not to cover, the last column
// a slack sink absorbing unused surplus, both at zero cost, so the balanced
// problem is equivalent to the capacitated one. Bland's rule (lowest
// row-major index enters, lowest eligible index leaves) makes the pivot
// sequence deterministic and cycle-free.
class TransportSimplex {
public:
    TransportSimplex(std::size_t rows, std::size_t cols, std::vector<double> cost,
                     std::vector<double> supply, std::vector<double> demand)
        : rows_(rows),
          cols_(cols),
          cost_(std::move(cost)),
          flow_(rows * cols, 0.0),
          basic_(rows * cols, 0) {
        northwest_corner(std::move(supply), std::move(demand));
    }

    void solve() {
        const std::size_t max_pivots = 1000 + 200 * rows_ * cols_;
        std::vector<double> u(rows_), v(cols_);
        for (std::size_t pivot = 0; pivot < max_pivots; ++pivot) {
            compute_duals(u, v);
            const std::size_t entering = find_entering(u, v);
            if (entering == kNoCell) return;  // optimal
            pivot_on(entering);
        }
        throw std::runtime_error("transshipment simplex did not converge (internal error)");
    }

    double flow(std::size_t r, std::size_t c) const { return flow_[r * cols_ + c]; }

private:
    std::size_t rows_, cols_;
    std::vector<double> cost_, flow_;
    std::vector<char> basic_;

    // Staircase walk from (0,0) to (R-1,C-1); always yields R+C-1 basic cells
    // (zero-flow cells are kept as degenerate basics).
    void northwest_corner(std::vector<double> supply, std::vector<double> demand) {
        std::size_t r = 0, c = 0;
        while (true) {
            const std::size_t cell = r * cols_ + c;
            const double moved = std::min(supply[r], demand[c]);
            flow_[cell] = moved;
            basic_[cell] = 1;
            supply[r] -= moved;
            demand[c] -= moved;
            if (r == rows_ - 1 && c == cols_ - 1) break;
            if (r == rows_ - 1)
                ++c;
            else if (c == cols_ - 1)
                ++r;
            else if (supply[r] <= demand[c])
                ++r;
            else
                ++c;
        }
    }

    // The basis forms a spanning tree over row and column nodes, so a BFS
    // rooted at row 0 (u[0] = 0) fixes every dual.
    void compute_duals(std::vector<double>& u, std::vector<double>& v) const {
        std::vector<char> row_done(rows_, 0), col_done(cols_, 0);
        std::vector<std::size_t> queue{0};
        row_done[0] = 1;
        u[0] = 0.0;
        std::size_t head = 0;
        while (head < queue.size()) {
            const std::size_t node = queue[head++];
            if (node < rows_) {
                for (std::size_t c = 0; c < cols_; ++c)
                    if (basic_[node * cols_ + c] && !col_done[c]) {
                        v[c] = cost_[node * cols_ + c] - u[node];
                        col_done[c] = 1;
                        queue.push_back(rows_ + c);
                    }
            } else {
                const std::size_t c = node - rows_;
                for (std::size_t r = 0; r < rows_; ++r)
                    if (basic_[r * cols_ + c] && !row_done[r]) {
                        u[r] = cost_[r * cols_ + c] - v[c];
                        row_done[r] = 1;
                        queue.push_back(r);
                    }
            }
        }
    }

    std::size_t find_entering(const std::vector<double>& u, const std::vector<double>& v) const {
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) {
                const std::size_t cell = r * cols_ + c;
                if (!basic_[cell] && cost_[cell] - u[r] - v[c] < -kReducedCostEps) return cell;
            }
        return kNoCell;
    }

    // Unique path through the basis tree from the entering cell's row node to
    // its column node; adding the entering cell closes the pivot cycle.
    std::vector<std::size_t> cycle_path(std::size_t entering) const {
        const std::size_t enter_row = entering / cols_;
        const std::size_t enter_col = entering % cols_;
        const std::size_t node_count = rows_ + cols_;
        std::vector<std::size_t> parent(node_count, kNoCell), parent_cell(node_count, kNoCell);
        std::vector<char> seen(node_count, 0);
        std::vector<std::size_t> queue{enter_row};
        seen[enter_row] = 1;
        std::size_t head = 0;
        while (head < queue.size()) {
            const std::size_t node = queue[head++];
            if (node == rows_ + enter_col) break;
            if (node < rows_) {
                for (std::size_t c = 0; c < cols_; ++c) {
                    const std::size_t cell = node * cols_ + c;
                    if (basic_[cell] && !seen[rows_ + c]) {
                        seen[rows_ + c] = 1;
                        parent[rows_ + c] = node;
                        parent_cell[rows_ + c] = cell;
                        queue.push_back(rows_ + c);
                    }
                }
            } else {
                const std::size_t c = node - rows_;
                for (std::size_t r = 0; r < rows_; ++r) {
                    const std::size_t cell = r * cols_ + c;
                    if (basic_[cell] && !seen[r]) {
                        seen[r] = 1;
                        parent[r] = node;
                        parent_cell[r] = cell;
                        queue.push_back(r);
                    }
                }
            }
        }
        std::vector<std::size_t> path;
        for (std::size_t node = rows_ + enter_col; node != enter_row; node = parent[node])
            path.push_back(parent_cell[node]);
        std::reverse(path.begin(), path.end());  // ordered from the entering row outward
        return path;
    }

    void pivot_on(std::size_t entering) {
        const std::vector<std::size_t> path = cycle_path(entering);
        // Flow alternates -,+,-,... along the path; even positions shrink.
        double delta = std::numeric_limits<double>::infinity();
        for (std::size_t p = 0; p < path.size(); p += 2) delta = std::min(delta, flow_[path[p]]);
        std::size_t leaving = kNoCell;
        for (std::size_t p = 0; p < path.size(); p += 2)
            if (flow_[path[p]] == delta && (leaving == kNoCell || path[p] < leaving)) leaving = path[p];
        basic_[entering] = 1;
        flow_[entering] = delta;
        for (std::size_t p = 0; p < path.size(); ++p) {
            if (p % 2 == 0)
                flow_[path[p]] = std::max(0.0, flow_[path[p]] - delta);
            else
                flow_[path[p]] += delta;
        }
        basic_[leaving] = 0;
        flow_[leaving] = 0.0;
    }
};

}  // namespace detail

// Maximize sum_ij profit(i,j) * T(i,j) subject to row sums <= surplus, column
// sums <= shortage, T >= 0. Routes with profit <= 0 are priced out up front:
// some optimal plan ships nothing on them, and dropping them keeps the "no
// transshipments occur" regime structurally exact. The zero plan is always
// feasible, so the problem is never infeasible nor unbounded.
inline TransshipmentPlan solve_transshipment(const Matrix& profit, const std::vector<double>& surplus,
                                             const std::vector<double>& shortage) {
    detail::require_instance(profit, surplus, shortage);
    const std::size_t m = surplus.size();
    const std::size_t k = shortage.size();

    TransshipmentPlan plan;
    plan.quantities = Matrix(m, k, 0.0);

    std::vector<char> row_used(m, 0), col_used(k, 0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (surplus[i] > 0.0 && shortage[j] > 0.0 && profit(i, j) > 0.0) {
                row_used[i] = 1;
                col_used[j] = 1;
            }
    std::vector<std::size_t> rows, cols;
    for (std::size_t i = 0; i < m; ++i)
        if (row_used[i]) rows.push_back(i);
    for (std::size_t j = 0; j < k; ++j)
        if (col_used[j]) cols.push_back(j);
    if (rows.empty()) return plan;  // no profitable route: the zero plan is optimal

    const std::size_t tr = rows.size() + 1;  // + slack source
    const std::size_t tc = cols.size() + 1;  // + slack sink
    std::vector<double> cost(tr * tc, 0.0), supply(tr, 0.0), demand(tc, 0.0);
    double total_supply = 0.0, total_shortfall = 0.0;
    for (std::size_t a = 0; a < rows.size(); ++a) {
        supply[a] = surplus[rows[a]];
        total_supply += supply[a];
    }
    for (std::size_t b = 0; b < cols.size(); ++b) {
        demand[b] = shortage[cols[b]];
        total_shortfall += demand[b];
    }
    supply[tr - 1] = total_shortfall;
    demand[tc - 1] = total_supply;
    for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = 0; b < cols.size(); ++b) {
            const double p = profit(rows[a], cols[b]);
            // Unprofitable routes between otherwise active locations get a
            // positive artificial cost; slack routing at zero always beats
            // them, so they carry no flow at the optimum.
            cost[a * tc + b] = p > 0.0 ? -p : 1.0;
        }

    detail::TransportSimplex simplex(tr, tc, std::move(cost), std::move(supply), std::move(demand));
    simplex.solve();

    for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = 0; b < cols.size(); ++b)
            if (profit(rows[a], cols[b]) > 0.0)
                plan.quantities(rows[a], cols[b]) = std::max(0.0, simplex.flow(a, b));

    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < k; ++j) plan.objective_value += profit(i, j) * plan.quantities(i, j);
    return plan;
}

// Independent verification oracle: enumerate every basic solution of the
// slack-form LP (equivalently, every vertex of the transportation polytope)
// and keep the best. Exponential, hence the size guard; constraint columns
// are 0/1 so each basis system is numerically benign.
inline TransshipmentPlan brute_force_transshipment(const Matrix& profit, const std::vector<double>& surplus,
                                                   const std::vector<double>& shortage) {
    detail::require_instance(profit, surplus, shortage);
    const std::size_t m = surplus.size();
    const std::size_t k = shortage.size();
    if (m > 4 || k > 4) throw std::invalid_argument("brute_force_transshipment: at most 4x4 instances");

    TransshipmentPlan best;
    best.quantities = Matrix(m, k, 0.0);  // zero plan: always feasible, K = 0
    if (m == 0 || k == 0) return best;

    const std::size_t n_rows = m + k;           // constraints
    const std::size_t n_vars = m * k + m + k;   // shipments, row slacks, column slacks
    std::vector<double> rhs(n_rows);
    for (std::size_t i = 0; i < m; ++i) rhs[i] = surplus[i];
    for (std::size_t j = 0; j < k; ++j) rhs[m + j] = shortage[j];

    // rows touched by each variable (shipment vars touch two, slacks one)
    std::vector<std::pair<std::size_t, std::size_t>> touches(n_vars, {detail::kNoCell, detail::kNoCell});
    for (std::size_t v = 0; v < m * k; ++v) touches[v] = {v / k, m + v % k};
    for (std::size_t i = 0; i < m; ++i) touches[m * k + i] = {i, detail::kNoCell};
    for (std::size_t j = 0; j < k; ++j) touches[m * k + m + j] = {m + j, detail::kNoCell};

    std::vector<std::size_t> basis(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i) basis[i] = i;

    double a[8][9];  // n_rows <= 8: augmented system reused across bases
    std::vector<double> solution(n_rows);

    while (true) {
        for (std::size_t r = 0; r < n_rows; ++r) {
            for (std::size_t c = 0; c < n_rows; ++c) a[r][c] = 0.0;
            a[r][n_rows] = rhs[r];
        }
        for (std::size_t c = 0; c < n_rows; ++c) {
            const auto [r1, r2] = touches[basis[c]];
            a[r1][c] = 1.0;
            if (r2 != detail::kNoCell) a[r2][c] = 1.0;
        }

        bool singular = false;
        for (std::size_t col = 0; col < n_rows && !singular; ++col) {
            std::size_t pivot = col;
            for (std::size_t r = col + 1; r < n_rows; ++r)
                if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
            if (std::fabs(a[pivot][col]) < 1e-9) {
                singular = true;
                break;
            }
            if (pivot != col)
                for (std::size_t c = 0; c <= n_rows; ++c) std::swap(a[pivot][c], a[col][c]);
            for (std::size_t r = 0; r < n_rows; ++r) {
                if (r == col || a[r][col] == 0.0) continue;
                const double factor = a[r][col] / a[col][col];
                for (std::size_t c = col; c <= n_rows; ++c) a[r][c] -= factor * a[col][c];
            }
        }

        if (!singular) {
            bool feasible = true;
            for (std::size_t r = 0; r < n_rows; ++r) {
                solution[r] = a[r][n_rows] / a[r][r];
                if (solution[r] < -1e-9) {
                    feasible = false;
                    break;
                }
            }
            if (feasible) {
                double value = 0.0;
                for (std::size_t c = 0; c < n_rows; ++c)
                    if (basis[c] < m * k) value += profit(basis[c] / k, basis[c] % k) * std::max(0.0, solution[c]);
                if (value > best.objective_value) {
                    best.objective_value = value;
                    best.quantities = Matrix(m, k, 0.0);
                    for (std::size_t c = 0; c < n_rows; ++c)
                        if (basis[c] < m * k)
                            best.quantities(basis[c] / k, basis[c] % k) = std::max(0.0, solution[c]);
                }
            }
        }

        // next combination of n_rows variables out of n_vars
        std::size_t pos = n_rows;
        while (pos > 0 && basis[pos - 1] == n_vars - n_rows + pos - 1) --pos;
        if (pos == 0) break;
        ++basis[pos - 1];
        for (std::size_t p = pos; p < n_rows; ++p) basis[p] = basis[p - 1] + 1;
    }
    return best;
}

// True iff nonnegativity, row-capacity and column-capacity constraints all
// hold within tol.
inline bool check_feasible(const TransshipmentPlan& plan, const std::vector<double>& surplus,
                           const std::vector<double>& shortage, double tol = 1e-9) {
    const Matrix& t = plan.quantities;
    if (t.rows() != surplus.size() || t.cols() != shortage.size())
        throw std::invalid_argument("check_feasible: dimension mismatch");
    for (double q : t.data())
        if (q < -tol) return false;
    for (std::size_t i = 0; i < t.rows(); ++i) {
        double shipped = 0.0;
        for (std::size_t j = 0; j < t.cols(); ++j) shipped += t(i, j);
        if (shipped > surplus[i] + tol) return false;
    }
    for (std::size_t j = 0; j < t.cols(); ++j) {
        double received = 0.0;
        for (std::size_t i = 0; i < t.rows(); ++i) received += t(i, j);
        if (received > shortage[j] + tol) return false;
    }
    return true;
}

}  // namespace transopt::transship
