#pragma once

#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "lrfs/core.hpp"

namespace lrfs {

/// Cost treated as "forbidden" in assignment problems.
inline constexpr double kInfeasibleCost = 1e30;

/// Min-cost assignment of rows to columns (rows <= cols, each row takes
/// exactly one column, each column at most one row).
struct AssignmentSolution {
    std::vector<int> column_of_row;  // empty if infeasible
    double cost = kInfeasibleCost;
};

/// Jonker-Volgenant style shortest augmenting paths; entries at or above
/// kInfeasibleCost are forbidden. Returns an infeasible solution when no
/// finite-cost assignment exists.
inline AssignmentSolution solve_assignment(const std::vector<std::vector<double>>& cost) {
    const int n = int(cost.size());
    if (n == 0) return { {}, 0.0 };
    const int m = int(cost.front().size());
    if (m < n) return { {}, kInfeasibleCost };

    const double kInf = std::numeric_limits<double>::infinity();
    // 1-based potentials; row 0 / col 0 are virtual.
    std::vector<double> u(std::size_t(n) + 1, 0.0), v(std::size_t(m) + 1, 0.0);
    std::vector<int> match(std::size_t(m) + 1, 0);  // row matched to column
    std::vector<int> way(std::size_t(m) + 1, 0);

    for (int i = 1; i <= n; ++i) {
        std::vector<double> minv(std::size_t(m) + 1, kInf);
        std::vector<char> used(std::size_t(m) + 1, false);
        int j0 = 0;
        match[0] = i;
        do {
            used[std::size_t(j0)] = true;
            int i0 = match[std::size_t(j0)], j1 = -1;
            double delta = kInf;
            for (int j = 1; j <= m; ++j) {
                if (used[std::size_t(j)]) continue;
                double c = cost[std::size_t(i0 - 1)][std::size_t(j - 1)];
                if (c >= kInfeasibleCost) c = kInf;
                double cur = c - u[std::size_t(i0)] - v[std::size_t(j)];
                if (cur < minv[std::size_t(j)]) {
                    minv[std::size_t(j)] = cur;
                    way[std::size_t(j)] = j0;
                }
                if (minv[std::size_t(j)] < delta) {
                    delta = minv[std::size_t(j)];
                    j1 = j;
                }
            }
            if (j1 < 0 || delta == kInf) return { {}, kInfeasibleCost };  // no augmenting path
            for (int j = 0; j <= m; ++j) {
                if (used[std::size_t(j)]) {
                    u[std::size_t(match[std::size_t(j)])] += delta;
                    v[std::size_t(j)] -= delta;
                } else {
                    minv[std::size_t(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[std::size_t(j0)] != 0);
        do {
            int j1 = way[std::size_t(j0)];
            match[std::size_t(j0)] = match[std::size_t(j1)];
            j0 = j1;
        } while (j0);
    }

    AssignmentSolution sol;
    sol.column_of_row.assign(std::size_t(n), -1);
    sol.cost = 0.0;
    for (int j = 1; j <= m; ++j) {
        if (match[std::size_t(j)] > 0) {
            sol.column_of_row[std::size_t(match[std::size_t(j)] - 1)] = j - 1;
            sol.cost += cost[std::size_t(match[std::size_t(j)] - 1)][std::size_t(j - 1)];
        }
    }
    if (sol.cost >= kInfeasibleCost) return { {}, kInfeasibleCost };
    return sol;
}

/// k lowest-cost assignments in nondecreasing cost order, via Murty's
/// partitioning of the solution space around successive optima.
/// Solutions are reported in original row indexing.
inline std::vector<AssignmentSolution>
murty_kbest(const std::vector<std::vector<double>>& cost, int k) {
    struct Node {
        std::vector<std::vector<double>> sub_cost;     // remaining rows x all columns
        std::vector<int> row_of_sub;                   // original row per subproblem row
        std::vector<std::pair<int, int>> forced;       // (original row, col)
        double forced_cost = 0.0;
        AssignmentSolution sub_best;
        [[nodiscard]] double total() const { return forced_cost + sub_best.cost; }
    };
    auto cmp = [](const Node& a, const Node& b) { return a.total() > b.total(); };
    std::priority_queue<Node, std::vector<Node>, decltype(cmp)> queue(cmp);

    const int n = int(cost.size());
    {
        Node root;
        root.sub_cost = cost;
        for (int r = 0; r < n; ++r) root.row_of_sub.push_back(r);
        root.sub_best = solve_assignment(root.sub_cost);
        if (!root.sub_best.column_of_row.empty() || n == 0) queue.push(std::move(root));
    }

    std::vector<AssignmentSolution> out;
    while (!queue.empty() && int(out.size()) < k) {
        Node node = queue.top();
        queue.pop();

        AssignmentSolution full;
        full.column_of_row.assign(std::size_t(n), -1);
        full.cost = node.total();
        for (auto [r, c] : node.forced) full.column_of_row[std::size_t(r)] = c;
        for (std::size_t s = 0; s < node.row_of_sub.size(); ++s)
            full.column_of_row[std::size_t(node.row_of_sub[s])] = node.sub_best.column_of_row[s];
        out.push_back(std::move(full));

        // Partition. At step t the pivot is always the first remaining row of
        // `work`: earlier pivots have been forced and removed in order.
        Node work = node;
        const std::size_t q = node.row_of_sub.size();
        for (std::size_t t = 0; t < q; ++t) {
            int orig_row = node.row_of_sub[t];
            int chosen = node.sub_best.column_of_row[t];

            Node child = work;
            child.sub_cost[0][std::size_t(chosen)] = kInfeasibleCost;
            child.sub_best = solve_assignment(child.sub_cost);
            if (!child.sub_best.column_of_row.empty()) queue.push(std::move(child));

            if (t + 1 == q) break;
            work.forced.emplace_back(orig_row, chosen);
            work.forced_cost += cost[std::size_t(orig_row)][std::size_t(chosen)];
            work.sub_cost.erase(work.sub_cost.begin());
            work.row_of_sub.erase(work.row_of_sub.begin());
            for (auto& row : work.sub_cost) row[std::size_t(chosen)] = kInfeasibleCost;
        }
    }
    return out;
}

}  // namespace lrfs
