#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "lrfs/assignment.hpp"
#include "lrfs/mta.hpp"

using namespace lrfs;

namespace {

// Independent reference: enumerate all maps labels -> {0..m} by counting in
// base m+1 and keep those injective on nonzero values.
int brute_force_mta_count(int n, int m) {
    int count = 0;
    std::vector<int> digits(std::size_t(n), 0);
    while (true) {
        std::vector<int> nonzero;
        for (int d : digits)
            if (d > 0) nonzero.push_back(d);
        std::sort(nonzero.begin(), nonzero.end());
        if (std::adjacent_find(nonzero.begin(), nonzero.end()) == nonzero.end()) ++count;
        int t = n - 1;
        while (t >= 0 && digits[std::size_t(t)] == m) digits[std::size_t(t--)] = 0;
        if (t < 0) break;
        ++digits[std::size_t(t)];
    }
    return count;
}

std::vector<Label> make_labels(int n) {
    std::vector<Label> ls;
    for (int i = 1; i <= n; ++i) ls.push_back({ 0, i });
    return ls;
}

// Reference assignment: try every injective row-to-column map.
double brute_force_assignment(const std::vector<std::vector<double>>& cost) {
    std::size_t n = cost.size(), m = cost.front().size();
    std::vector<int> cols(m);
    for (std::size_t j = 0; j < m; ++j) cols[j] = int(j);
    double best = kInfeasibleCost;
    std::vector<int> pick(n);
    auto rec = [&](auto&& self, std::size_t r, double acc) -> void {
        if (acc >= best) return;
        if (r == n) {
            best = acc;
            return;
        }
        for (std::size_t j = 0; j < m; ++j) {
            if (std::find(pick.begin(), pick.begin() + long(r), int(j)) != pick.begin() + long(r))
                continue;
            pick[r] = int(j);
            self(self, r + 1, acc + cost[r][j]);
        }
    };
    rec(rec, 0, 0.0);
    return best;
}

}  // namespace

TEST_CASE("MTA injectivity on nonzero values is enforced") {
    Label a{ 0, 1 }, b{ 0, 2 };
    CHECK_NOTHROW(Mta({ { a, 0 }, { b, 0 } }));
    CHECK_NOTHROW(Mta({ { a, 1 }, { b, 2 } }));
    CHECK_THROWS(Mta({ { a, 1 }, { b, 1 } }));
    Mta theta({ { a, 2 } });
    CHECK(theta.of(a) == 2);
    CHECK(theta.of(b) == 0);  // outside the domain reads as missed
}

TEST_CASE("MTA enumeration counts follow the combinatorial formula") {
    CHECK(enumerate_mtas(LabelSet{}, 3).size() == 1);
    CHECK(enumerate_mtas(LabelSet{ Label{ 0, 1 } }, 1).size() == 2);
    CHECK(enumerate_mtas(LabelSet{ Label{ 0, 1 }, Label{ 0, 2 } }, 2).size() == 7);
    for (int n = 0; n <= 4; ++n)
        for (int m = 0; m <= 4; ++m) {
            auto all = enumerate_mtas(LabelSet(make_labels(n)), m);
            int ref = brute_force_mta_count(n, m);
            CHECK(int(all.size()) == ref);
            CHECK(mta_count(n, m) == Catch::Approx(double(ref)));
            // Enumerated MTAs are pairwise distinct.
            std::vector<Mta> sorted = all;
            std::sort(sorted.begin(), sorted.end());
            CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
        }
}

TEST_CASE("MTA enumeration refuses to exceed the cap") {
    CHECK_THROWS_AS(enumerate_mtas(LabelSet(make_labels(8)), 8, 100.0), CombinatorialCapError);
}

TEST_CASE("assignment solver matches brute force on random costs") {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> unif(0.0, 10.0);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = 1 + rng() % 4, m = n + rng() % 3;
        std::vector<std::vector<double>> cost(n, std::vector<double>(m));
        for (auto& row : cost)
            for (double& c : row) c = unif(rng);
        if (trial % 3 == 0) cost[rng() % n][rng() % m] = kInfeasibleCost;
        auto sol = solve_assignment(cost);
        double ref = brute_force_assignment(cost);
        if (ref >= kInfeasibleCost) {
            CHECK(sol.column_of_row.empty());
        } else {
            REQUIRE_FALSE(sol.column_of_row.empty());
            CHECK(sol.cost == Catch::Approx(ref).margin(1e-9));
            std::vector<int> used = sol.column_of_row;
            std::sort(used.begin(), used.end());
            CHECK(std::adjacent_find(used.begin(), used.end()) == used.end());
        }
    }
}

TEST_CASE("k-best assignments come out sorted and complete") {
    std::mt19937 rng(33);
    std::uniform_real_distribution<double> unif(0.0, 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 1 + rng() % 3, m = n + rng() % 3;
        std::vector<std::vector<double>> cost(n, std::vector<double>(m));
        for (auto& row : cost)
            for (double& c : row) c = unif(rng);

        // Reference: enumerate every injective assignment and sort by cost.
        std::vector<double> all_costs;
        std::vector<int> pick(n, -1);
        auto rec = [&](auto&& self, std::size_t r, double acc) -> void {
            if (r == n) {
                all_costs.push_back(acc);
                return;
            }
            for (std::size_t j = 0; j < m; ++j) {
                if (std::find(pick.begin(), pick.begin() + long(r), int(j)) !=
                    pick.begin() + long(r))
                    continue;
                pick[r] = int(j);
                self(self, r + 1, acc + cost[r][j]);
            }
            pick[r] = -1;
        };
        rec(rec, 0, 0.0);
        std::sort(all_costs.begin(), all_costs.end());

        auto kbest = murty_kbest(cost, int(all_costs.size()) + 5);
        REQUIRE(kbest.size() == all_costs.size());
        for (std::size_t i = 0; i < kbest.size(); ++i) {
            CHECK(kbest[i].cost == Catch::Approx(all_costs[i]).margin(1e-9));
            if (i) CHECK(kbest[i].cost >= kbest[i - 1].cost - 1e-12);
        }
    }
}
