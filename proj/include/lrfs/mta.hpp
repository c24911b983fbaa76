#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "lrfs/core.hpp"

namespace lrfs {

/// Measurement-to-track association: maps each label of its domain to 0
/// (missed detection) or to a 1-based measurement index, injectively on
/// the nonzero values.
class Mta {
public:
    Mta() = default;
    explicit Mta(std::map<Label, int> assignment) : assignment_(std::move(assignment)) {
        std::vector<int> used;
        for (const auto& [l, j] : assignment_) {
            if (j < 0) throw std::invalid_argument("negative measurement index");
            if (j > 0) used.push_back(j);
        }
        std::sort(used.begin(), used.end());
        if (std::adjacent_find(used.begin(), used.end()) != used.end())
            throw std::invalid_argument("measurement assigned to two labels");
    }

    /// Assignment of label l; labels outside the domain read as missed.
    [[nodiscard]] int of(const Label& l) const {
        auto it = assignment_.find(l);
        return it == assignment_.end() ? 0 : it->second;
    }

    [[nodiscard]] const std::map<Label, int>& assignment() const { return assignment_; }

    /// Canonical encoding: the nonzero assignments, sorted by label.
    /// Two MTAs that agree after zero-extension encode identically.
    [[nodiscard]] std::vector<std::pair<Label, int>> encoding() const {
        std::vector<std::pair<Label, int>> enc;
        for (const auto& [l, j] : assignment_)
            if (j > 0) enc.emplace_back(l, j);
        return enc;
    }

    auto operator<=>(const Mta&) const = default;

private:
    std::map<Label, int> assignment_;
};

/// Number of MTAs on n labels with m measurements:
/// sum_j C(n,j) C(m,j) j!   (j = number of detected labels).
inline double mta_count(int n, int m) {
    double total = 0.0;
    for (int j = 0; j <= std::min(n, m); ++j) {
        double term = 1.0;
        // C(n,j) * C(m,j) * j! = C(n,j) * m!/(m-j)!
        for (int t = 0; t < j; ++t)
            term *= (double(n - t) / double(t + 1)) * double(m - t);
        total += term;
    }
    return total;
}

/// Enumerates every MTA on the given labels for m measurements, in a fixed
/// lexicographic order (labels sorted; assignment values 0..m).
/// Throws CombinatorialCapError when the count exceeds max_count; ranked
/// truncation should be used instead at that point.
inline std::vector<Mta> enumerate_mtas(const LabelSet& labels, int m,
                                       double max_count = 2.0e5) {
    if (m < 0) throw std::invalid_argument("negative measurement count");
    double count = mta_count(int(labels.size()), m);
    if (count > max_count)
        throw CombinatorialCapError("MTA count " + std::to_string(count) + " exceeds cap " +
                                    std::to_string(max_count));
    std::vector<Mta> out;
    out.reserve(std::size_t(count));
    const auto& ls = labels.elements();
    std::map<Label, int> current;
    std::vector<bool> used(std::size_t(m) + 1, false);
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == ls.size()) {
            out.emplace_back(current);
            return;
        }
        for (int j = 0; j <= m; ++j) {
            if (j > 0 && used[std::size_t(j)]) continue;
            current[ls[i]] = j;
            if (j > 0) used[std::size_t(j)] = true;
            self(self, i + 1);
            if (j > 0) used[std::size_t(j)] = false;
        }
        current.erase(ls[i]);
    };
    rec(rec, 0);
    return out;
}

}  // namespace lrfs
