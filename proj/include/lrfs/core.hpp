#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace lrfs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// ---- Errors ----

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DuplicateLabelError;
class UnknownLabelError;
class LabelCollisionError;
class DegenerateNormalizerError;
class EmptyDensityError;
class CombinatorialCapError;
class ZeroClutterDensityError;
class UnsupportedDensityError;
class CardinalityOverflowError;
class StepUnderflowError;

/// Configuration / input-validation failure; carries the offending field path.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error(field.empty() ? what : field + ": " + what), field_path(std::move(field)) {}
    std::string field_path;
};

// ---- Labels ----

/// Track identity: (birth step, per-step serial index).
/// Totally ordered lexicographically; this fixed order is used wherever a
/// canonical ordering of labels is needed.
struct Label {
    int birth_step = 0;
    int index = 1;

    auto operator<=>(const Label&) const = default;
};

inline std::string to_string(const Label& l) {
    return std::to_string(l.birth_step) + ":" + std::to_string(l.index);
}

class DuplicateLabelError : public Error {
public:
    explicit DuplicateLabelError(Label l) : Error("duplicate label " + to_string(l)), label(l) {}
    Label label;
};

class UnknownLabelError : public Error {
public:
    explicit UnknownLabelError(Label l) : Error("unknown label " + to_string(l)), label(l) {}
    Label label;
};

class LabelCollisionError : public Error {
public:
    explicit LabelCollisionError(Label l)
        : Error("birth label collides with existing label " + to_string(l)), label(l) {}
    Label label;
};

class DegenerateNormalizerError : public Error {
public:
    using Error::Error;
};

class EmptyDensityError : public Error {
public:
    using Error::Error;
};

class CombinatorialCapError : public Error {
public:
    using Error::Error;
};

class ZeroClutterDensityError : public Error {
public:
    using Error::Error;
};

class UnsupportedDensityError : public Error {
public:
    using Error::Error;
};

class CardinalityOverflowError : public Error {
public:
    using Error::Error;
};

class StepUnderflowError : public Error {
public:
    using Error::Error;
};

// ---- Label sets ----

/// Sorted, duplicate-free collection of labels. Kept canonical so that
/// equality, ordering, and subset iteration are deterministic.
class LabelSet {
public:
    LabelSet() = default;
    LabelSet(std::initializer_list<Label> ls) : LabelSet(std::vector<Label>(ls)) {}
    explicit LabelSet(std::vector<Label> ls) : labels_(std::move(ls)) {
        std::sort(labels_.begin(), labels_.end());
        labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
    }

    [[nodiscard]] std::size_t size() const { return labels_.size(); }
    [[nodiscard]] bool empty() const { return labels_.empty(); }
    [[nodiscard]] bool contains(const Label& l) const {
        return std::binary_search(labels_.begin(), labels_.end(), l);
    }
    [[nodiscard]] bool subset_of(const LabelSet& other) const {
        return std::includes(other.labels_.begin(), other.labels_.end(),
                             labels_.begin(), labels_.end());
    }
    [[nodiscard]] bool disjoint_with(const LabelSet& other) const {
        for (const Label& l : labels_)
            if (other.contains(l)) return false;
        return true;
    }

    [[nodiscard]] LabelSet set_union(const LabelSet& other) const {
        std::vector<Label> out;
        std::set_union(labels_.begin(), labels_.end(), other.labels_.begin(),
                       other.labels_.end(), std::back_inserter(out));
        return from_sorted(std::move(out));
    }
    [[nodiscard]] LabelSet set_intersection(const LabelSet& other) const {
        std::vector<Label> out;
        std::set_intersection(labels_.begin(), labels_.end(), other.labels_.begin(),
                              other.labels_.end(), std::back_inserter(out));
        return from_sorted(std::move(out));
    }
    [[nodiscard]] LabelSet set_difference(const LabelSet& other) const {
        std::vector<Label> out;
        std::set_difference(labels_.begin(), labels_.end(), other.labels_.begin(),
                            other.labels_.end(), std::back_inserter(out));
        return from_sorted(std::move(out));
    }

    /// All 2^n subsets in a deterministic order (bitmask order over the
    /// sorted elements). Guarded against accidental blow-ups.
    [[nodiscard]] std::vector<LabelSet> subsets(std::size_t max_size_hint = 20) const {
        if (labels_.size() > max_size_hint)
            throw CombinatorialCapError("subset enumeration over " +
                                        std::to_string(labels_.size()) + " labels");
        std::vector<LabelSet> out;
        out.reserve(std::size_t(1) << labels_.size());
        for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << labels_.size()); ++mask) {
            std::vector<Label> sub;
            for (std::size_t i = 0; i < labels_.size(); ++i)
                if (mask & (std::uint64_t(1) << i)) sub.push_back(labels_[i]);
            out.push_back(from_sorted(std::move(sub)));
        }
        return out;
    }

    [[nodiscard]] const std::vector<Label>& elements() const { return labels_; }
    [[nodiscard]] auto begin() const { return labels_.begin(); }
    [[nodiscard]] auto end() const { return labels_.end(); }

    auto operator<=>(const LabelSet&) const = default;

    static LabelSet from_sorted(std::vector<Label> sorted) {
        LabelSet s;
        s.labels_ = std::move(sorted);
        return s;
    }

private:
    std::vector<Label> labels_;
};

inline std::string to_string(const LabelSet& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += to_string(s.elements()[i]);
    }
    return out + "}";
}

// ---- Labeled states and labeled finite sets ----

/// A single labeled target state: kinematic point plus track label.
struct LabeledState {
    Vector kinematic;
    Label label;
};

/// A finite set of labeled states with pairwise-distinct labels.
/// Construction goes through validate_lfs(); sets violating the
/// distinct-label condition are rejected rather than represented.
class LabeledFiniteSet {
public:
    LabeledFiniteSet() = default;

    [[nodiscard]] std::size_t size() const { return elements_.size(); }
    [[nodiscard]] bool empty() const { return elements_.empty(); }
    [[nodiscard]] const std::vector<LabeledState>& elements() const { return elements_; }

    [[nodiscard]] bool contains(const Label& l) const {
        return find(l) != nullptr;
    }
    /// The unique kinematic point carrying label l.
    [[nodiscard]] const Vector& state_of(const Label& l) const {
        const LabeledState* e = find(l);
        if (!e) throw UnknownLabelError(l);
        return e->kinematic;
    }

    friend LabeledFiniteSet validate_lfs(std::vector<LabeledState> elements);

private:
    [[nodiscard]] const LabeledState* find(const Label& l) const {
        auto it = std::lower_bound(elements_.begin(), elements_.end(), l,
                                   [](const LabeledState& e, const Label& q) { return e.label < q; });
        if (it != elements_.end() && it->label == l) return &*it;
        return nullptr;
    }

    std::vector<LabeledState> elements_;  // sorted by label
};

/// Builds a labeled finite set, rejecting duplicate labels.
inline LabeledFiniteSet validate_lfs(std::vector<LabeledState> elements) {
    std::stable_sort(elements.begin(), elements.end(),
                     [](const LabeledState& a, const LabeledState& b) { return a.label < b.label; });
    for (std::size_t i = 1; i < elements.size(); ++i)
        if (elements[i].label == elements[i - 1].label)
            throw DuplicateLabelError(elements[i].label);
    LabeledFiniteSet out;
    out.elements_ = std::move(elements);
    return out;
}

/// The set of labels carried by the elements of X.
inline LabelSet labels_of(const LabeledFiniteSet& x) {
    std::vector<Label> ls;
    ls.reserve(x.size());
    for (const LabeledState& e : x.elements()) ls.push_back(e.label);
    return LabelSet::from_sorted(std::move(ls));
}

/// Partitions X into the elements with persisting labels and the elements
/// with newly-appearing labels. Labels in neither set are rejected.
inline std::pair<LabeledFiniteSet, LabeledFiniteSet>
split_survivor_birth(const LabeledFiniteSet& x, const LabelSet& persisting, const LabelSet& birth) {
    if (!persisting.disjoint_with(birth))
        throw std::invalid_argument("persisting and birth label sets overlap");
    std::vector<LabeledState> surv, born;
    for (const LabeledState& e : x.elements()) {
        if (persisting.contains(e.label))
            surv.push_back(e);
        else if (birth.contains(e.label))
            born.push_back(e);
        else
            throw UnknownLabelError(e.label);
    }
    return { validate_lfs(std::move(surv)), validate_lfs(std::move(born)) };
}

/// Multi-Bernoulli label-set weight: the probability that exactly the
/// targets in L (out of the candidates in birth_labels, each existing
/// independently with its own probability) are present. Zero when L is not
/// a subset of birth_labels; sums to one over all subsets.
inline double lmb_weight(const LabelSet& birth_labels,
                         const std::map<Label, double>& existence,
                         const LabelSet& l_set) {
    if (!l_set.subset_of(birth_labels)) return 0.0;
    double w = 1.0;
    for (const Label& l : birth_labels) {
        auto it = existence.find(l);
        if (it == existence.end())
            throw std::invalid_argument("existence probability missing for label " + to_string(l));
        w *= l_set.contains(l) ? it->second : 1.0 - it->second;
    }
    return w;
}

}  // namespace lrfs
