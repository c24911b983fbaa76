#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "lrfs/core.hpp"
#include "lrfs/gaussian.hpp"

namespace lrfs {

/// Multi-Bernoulli birth: independent candidate targets, each with an
/// existence probability and one spatial p.d.f.
struct LmbBirth {
    LabelSet labels;
    std::map<Label, double> existence;
    std::map<Label, GaussianMixture> spatial;
};

/// Cluster birth for closely-spaced targets: the multi-Bernoulli label-set
/// weight is kept, but the joint spatial distribution is a mixture, over a
/// small set of correlation atoms, of independent per-target hypotheses.
/// With a single atom this reduces exactly to LmbBirth.
struct SlcBirthModel {
    LabelSet labels;
    std::map<Label, double> existence;
    std::vector<std::int32_t> correlation_atoms;                      // sorted index set
    std::map<std::pair<std::int32_t, LabelSet>, double> alpha;        // per (atom, label subset)
    std::map<std::pair<std::int32_t, Label>, GaussianMixture> spatial;

    [[nodiscard]] bool empty() const { return labels.empty(); }

    /// Whether hypothesis indices must be extended by a birth atom.
    [[nodiscard]] bool extends_index() const { return correlation_atoms.size() > 1; }

    [[nodiscard]] double alpha_of(std::int32_t atom, const LabelSet& subset) const {
        auto it = alpha.find({ atom, subset });
        return it == alpha.end() ? 0.0 : it->second;
    }

    [[nodiscard]] const GaussianMixture& spatial_of(std::int32_t atom, const Label& l) const {
        auto it = spatial.find({ atom, l });
        if (it == spatial.end()) throw UnknownLabelError(l);
        return it->second;
    }

    /// No newly-appearing targets.
    static SlcBirthModel none() { return {}; }

    /// A multi-Bernoulli birth seen as the single-atom special case.
    static SlcBirthModel from_lmb(const LmbBirth& b) {
        SlcBirthModel m;
        m.labels = b.labels;
        m.existence = b.existence;
        m.correlation_atoms = { 0 };
        for (const LabelSet& sub : b.labels.subsets()) m.alpha[{ 0, sub }] = 1.0;
        for (const auto& [l, s] : b.spatial) m.spatial[{ 0, l }] = s;
        return m;
    }

    /// Builds a model whose atom weights are the same for every label
    /// subset. `per_atom_spatial[a]` maps each label to its hypothesized
    /// spatial p.d.f. under atom `atoms[a]`.
    static SlcBirthModel shared_alpha(LabelSet labels, std::map<Label, double> existence,
                                      std::vector<std::int32_t> atoms,
                                      std::vector<double> atom_weights,
                                      std::vector<std::map<Label, GaussianMixture>> per_atom_spatial) {
        if (atoms.size() != atom_weights.size() || atoms.size() != per_atom_spatial.size())
            throw std::invalid_argument("atoms, weights, and spatial tables must align");
        SlcBirthModel m;
        m.labels = std::move(labels);
        m.existence = std::move(existence);
        m.correlation_atoms = std::move(atoms);
        for (const LabelSet& sub : m.labels.subsets())
            for (std::size_t a = 0; a < m.correlation_atoms.size(); ++a)
                m.alpha[{ m.correlation_atoms[a], sub }] = atom_weights[a];
        for (std::size_t a = 0; a < m.correlation_atoms.size(); ++a)
            for (auto& [l, s] : per_atom_spatial[a]) m.spatial[{ m.correlation_atoms[a], l }] = s;
        m.validate();
        return m;
    }

    void validate() const {
        if (labels.empty()) return;
        for (const Label& l : labels) {
            auto it = existence.find(l);
            if (it == existence.end())
                throw std::invalid_argument("missing existence probability for " + to_string(l));
            if (it->second < 0.0 || it->second > 1.0)
                throw std::invalid_argument("existence probability outside [0,1]");
        }
        if (correlation_atoms.empty())
            throw std::invalid_argument("birth model needs at least one correlation atom");
        for (const LabelSet& sub : labels.subsets()) {
            double sum = 0.0;
            for (std::int32_t a : correlation_atoms) sum += alpha_of(a, sub);
            if (std::abs(sum - 1.0) > 1e-9)
                throw std::invalid_argument("atom weights for subset " + to_string(sub) +
                                            " sum to " + std::to_string(sum));
        }
        for (std::int32_t a : correlation_atoms)
            for (const Label& l : labels)
                if (spatial.find({ a, l }) == spatial.end())
                    throw std::invalid_argument("missing birth spatial p.d.f. for atom " +
                                                std::to_string(a) + ", label " + to_string(l));
    }
};

}  // namespace lrfs
