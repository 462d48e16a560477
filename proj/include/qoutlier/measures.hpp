#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qoutlier/rational.hpp"

namespace qoutlier {

/// Finite-support probability with exact rational weights.
class ElementaryMeasure {
public:
    struct Atom {
        std::string id;
        Rational prob;
    };

    explicit ElementaryMeasure(std::vector<Atom> support);

    const std::vector<Atom>& support() const { return support_; }
    bool contains(const std::string& id) const;
    const Rational& prob(const std::string& id) const;
    std::size_t size() const { return support_.size(); }

    static ElementaryMeasure uniform(const std::vector<std::string>& ids);

private:
    std::vector<Atom> support_;
};

/// Prefix code lengths in bits; Kraft sum must not exceed 1.
class CodeLengthTable {
public:
    explicit CodeLengthTable(std::map<std::string, long> lengths);

    long length(const std::string& id) const;
    bool contains(const std::string& id) const;
    const std::map<std::string, long>& lengths() const { return lengths_; }
    Rational kraft_sum() const;

private:
    std::map<std::string, long> lengths_;
};

/// Kraft-safe Shannon code for Q: L(x) = ceil(-log2 Q(x)) + 1.
CodeLengthTable default_code_table(const ElementaryMeasure& q);

/// floor(-log2 Q(x)) - L(x), exact.
long deficiency_classical(const std::string& x, const ElementaryMeasure& q,
                          const CodeLengthTable& l);

struct ConditionedMeasure {
    ElementaryMeasure measure;
    Rational retained_mass; // pre-normalization mass of the kept atoms
};

ConditionedMeasure condition_measure(const ElementaryMeasure& q,
                                     const std::function<bool(const std::string&)>& keep);

/// Canonical serialization of a (measure, code table) pair; its bit length is
/// the ℓ(⟨Q⟩) surrogate.
std::string canonical_measure_json(const ElementaryMeasure& q, const CodeLengthTable& l);

struct StochasticityCandidate {
    ElementaryMeasure measure;
    CodeLengthTable table;
};

/// Upper bound on stochasticity relative to the candidate family:
/// min over candidates of ℓ(⟨Q⟩) + ceil(3 log2 max{d(x|Q), 1}).
long stochasticity_upper(const std::string& x,
                         const std::vector<StochasticityCandidate>& candidates);

} // namespace qoutlier
