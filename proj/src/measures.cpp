#include "qoutlier/measures.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "qoutlier/errors.hpp"

namespace qoutlier {

ElementaryMeasure::ElementaryMeasure(std::vector<Atom> support) : support_(std::move(support)) {
    if (support_.empty()) throw DomainError("measure needs nonempty support");
    Rational total = 0;
    std::set<std::string> seen;
    for (const auto& a : support_) {
        if (a.prob <= 0) throw ContractError("measure atom with nonpositive probability: " + a.id);
        if (!seen.insert(a.id).second) throw ContractError("duplicate id in measure: " + a.id);
        total += a.prob;
    }
    if (total != 1) {
        throw ContractError("measure probabilities sum to " + rational_to_string(total) + ", not 1");
    }
}

bool ElementaryMeasure::contains(const std::string& id) const {
    return std::any_of(support_.begin(), support_.end(),
                       [&](const Atom& a) { return a.id == id; });
}

const Rational& ElementaryMeasure::prob(const std::string& id) const {
    for (const auto& a : support_) {
        if (a.id == id) return a.prob;
    }
    throw DomainError("id not in measure support: " + id);
}

ElementaryMeasure ElementaryMeasure::uniform(const std::vector<std::string>& ids) {
    std::vector<Atom> atoms;
    atoms.reserve(ids.size());
    const Rational p(1, BigInt(ids.size()));
    for (const auto& id : ids) atoms.push_back({id, p});
    return ElementaryMeasure(std::move(atoms));
}

CodeLengthTable::CodeLengthTable(std::map<std::string, long> lengths)
    : lengths_(std::move(lengths)) {
    for (const auto& [id, len] : lengths_) {
        if (len < 1) throw ContractError("code length must be positive for id " + id);
    }
    if (kraft_sum() > 1) throw ContractError("code table violates the Kraft inequality");
}

long CodeLengthTable::length(const std::string& id) const {
    const auto it = lengths_.find(id);
    if (it == lengths_.end()) throw DomainError("id not in code table: " + id);
    return it->second;
}

bool CodeLengthTable::contains(const std::string& id) const {
    return lengths_.count(id) != 0;
}

Rational CodeLengthTable::kraft_sum() const {
    Rational s = 0;
    for (const auto& [id, len] : lengths_) s += pow2(-len);
    return s;
}

CodeLengthTable default_code_table(const ElementaryMeasure& q) {
    std::map<std::string, long> lengths;
    for (const auto& a : q.support()) {
        lengths[a.id] = -floor_log2(a.prob) + 1;
    }
    return CodeLengthTable(std::move(lengths));
}

long deficiency_classical(const std::string& x, const ElementaryMeasure& q,
                          const CodeLengthTable& l) {
    // floor(-log2 p) == -ceil(log2 p)
    return -ceil_log2(q.prob(x)) - l.length(x);
}

ConditionedMeasure condition_measure(const ElementaryMeasure& q,
                                     const std::function<bool(const std::string&)>& keep) {
    std::vector<ElementaryMeasure::Atom> kept;
    Rational retained = 0;
    for (const auto& a : q.support()) {
        if (keep(a.id)) {
            kept.push_back(a);
            retained += a.prob;
        }
    }
    if (kept.empty()) throw ConditioningError("conditioning removed all support");
    for (auto& a : kept) a.prob /= retained;
    return {ElementaryMeasure(std::move(kept)), retained};
}

std::string canonical_measure_json(const ElementaryMeasure& q, const CodeLengthTable& l) {
    std::string out = "{\"support\":[";
    bool first = true;
    for (const auto& a : q.support()) {
        if (!first) out += ",";
        first = false;
        out += "{\"codelen\":" + std::to_string(l.length(a.id));
        out += ",\"den\":" + boost::multiprecision::denominator(a.prob).str();
        out += ",\"id\":\"" + a.id + "\"";
        out += ",\"num\":" + boost::multiprecision::numerator(a.prob).str() + "}";
    }
    out += "]}";
    return out;
}

long stochasticity_upper(const std::string& x,
                         const std::vector<StochasticityCandidate>& candidates) {
    long best = std::numeric_limits<long>::max();
    for (const auto& c : candidates) {
        if (!c.measure.contains(x) || !c.table.contains(x)) continue;
        const long d = deficiency_classical(x, c.measure, c.table);
        // ceil(3 log2 max{d,1}) computed exactly as ceil_log2(d^3)
        long penalty = 0;
        if (d > 1) penalty = ceil_log2(Rational(BigInt(d) * d * d, 1));
        const long model_bits =
            8L * static_cast<long>(canonical_measure_json(c.measure, c.table).size());
        best = std::min(best, model_bits + penalty);
    }
    if (best == std::numeric_limits<long>::max()) {
        throw DomainError("stochasticity_upper: no candidate covers " + x);
    }
    return best;
}

} // namespace qoutlier
