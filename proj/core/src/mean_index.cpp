#include "sil/mean_index.hpp"

#include <sstream>

namespace sil {

MeanIndex::MeanIndex(Rat rational_part, std::vector<Term> terms)
    : rational_part_(std::move(rational_part)) {
    for (auto& t : terms) {
        if (t.rho.is_rational()) {
            rational_part_ += t.coeff * t.rho.exact_value();
        } else {
            terms_.push_back(std::move(t));
        }
    }
}

ExactReal MeanIndex::value() const {
    ExactReal v{rational_part_};
    for (const auto& t : terms_) v += t.coeff * t.rho.value();
    return v;
}

namespace {

// Collapse the term list to an id -> coefficient map; terms without a
// declared id cannot participate in relations and keep a synthetic key.
std::map<std::string, Rat> combo_of(const std::vector<MeanIndex::Term>& terms,
                                    std::map<std::string, ExactReal>* values) {
    std::map<std::string, Rat> combo;
    int anon = 0;
    for (const auto& t : terms) {
        std::string key =
            t.rho.id().empty() ? ("#anon" + std::to_string(anon++)) : t.rho.id();
        combo[key] += t.coeff;
        if (values) values->emplace(key, t.rho.value());
    }
    return combo;
}

} // namespace

bool MeanIndex::is_structurally_zero(const RelationSet& relations) const {
    std::map<std::string, ExactReal> values;
    auto combo = combo_of(terms_, &values);
    auto [rp, residual] = relations.reduce(rational_part_, combo);
    return residual.empty() && rp == 0;
}

int MeanIndex::sign(const RelationSet& relations) const {
    std::map<std::string, ExactReal> values;
    auto combo = combo_of(terms_, &values);
    auto [rp, residual] = relations.reduce(rational_part_, combo);
    if (residual.empty()) return rp == 0 ? 0 : (rp > 0 ? 1 : -1);
    ExactReal v = relations.evaluate(rp, residual, values);
    int s;
    try {
        s = v.sign();
    } catch (const PrecisionError&) {
        throw PrecisionError(
            "mean index sign undecidable at stored precision and not "
            "structurally forced: " +
            v.str());
    }
    if (s == 0)
        throw PrecisionError(
            "mean index enclosure collapses to zero without structural support");
    return s;
}

ExactReal MeanIndex::reduced_value(const RelationSet& relations) const {
    std::map<std::string, ExactReal> values;
    auto combo = combo_of(terms_, &values);
    auto [rp, residual] = relations.reduce(rational_part_, combo);
    return relations.evaluate(rp, residual, values);
}

std::string MeanIndex::str() const {
    std::ostringstream os;
    os << rat_to_string(rational_part_);
    for (const auto& t : terms_)
        os << " + " << rat_to_string(t.coeff) << "*(" << t.rho.str() << ")";
    return os.str();
}

} // namespace sil
