#pragma once

#include <vector>

#include "sil/relations.hpp"
#include "sil/rotation.hpp"

namespace sil {

// Mean index per iterate, kept symbolically exact: a rational part plus a
// rational combination of stored irrational rotation values.  The sign is
// certified: zero is claimed only when the combination vanishes structurally
// (possibly after reduction by declared relations), never from a numerically
// small enclosure.
class MeanIndex {
public:
    struct Term {
        Rat coeff;
        RotationNumber rho;
    };

    MeanIndex() = default;
    MeanIndex(Rat rational_part, std::vector<Term> terms);

    const Rat& rational_part() const { return rational_part_; }
    const std::vector<Term>& terms() const { return terms_; }

    ExactReal value() const;

    // +1 / -1 / 0, exact; throws PrecisionError when the enclosure straddles
    // zero and no structural decision is available.
    int sign(const RelationSet& relations = {}) const;

    bool is_structurally_zero(const RelationSet& relations = {}) const;

    std::string str() const;

    // Enclosure of the value after reduction by declared relations; sharper
    // than value() whenever a relation collapses irrational terms.
    ExactReal reduced_value(const RelationSet& relations) const;

private:
    Rat rational_part_;
    std::vector<Term> terms_; // irrational terms only
};

} // namespace sil
