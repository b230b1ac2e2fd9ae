#pragma once

#include <map>
#include <string>
#include <vector>

#include "sil/exact.hpp"

namespace sil {

// A declared exact linear relation among named irrational rotation values,
// e.g. rho1 + rho2 = 1.  Declarations are user assertions; they are checked
// for consistency against the stored enclosures and then trusted for
// structural sign decisions.
struct Relation {
    std::vector<std::pair<Rat, std::string>> terms; // coeff * id
    Rat rhs;
    std::string str() const;
};

class RelationSet {
public:
    RelationSet() = default;
    explicit RelationSet(std::vector<Relation> relations);

    bool empty() const { return relations_.empty(); }
    const std::vector<Relation>& relations() const { return relations_; }

    // Rejects the set if a relation is certifiably violated by the
    // enclosures, and binds them for later residual evaluation (reduction can
    // substitute ids that a single germ does not carry itself).
    void validate(const std::map<std::string, ExactReal>& values);

    // Reduce rational_part + sum(coeff_i * id_i) modulo the relation lattice.
    // Returns the new rational part and the surviving irrational terms.
    std::pair<Rat, std::map<std::string, Rat>> reduce(
        const Rat& rational_part, const std::map<std::string, Rat>& combo) const;

    // Enclosure of rational_part + residual, resolving ids first locally and
    // then through the bound values.
    ExactReal evaluate(const Rat& rational_part,
                       const std::map<std::string, Rat>& residual,
                       const std::map<std::string, ExactReal>& local) const;

private:
    std::vector<Relation> relations_;
    // Row-echelon form: pivot id -> (row of id coefficients, rhs).
    std::vector<std::pair<std::string, std::pair<std::map<std::string, Rat>, Rat>>>
        echelon_;
    std::map<std::string, ExactReal> bound_;
};

} // namespace sil
