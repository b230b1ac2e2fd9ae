#include "sil/relations.hpp"

#include <sstream>

namespace sil {

std::string Relation::str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [c, id] : terms) {
        if (!first) os << " + ";
        os << rat_to_string(c) << "*" << id;
        first = false;
    }
    os << " = " << rat_to_string(rhs);
    return os.str();
}

RelationSet::RelationSet(std::vector<Relation> relations)
    : relations_(std::move(relations)) {
    // Gaussian elimination to echelon form over the rationals.
    for (const auto& rel : relations_) {
        std::map<std::string, Rat> row;
        for (const auto& [c, id] : rel.terms) {
            if (id.empty()) throw Error("relation term with empty id");
            row[id] += c;
        }
        Rat rhs = rel.rhs;
        for (const auto& [pivot, prow] : echelon_) {
            auto it = row.find(pivot);
            if (it == row.end() || it->second == 0) continue;
            Rat f = it->second;
            row.erase(it);
            for (const auto& [id, c] : prow.first) row[id] -= f * c;
            rhs -= f * prow.second;
        }
        std::erase_if(row, [](const auto& kv) { return kv.second == 0; });
        if (row.empty()) {
            if (rhs != 0)
                throw CheckFailure("inconsistent declared relations: " + rel.str());
            continue; // redundant relation
        }
        auto pivot = row.begin()->first;
        Rat pc = row.begin()->second;
        std::map<std::string, Rat> norm;
        for (const auto& [id, c] : row)
            if (id != pivot) norm[id] = c / pc;
        echelon_.emplace_back(pivot, std::make_pair(std::move(norm), rhs / pc));
    }
}

void RelationSet::validate(const std::map<std::string, ExactReal>& values) {
    for (const auto& rel : relations_) {
        ExactReal sum{Rat(0)};
        for (const auto& [c, id] : rel.terms) {
            auto it = values.find(id);
            if (it == values.end())
                throw CheckFailure("relation references unknown rotation id '" + id +
                                   "': " + rel.str());
            sum += c * it->second;
        }
        if (!sum.contains(rel.rhs))
            throw CheckFailure("declared relation is certifiably violated: " +
                               rel.str() + " (lhs in " + sum.str() + ")");
    }
    for (const auto& [id, v] : values) bound_.insert_or_assign(id, v);
}

ExactReal RelationSet::evaluate(const Rat& rational_part,
                                const std::map<std::string, Rat>& residual,
                                const std::map<std::string, ExactReal>& local) const {
    ExactReal v{rational_part};
    for (const auto& [id, c] : residual) {
        auto it = local.find(id);
        if (it != local.end()) {
            v += c * it->second;
            continue;
        }
        auto bt = bound_.find(id);
        if (bt == bound_.end())
            throw PrecisionError("no enclosure available for rotation id '" + id +
                                 "' after relation reduction");
        v += c * bt->second;
    }
    return v;
}

std::pair<Rat, std::map<std::string, Rat>> RelationSet::reduce(
    const Rat& rational_part, const std::map<std::string, Rat>& combo) const {
    Rat rp = rational_part;
    std::map<std::string, Rat> c = combo;
    for (const auto& [pivot, prow] : echelon_) {
        auto it = c.find(pivot);
        if (it == c.end() || it->second == 0) continue;
        Rat f = it->second;
        c.erase(it);
        // pivot = rhs - sum(prow_i * id_i)
        rp += f * prow.second;
        for (const auto& [id, coeff] : prow.first) c[id] -= f * coeff;
    }
    std::erase_if(c, [](const auto& kv) { return kv.second == 0; });
    return {rp, c};
}

} // namespace sil
