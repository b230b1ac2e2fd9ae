#include "sil/surface.hpp"

#include <algorithm>

namespace sil {

bool PrimeCharacteristic::nondegenerate() const {
    // nullity_at(m) == 1 for all m iff the single N1(1,1) factor is the only
    // circle spectrum that ever lands on 1: no other N1 block and no rational
    // rotation point.
    const auto& nf = germ.end_form;
    auto census = nf.census();
    if (census.n1_pos != 1 || census.n1_neg != 0) return false;
    bool seen_n1 = false;
    for (const auto& b : nf.blocks()) {
        if (const auto* n1 = std::get_if<BlockN1>(&b)) {
            if (n1->lambda != 1 || n1->b != 1) return false;
            seen_n1 = true;
        } else if (const auto* r = std::get_if<BlockR>(&b)) {
            if (r->rho.is_rational()) return false;
        } else if (const auto* n2 = std::get_if<BlockN2>(&b)) {
            if (n2->rho.is_rational()) return false;
        }
    }
    return seen_n1;
}

SurfaceModel::SurfaceModel(int n, std::vector<PrimeCharacteristic> characteristics,
                           RelationSet relations)
    : n_(n),
      characteristics_(std::move(characteristics)),
      relations_(std::move(relations)) {
    if (n_ < 1) throw Error("SurfaceModel: n must be positive");
    std::map<std::string, ExactReal> values;
    for (const auto& c : characteristics_) {
        if (c.germ.end_form.n() != n_)
            throw DimensionError("characteristic " + c.name + " has half-dimension " +
                                 std::to_string(c.germ.end_form.n()) +
                                 ", model has n=" + std::to_string(n_));
        int n1_one = 0;
        for (const auto& b : c.germ.end_form.blocks())
            if (const auto* n1 = std::get_if<BlockN1>(&b))
                if (n1->lambda == 1 && n1->b == 1) n1_one++;
        if (n1_one != 1)
            throw Error("characteristic " + c.name +
                        " must carry exactly one N1(1,1) factor");
        for (const auto& p : c.germ.end_form.circle_points())
            if (!p.pt.rho.id().empty())
                values.emplace(p.pt.rho.id(), p.pt.rho.value());
    }
    relations_.validate(values);
}

const PrimeCharacteristic& SurfaceModel::by_name(const std::string& name) const {
    for (const auto& c : characteristics_)
        if (c.name == name) return c;
    throw ParseError("no characteristic named '" + name + "'");
}

std::vector<int> SurfaceModel::mean_signs() const {
    std::vector<int> signs;
    for (const auto& c : characteristics_) {
        MeanIndex mi = mean_index(c.germ);
        signs.push_back(mi.is_structurally_zero(relations_) ? 0
                                                            : mi.sign(relations_));
    }
    return signs;
}

int SurfaceModel::q0() const {
    auto signs = mean_signs();
    int q0 = 0;
    bool in_positive = true;
    for (int s : signs) {
        if (s == 0)
            throw HypothesisError("zero mean index present; (MMI) split undefined");
        if (s > 0) {
            if (!in_positive)
                throw HypothesisError(
                    "characteristics not ordered positive-mean-first; use "
                    "mmi_ordered()");
            q0++;
        } else {
            in_positive = false;
        }
    }
    return q0;
}

SurfaceModel SurfaceModel::mmi_ordered() const {
    auto signs = mean_signs();
    std::vector<PrimeCharacteristic> ordered;
    for (size_t i = 0; i < characteristics_.size(); ++i)
        if (signs[i] > 0) ordered.push_back(characteristics_[i]);
    for (size_t i = 0; i < characteristics_.size(); ++i)
        if (signs[i] <= 0) ordered.push_back(characteristics_[i]);
    return SurfaceModel(n_, std::move(ordered), relations_);
}

JumpInstance SurfaceModel::jump_instance(const Rat& delta) const {
    std::vector<PathGerm> germs;
    for (const auto& c : characteristics_) germs.push_back(c.germ);
    return JumpInstance::make(std::move(germs), n_, relations_, delta);
}

} // namespace sil
