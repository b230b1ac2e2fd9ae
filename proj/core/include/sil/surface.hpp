#pragma once

#include <string>
#include <vector>

#include "sil/cij.hpp"
#include "sil/germ.hpp"

namespace sil {

// A prime closed characteristic in germ form.  The star-shaped normalization
// forces exactly one N1(1,1) factor in the end form; nondegeneracy (nullity 1
// for every iterate) is derivable: no other unit-circle spectrum that ever
// returns to 1.
struct PrimeCharacteristic {
    std::string name;
    PathGerm germ;

    bool nondegenerate() const;
};

// A finite collection of prime closed characteristics with half-dimension n
// and optional declared exact relations among rotation values.
class SurfaceModel {
public:
    SurfaceModel() = default;
    SurfaceModel(int n, std::vector<PrimeCharacteristic> characteristics,
                 RelationSet relations = {});

    int n() const { return n_; }
    const std::vector<PrimeCharacteristic>& characteristics() const {
        return characteristics_;
    }
    const RelationSet& relations() const { return relations_; }

    const PrimeCharacteristic& by_name(const std::string& name) const;

    // Mean-index signs, certified: +1 / -1 / 0 per characteristic.
    std::vector<int> mean_signs() const;

    // Count of positive-mean characteristics when the model is ordered with
    // positive means first; throws when a zero mean or mixed ordering breaks
    // the (MMI) layout.
    int q0() const;

    // Model reordered positive-mean-first (stable), as (MMI) assumes.
    SurfaceModel mmi_ordered() const;

    JumpInstance jump_instance(const Rat& delta = Rat(1, 20)) const;

private:
    int n_ = 0;
    std::vector<PrimeCharacteristic> characteristics_;
    RelationSet relations_;
};

} // namespace sil
