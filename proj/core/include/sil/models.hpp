#pragma once

#include <optional>

#include "sil/ledger.hpp"
#include "sil/surface.hpp"

namespace sil {

// One ellipsoid semi-axis: exact rational or a decimal truncation.
struct AxisValue {
    bool rational = false;
    Rat exact;
    std::string decimal;
    int digits = 0;

    ExactReal value() const;
    static AxisValue from_rat(Rat v);
    static AxisValue from_decimal(const std::string& decimal, int digits);
};

struct EllipsoidSpec {
    std::vector<AxisValue> axes; // strictly increasing, pairwise-irrational ratios
    // Optional declared exact relations among the ratio fractional parts,
    // ids "a<j>/a<k>" (e.g. a1/a2 + a1/a3 = 1 for power-law axes).  Checked
    // against the enclosures, then trusted.
    std::vector<Relation> relations;
};

// Characteristic germs of the ellipsoid with semi-axes a_1 < ... < a_n.
// Construction runs the crossing-count oracle and the resonance identity as
// mandatory gates; disagreement fails loudly.
SurfaceModel ellipsoid(const EllipsoidSpec& spec);

// Independent oracle: Maslov-type index of the m-th iterate of orbit j
// (0-based) obtained by sweeping the linearized rotation path and counting
// crossings, not by the iteration formula.
long ellipsoid_crossing_index(const EllipsoidSpec& spec, int j, long m);

// Admissibility annotations attached to a loaded synthetic model.
struct SyntheticAnnotations {
    std::vector<int> mean_signs; // +1 / -1 / 0
    bool all_nondegenerate = true;
    std::optional<ResonanceReport> resonance;
    std::string resonance_note;
    std::optional<PerfectReport> perfect;
    std::string perfect_note;
    int q0 = 0; // positive-mean count
    bool admissible = false;
};

SyntheticAnnotations annotate(const SurfaceModel& model, const Rat& resonance_tol);

// Load a user-specified germ collection from model-file JSON and annotate it.
// Inadmissible models load with their flags set; inconsistent declared
// relations and parse errors throw.
std::pair<SurfaceModel, SyntheticAnnotations> synthetic(
    const std::string& config_json, const Rat& resonance_tol = Rat(1, 1000000000));

} // namespace sil
