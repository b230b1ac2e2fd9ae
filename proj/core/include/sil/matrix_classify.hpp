#pragma once

#include <vector>

#include "sil/normal_form.hpp"

namespace sil {

// Numeric front end: classify a real symplectic 2n x 2n matrix (row-major,
// coordinates ordered q_1..q_n, p_1..p_n) into a normal form, for spectra
// that are semisimple on the unit circle apart from one allowed unipotent
// pair at ±1.  Unit-circle pairs are split R(rho) vs R(1-rho) by the Krein
// sign of -iJ on the eigenvector; rotation numbers come out irrational-kind
// at a precision derived from tol.  N2 recovery from numeric data is not
// attempted: such spectra are rejected with a diagnostic.
NormalForm classify_matrix(const std::vector<double>& matrix, int two_n,
                           double tol);

// Assemble a symplectic matrix realizing the given form (semisimple circle
// spectrum only; OffCircle blocks need even half-dimension).  Rotation
// numbers are realized at their enclosure midpoint.
std::vector<double> realize_matrix(const NormalForm& nf);

} // namespace sil
