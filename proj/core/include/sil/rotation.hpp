#pragma once

#include <string>

#include "sil/exact.hpp"

namespace sil {

// A normalized rotation angle theta/2pi in (0,1).  Rational values are exact
// p/q in lowest terms; irrational values are certified enclosures declared
// irrational by the user (decimal truncation to `digits` places, or an
// arbitrary derived enclosure).  Every fractional-part computation on an
// irrational value goes through the certified interval ops in exact.hpp.
class RotationNumber {
public:
    enum class Kind { Rational, Irrational };

    static RotationNumber rational(const Rat& v);
    static RotationNumber rational(long p, long q);
    // `decimal` is a truncation: the value lies in [decimal, decimal + 10^-digits].
    static RotationNumber irrational(const std::string& decimal, int digits,
                                     std::string id = "");
    // Enclosure produced by exact arithmetic on other certified inputs.
    static RotationNumber derived(const ExactReal& range, int digits,
                                  std::string id = "");

    Kind kind() const { return kind_; }
    bool is_rational() const { return kind_ == Kind::Rational; }
    const Rat& exact_value() const;       // rational kind only
    ExactReal value() const;              // enclosure (exact for rational)
    int digits() const { return digits_; }
    const std::string& id() const { return id_; }
    const std::string& decimal() const { return decimal_; }

    void set_id(std::string id) { id_ = std::move(id); }

    // Exact identity of stored rotation data, not numeric closeness.
    bool same_as(const RotationNumber& o) const;

    std::string str() const;

    static constexpr int kMinDigits = 12;

private:
    RotationNumber() = default;
    Kind kind_ = Kind::Rational;
    Rat exact_;
    ExactReal range_;
    int digits_ = 0;
    std::string id_;
    std::string decimal_;
};

// A point e^{2 pi i t} on the upper-or-lower unit circle with t in (0,1),
// written through a stored rotation number: t = rho or t = 1 - rho.
struct CirclePoint {
    RotationNumber rho;
    bool reflected = false;

    ExactReal t() const;             // theta / 2pi in (0,1)
    ExactReal theta_over_pi() const; // 2t, the alpha of the jump instances
    bool is_rational() const { return rho.is_rational(); }
    CirclePoint conjugate() const { return {rho, !reflected}; }
    bool same_point(const CirclePoint& o) const;
    std::string str() const;
};

} // namespace sil
