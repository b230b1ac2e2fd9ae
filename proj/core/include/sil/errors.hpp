#pragma once

#include <stdexcept>
#include <string>

namespace sil {

// Exit-code taxonomy used by the CLI: 1 check failure, 2 usage/parse,
// 3 precision/undecidable, 4 scan exhaustion.

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A comparison or rounding whose truth is not decidable at the stored
// precision.  Raised instead of guessing.
struct PrecisionError : Error {
    using Error::Error;
};

// A stated hypothesis of an operation is violated by the input
// (zero mean index where nonzero is required, degenerate characteristic, ...).
struct HypothesisError : Error {
    using Error::Error;
};

// An exact check that was expected to hold failed (verification, tamper,
// inadmissible model).
struct CheckFailure : Error {
    using Error::Error;
};

// Malformed input files or command lines.
struct ParseError : Error {
    using Error::Error;
};

struct DimensionError : Error {
    using Error::Error;
};

// The N-scan hit its limit before the requested number of solutions was
// found.  Solutions exist in abundance but without an effective bound, so
// this is an honest partial result.
struct ScanExhausted : Error {
    long found = 0;
    explicit ScanExhausted(const std::string& what, long found_count)
        : Error(what), found(found_count) {}
};

// A Morse-type number that is provably infinite (zero-mean-index germ).
struct InfiniteMorseCount : CheckFailure {
    long p = 0;
    explicit InfiniteMorseCount(long index)
        : CheckFailure("infinite count at p = " + std::to_string(index)), p(index) {}
};

} // namespace sil
