#pragma once

#include <iosfwd>

namespace sil {

// Command dispatch for the sil tool.  Exit codes: 0 success/pass, 1 check
// failure, 2 usage/parse error, 3 precision/undecidable, 4 scan exhaustion.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

} // namespace sil
