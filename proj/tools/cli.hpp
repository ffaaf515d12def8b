// Batch front end: one subcommand per pipeline, JSON (or CSV) on the output
// stream. Exit codes: 0 success, 1 usage or configuration error, 2 a check
// failed or a computation broke an invariant.
#pragma once

#include <iosfwd>

namespace hplab::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hplab::cli
