#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "panto/field.hpp"
#include "panto/problem.hpp"

namespace panto::cli {

// Textual mini-grammar:
//   field:   linear:<lambda> | affine:<lambda>,<c> | poly:<c0>,<c1>,...
//   profile: poly:<c0>,<c1>,... | const:<v>
Field parse_field(const std::string& spec);

struct ParsedProfile {
    Profile profile;
    std::string canonical; // normalized spec text; parse(canonical) == this
};
ParsedProfile parse_profile(const std::string& spec);

// Normalized text for a field spec (parse/print round-trip).
std::string canonical_field_spec(const std::string& spec);

// Full CLI entry point. argv excludes the program name. Returns the process
// exit code: 0 success, 2 validation error, 3 numerical failure.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

} // namespace panto::cli
