#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tower {

// Runs one workbench command. args is the argv tail (no program name).
//
// Exit codes: 0 success (including an exists answer of "no"), 1 a checked
// property was violated, 2 usage or parse error, 3 precision exhausted,
// 4 construction unsupported for the requested rank.
//
// Output is byte-deterministic: the same args and seeds produce the same
// bytes on out. Artifacts are written only by the explicit --out commands;
// query commands never rewrite their inputs.
int cli_run(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace tower
