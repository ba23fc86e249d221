#pragma once

#include <filesystem>
#include <iosfwd>

#include "lpfp/lp.hpp"

namespace lpfp {

// MPS layout written here:
//
//   NAME          <lp.name>
//   OBJSENSE
//       MAX
//   ROWS
//    N  OBJ
//    E  R_<i>_<j>
//   COLUMNS
//       MU_<i>_<j>  OBJ  <c>  R_<i>_<j>  <a>
//       M_<i>_<j>_<k> ...
//   RHS
//       RHS  R_<i>_<j>  <b>
//   BOUNDS
//   ENDATA
//
// Fields follow the fixed-format column positions; names longer than eight
// characters widen their field, so readers should parse the file as free MPS
// (names never contain spaces). Values are printed with 17 significant digits.
// Zero objective entries and zero right-hand sides are omitted. BOUNDS is
// empty: every variable is nonnegative.

void write_mps(const LinearProgram& lp, std::ostream& out);
void export_mps(const LinearProgram& lp, const std::filesystem::path& path);

/// Reads the subset written by write_mps (equality rows, default bounds).
/// Throws std::runtime_error with the offending line number otherwise.
LinearProgram read_mps(std::istream& in);
LinearProgram import_mps(const std::filesystem::path& path);

} // namespace lpfp
