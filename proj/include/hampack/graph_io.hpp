#pragma once

#include <iosfwd>
#include <string>

#include "hampack/digraph.hpp"

namespace hampack {

// Text format:
//   digraph n=<n> m=<arcs>
//   <u> <v>            one line per arc, in (u, v) lexicographic order
// Lines starting with '#' and blank lines are ignored on read.
void write_digraph_text(std::ostream& out, const Digraph& d);
Digraph read_digraph_text(std::istream& in);

// Binary format: magic "HPLX1", then n as little-endian u64, then n rows of
// ceil(n/64) little-endian u64 words holding the out-neighbour bitset of
// each vertex (bit v of row u set iff u -> v).
void write_digraph_binary(std::ostream& out, const Digraph& d);
Digraph read_digraph_binary(std::istream& in);

/// Dispatches on the first bytes of the file.
Digraph load_digraph(const std::string& path);
/// Writes binary when the path ends in ".bin", text otherwise.
void save_digraph(const std::string& path, const Digraph& d);

}  // namespace hampack
