#pragma once

#include "corners/colouring.hpp"
#include "corners/corner_complex.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace corners {

/// Parsed tessellation file: chambers all of one polytope type plus facet gluings.
struct Tessellation {
    PolytopePtr polytope;
    int chambers = 0;
    std::vector<Gluing> gluings;

    CornerComplex build() const;
};

/// Grammar (docs/formats.md):
///   dim <n>; polytope <catalog name or lattice path>; chambers <count>
///   glue <c1>.<f1> <c2>.<f2> : <v>-><w>, ...
/// Blank lines and '#' comments are ignored; "→" is accepted for "->".
Tessellation read_tessellation(std::istream& in);
Tessellation read_tessellation_file(const std::string& path);
/// Throws Error unless every chamber has the same polytope.
void write_tessellation(std::ostream& out, const CornerComplex& w);

/// Colouring file: header "colouring <k>" then "<facet> <colour>" lines, or header
/// "generalised <m>" then "<facet> <bits>" with bits a 0/1 word whose i-th
/// character is the coefficient of e_{i+1}. Every facet appears exactly once.
struct ColouringFile {
    std::optional<Colouring> plain;
    GeneralisedColouring generalised;  // the lift when plain is set
};
ColouringFile read_colouring(std::istream& in);
ColouringFile read_colouring_file(const std::string& path);
void write_colouring(std::ostream& out, const Colouring& c);
void write_colouring(std::ostream& out, const GeneralisedColouring& rho);

}  // namespace corners
