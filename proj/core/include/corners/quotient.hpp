#pragma once

#include "corners/colouring.hpp"
#include "corners/corner_complex.hpp"
#include "corners/homology.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace corners {

/// Subgroup of Z_2^m in reduced echelon form: each basis vector owns a pivot bit
/// (its highest bit) that no other basis vector has set.
class Stabilizer {
public:
    void add(std::uint64_t v);
    int rank() const { return static_cast<int>(basis_.size()); }
    /// Canonical coset representative: the minimum of u + subgroup.
    std::uint64_t reduce(std::uint64_t u) const;
    std::uint64_t pivots() const { return pivots_; }

private:
    std::vector<std::uint64_t> basis_;
    std::uint64_t pivots_ = 0;
};

/// The closed manifold (W x Z_2^m)/~ as a CW complex. Cells are (stratum of W,
/// coset of its stabiliser), stored contiguously per stratum with ascending
/// canonical representatives.
struct QuotientComplex {
    int dim = 0;
    int m = 0;
    std::vector<std::vector<Stabilizer>> stab;  // [d][stratum]
    std::vector<std::vector<long long>> offset;  // [d][stratum], one past the end at the back
    std::vector<std::vector<std::vector<std::pair<int, int>>>> base_boundary;  // [d][stratum]
    ChainComplex chain;
    long long components = 0;
    bool orientable = false;
    /// For complexes of 120-cells: whether 2 chi == 17 * (top cells).
    std::optional<bool> chi_120_identity;

    long long cells(int d) const { return offset[d].back(); }
    long long cell_index(int d, int stratum, std::uint64_t u) const;
    /// Inverse of cell_index.
    std::pair<int, std::uint64_t> cell_at(int d, long long index) const;
    long long euler_characteristic() const { return chain.euler_characteristic(); }
};

/// Throws Error for invalid colourings, non-embedded facets, or if the assembled
/// boundary maps do not compose to zero.
QuotientComplex build_quotient(const CornerComplex& w, const GeneralisedColouring& rho);

/// chi predicted from stabiliser ranks alone: sum over strata c of (-1)^dim 2^(m - rank stab c).
long long weighted_euler(const CornerComplex& w, const GeneralisedColouring& rho);

/// The same quotient as an explicit closed tessellation with 2^m copies of every chamber.
CornerComplex quotient_tessellation(const CornerComplex& w, const GeneralisedColouring& rho);

struct SeparationReport {
    int components_after_removal = 0;
    long long separating_copies = 0;
    long long expected_copies = 0;
    bool copies_match = false;  // every copy has the cell counts of the mirrored facet
    bool involution_is_isomorphism = false;
    bool swaps_sides = false;

    bool ok() const {
        return components_after_removal == 2 && separating_copies == expected_copies && copies_match &&
               involution_is_isomorphism && swaps_sides;
    }
};

/// Checks that the image of the mirrored facet separates the quotient of the
/// doubled complex into two pieces exchanged by the mirror involution.
/// Throws Error unless lambda is symmetric.
SeparationReport separation_check(const MirrorResult& w, const Colouring& lambda);

/// Cell tables followed by the coordinate lists of the boundary maps.
void write_quotient_dump(std::ostream& out, const QuotientComplex& q);

}  // namespace corners
