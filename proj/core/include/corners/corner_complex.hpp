#pragma once

#include "corners/polytope.hpp"

#include <compare>
#include <optional>
#include <vector>

namespace corners {

/// A (chamber, polytope-facet) pair: a place where a gluing may attach.
struct Slot {
    int chamber = 0;
    int facet = 0;
    auto operator<=>(const Slot&) const = default;
};

/// Glues slot a onto slot b; iso maps the facet of a's polytope onto the facet of b's.
struct Gluing {
    Slot a;
    Slot b;
    FaceIso iso;
};

/// A face of one chamber.
struct Germ {
    int chamber = 0;
    int face = 0;
    auto operator<=>(const Germ&) const = default;
};

/// A cell of the glued complex: the class of germs identified by the gluings.
struct Stratum {
    int dim = 0;
    std::vector<Germ> germs;  // germs[0] is the representative
    std::vector<int> germ_sign;  // orientation of each germ relative to germs[0]
    /// Signed boundary: (stratum of dimension dim-1, summed incidence). A zero sum
    /// still appears so that cell adjacency is never lost.
    std::vector<std::pair<int, int>> boundary;
    /// Facets of the corner complex containing this stratum, ascending.
    std::vector<int> facets;
    bool on_boundary() const { return !facets.empty(); }
};

struct Facet {
    int id = 0;
    std::vector<Slot> slots;  // ascending
    std::vector<int> adjacent;  // other facets meeting this one at a corner, ascending
    bool isolated = true;
    bool embedded = true;
};

/// A codimension-2 boundary stratum where two facet germs meet at a right angle.
struct Corner {
    int stratum = 0;
    Germ germ;
    Slot first;
    Slot second;
};

/// Right-angled polytope chambers glued along pairs of facets, with the derived
/// stratification and the facets of the resulting manifold with corners.
class CornerComplex {
public:
    /// Throws Error on invalid gluings or a local-model violation.
    static CornerComplex build(std::vector<PolytopePtr> chambers, std::vector<Gluing> gluings);

    int dim() const { return dim_; }
    const std::vector<PolytopePtr>& chambers() const { return chambers_; }
    const std::vector<Gluing>& gluings() const { return gluings_; }
    const std::vector<Stratum>& strata(int d) const { return strata_[d]; }
    int stratum_of(int d, Germ g) const { return germ_stratum_[d][germ_offset_[d][g.chamber] + g.face]; }
    std::optional<int> gluing_at(Slot s) const;
    /// Facet containing an unglued slot; -1 for glued slots.
    int facet_of(Slot s) const { return slot_facet_[germ_offset_[dim_ - 1][s.chamber] + s.facet]; }
    const std::vector<Facet>& facets() const { return facets_; }
    const std::vector<Corner>& corners() const { return corners_; }
    bool closed() const { return facets_.empty(); }
    bool all_embedded() const;
    /// Germ count summed over strata of every dimension.
    long long germ_total() const;

private:
    int dim_ = 0;
    std::vector<PolytopePtr> chambers_;
    std::vector<Gluing> gluings_;
    std::vector<std::vector<int>> germ_offset_;  // [d][chamber]
    std::vector<std::vector<int>> germ_stratum_;  // [d][global germ]
    std::vector<int> slot_gluing_;  // by global (n-1)-germ
    std::vector<int> slot_facet_;
    std::vector<std::vector<Stratum>> strata_;
    std::vector<Facet> facets_;
    std::vector<Corner> corners_;
};

struct ThickenResult {
    CornerComplex complex;
    int m_facet = 0;
};

/// Replaces every chamber P_i of a closed complex by a host polytope Q_i with P_i
/// identified with facet 0 of Q_i, extending each gluing to the neighbouring facets.
ThickenResult thicken(const CornerComplex& m, const PolytopePtr& host);

/// Canonical identification of a polytope with facet 0 of the host: the least iso.
FaceIso host_identification(const PolytopePtr& p, const PolytopePtr& host);

struct MirrorResult {
    CornerComplex complex;
    std::vector<int> involution;  // facet -> facet
    std::vector<int> side;  // +1 for the copy on chambers [0, n), -1 for the other
    int copy_chambers = 0;  // n: chamber c of the input is c and c + n here
    std::vector<Slot> mirror_slots;  // slots of the mirrored facet, in the +1 copy
};

/// Doubles w along an isolated facet.
MirrorResult mirror(const CornerComplex& w, int facet);

/// Facet count of the doubled thickening of a closed dodecahedral 3-manifold
/// built from n dodecahedra.
long long facet_count_prediction(long long n);

}  // namespace corners
