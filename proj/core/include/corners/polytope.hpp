#pragma once

#include <compare>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace corners {

/// A face of a polytope: dimension plus a dense per-dimension id.
struct FaceRef {
    int dim = 0;
    int id = 0;
    auto operator<=>(const FaceRef&) const = default;
};

/// A complete flag inside one face X of dimension d: entries f_0 < f_1 < ... < f_{d-1}
/// with f_i an i-face, all contained in X. The vertex flag is empty.
using Flag = std::vector<int>;

/// Combinatorial face lattice of a convex polytope.
///
/// Faces of each dimension are numbered densely; the single top face has id 0.
/// Every face carries a reference orientation given by its lexicographically
/// smallest flag, and flag parities relative to it are precomputed so that
/// orientation queries are table lookups. Instances are immutable.
class Polytope {
public:
    /// covers[d][f] lists the (d-1)-faces covered by d-face f, for d = 1..dim
    /// (covers[0] is ignored). Throws Error if the lattice is not a valid polytope
    /// lattice (grading, single top face, diamond property).
    static Polytope from_covering(std::string name, int dim,
                                  std::vector<std::vector<std::vector<int>>> covers);

    /// Parses the plain-text lattice format (see docs/formats.md).
    static Polytope parse(std::istream& in, std::string_view source = "<stream>");

    const std::string& name() const { return name_; }
    int dim() const { return dim_; }
    int count(int d) const { return static_cast<int>(faces_[d].size()); }
    /// f_0 .. f_{dim-1}.
    std::vector<int> fvector() const;

    std::span<const int> sub(int d, int id) const { return faces_[d][id].sub; }
    std::span<const int> super(int d, int id) const { return faces_[d][id].super; }
    /// Sorted vertex ids of a face.
    std::span<const int> vertices(int d, int id) const { return faces_[d][id].vertices; }
    std::optional<int> face_with_vertices(int d, std::span<const int> sorted_vertices) const;
    /// All faces of dimension sub_dim contained in (d, id), ascending.
    std::vector<int> faces_of(int d, int id, int sub_dim) const;
    bool contains(FaceRef outer, FaceRef inner) const;

    /// f-vector of a single face; screens candidates before isomorphism search.
    std::vector<int> fvector_of(FaceRef face) const;

    Flag reference_flag(FaceRef face) const { return faces_[face.dim][face.id].ref_flag; }
    /// The unique flag of `face` differing from `flag` exactly in entry i.
    Flag adjacent_flag(FaceRef face, const Flag& flag, int i) const;
    /// All flags of a face in lexicographic order.
    std::vector<Flag> flags(FaceRef face) const;
    /// +1 if `flag` is in the reference orientation class of `face`, -1 otherwise.
    int flag_parity(FaceRef face, const Flag& flag) const;
    /// Incidence number [X : Y] of a facet Y of X under reference orientations.
    int incidence(int d, int id, int sub_id) const;

private:
    struct Face {
        std::vector<int> sub;
        std::vector<int> super;
        std::vector<int> vertices;
        Flag ref_flag;
        std::vector<int> sub_sign;  // aligned with `sub`
        std::map<Flag, signed char> parity;
    };

    void derive();
    void validate() const;
    void compute_orientations();

    std::string name_;
    int dim_ = 0;
    std::vector<std::vector<Face>> faces_;
    std::vector<std::map<std::vector<int>, int>> by_vertices_;
};

using PolytopePtr = std::shared_ptr<const Polytope>;

/// Loads a catalog polytope: pentagon, hexagon, dodecahedron, lobell6, 120cell.
/// The data directory is taken from $CORNERS_DATA, falling back to the build and
/// install locations. Results are cached and shared.
PolytopePtr catalog_load(std::string_view name);

/// Names accepted by catalog_load.
std::vector<std::string> catalog_names();

/// Loads a user-supplied lattice file.
PolytopePtr load_lattice_file(const std::string& path);

/// Lattice isomorphism between a face of one polytope and a face of another,
/// stored as the bijection of vertices.
struct FaceIso {
    PolytopePtr source;
    FaceRef source_face;
    PolytopePtr target;
    FaceRef target_face;
    /// Sorted by source vertex.
    std::vector<std::pair<int, int>> vertex_map;

    int map_vertex(int v) const;
    /// Image of a face of the source polytope contained in source_face.
    std::optional<FaceRef> map_face(FaceRef f) const;
    FaceIso inverse() const;
    /// The restriction to a subface of source_face.
    FaceIso restrict_to(FaceRef f) const;
    /// Flag image under the iso (flag of a subface of source_face).
    Flag map_flag(const Flag& flag) const;

    /// Throws Error unless vertex_map induces a face-lattice isomorphism.
    void validate() const;
    bool is_valid() const;
};

/// Composition second∘first (first.target must equal second.source face).
FaceIso compose(const FaceIso& first, const FaceIso& second);

FaceIso identity_iso(const PolytopePtr& p, FaceRef face);

/// All lattice isomorphisms from face x of p to face y of q, ordered
/// lexicographically by the image sequence of the sorted source vertices.
std::vector<FaceIso> all_isomorphisms(const PolytopePtr& p, FaceRef x, const PolytopePtr& q,
                                      FaceRef y);

/// Given an iso from facet F of face A to facet G of face B, returns the unique
/// isomorphism A -> B restricting to it. Throws Error if none exists.
FaceIso extend_facet_iso(const FaceIso& iso, FaceRef a, FaceRef b);

/// +1 iff iso carries the source reference orientation to the target's.
int orientation_sign(const FaceIso& iso);

}  // namespace corners
