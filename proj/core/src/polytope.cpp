#include "corners/polytope.hpp"

#include "corners/error.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <istream>
#include <mutex>
#include <set>
#include <sstream>
#include <unordered_map>

#ifndef CORNERS_BUILD_DATA_DIR
#define CORNERS_BUILD_DATA_DIR ""
#endif
#ifndef CORNERS_INSTALL_DATA_DIR
#define CORNERS_INSTALL_DATA_DIR ""
#endif

namespace corners {

namespace {

std::string describe(FaceRef f) { return std::to_string(f.dim) + "-face " + std::to_string(f.id); }

}  // namespace

Polytope Polytope::from_covering(std::string name, int dim,
                                 std::vector<std::vector<std::vector<int>>> covers) {
    if (dim < 1) throw Error("polytope dimension must be at least 1");
    if (static_cast<int>(covers.size()) != dim + 1) throw Error("covering table has wrong depth");
    if (covers[dim].size() != 1) throw Error("polytope must have exactly one top face");
    Polytope p;
    p.name_ = std::move(name);
    p.dim_ = dim;
    p.faces_.resize(dim + 1);
    int nverts = 0;
    for (const auto& e : covers[1])
        for (int v : e) nverts = std::max(nverts, v + 1);
    p.faces_[0].resize(nverts);
    for (int d = 1; d <= dim; ++d) {
        p.faces_[d].resize(covers[d].size());
        int below = static_cast<int>(d == 1 ? nverts : covers[d - 1].size());
        for (std::size_t f = 0; f < covers[d].size(); ++f) {
            auto subs = covers[d][f];
            std::sort(subs.begin(), subs.end());
            if (std::adjacent_find(subs.begin(), subs.end()) != subs.end())
                throw Error(p.name_ + ": duplicate covering pair at " +
                            describe({d, static_cast<int>(f)}));
            for (int s : subs)
                if (s < 0 || s >= below)
                    throw Error(p.name_ + ": subface id out of range at " +
                                describe({d, static_cast<int>(f)}));
            p.faces_[d][f].sub = std::move(subs);
        }
    }
    p.derive();
    p.validate();
    p.compute_orientations();
    return p;
}

void Polytope::derive() {
    for (int d = 1; d <= dim_; ++d)
        for (int f = 0; f < count(d); ++f)
            for (int s : faces_[d][f].sub) faces_[d - 1][s].super.push_back(f);
    by_vertices_.assign(dim_ + 1, {});
    for (int v = 0; v < count(0); ++v) faces_[0][v].vertices = {v};
    for (int d = 1; d <= dim_; ++d) {
        for (int f = 0; f < count(d); ++f) {
            std::set<int> vs;
            for (int s : faces_[d][f].sub)
                vs.insert(faces_[d - 1][s].vertices.begin(), faces_[d - 1][s].vertices.end());
            faces_[d][f].vertices.assign(vs.begin(), vs.end());
        }
    }
    for (int d = 0; d <= dim_; ++d) {
        for (int f = 0; f < count(d); ++f) {
            auto [it, fresh] = by_vertices_[d].emplace(faces_[d][f].vertices, f);
            if (!fresh)
                throw Error(name_ + ": faces " + std::to_string(it->second) + " and " +
                            std::to_string(f) + " of dimension " + std::to_string(d) +
                            " share a vertex set");
        }
    }
}

void Polytope::validate() const {
    for (int d = 0; d < dim_; ++d)
        for (int f = 0; f < count(d); ++f)
            if (faces_[d][f].super.empty())
                throw Error(name_ + ": " + describe({d, f}) + " lies in no face of dimension " +
                            std::to_string(d + 1));
    for (int e = 0; e < count(1); ++e)
        if (faces_[1][e].sub.size() != 2)
            throw Error(name_ + ": edge " + std::to_string(e) + " does not have two vertices");
    // Diamond property: each (d-2)-face of a d-face lies in exactly two of its (d-1)-faces.
    for (int d = 2; d <= dim_; ++d) {
        for (int f = 0; f < count(d); ++f) {
            std::map<int, int> seen;
            for (int s : faces_[d][f].sub)
                for (int r : faces_[d - 1][s].sub) ++seen[r];
            for (auto [r, n] : seen)
                if (n != 2)
                    throw Error(name_ + ": diamond property fails at " + describe({d, f}) +
                                " over " + describe({d - 2, r}));
        }
    }
}

std::vector<int> Polytope::fvector() const {
    std::vector<int> out;
    for (int d = 0; d < dim_; ++d) out.push_back(count(d));
    return out;
}

std::optional<int> Polytope::face_with_vertices(int d, std::span<const int> sorted_vertices) const {
    if (d < 0 || d > dim_) return std::nullopt;
    auto it = by_vertices_[d].find(std::vector<int>(sorted_vertices.begin(), sorted_vertices.end()));
    if (it == by_vertices_[d].end()) return std::nullopt;
    return it->second;
}

std::vector<int> Polytope::faces_of(int d, int id, int sub_dim) const {
    std::vector<int> cur{id};
    for (int k = d; k > sub_dim; --k) {
        std::set<int> next;
        for (int f : cur) next.insert(faces_[k][f].sub.begin(), faces_[k][f].sub.end());
        cur.assign(next.begin(), next.end());
    }
    return cur;
}

bool Polytope::contains(FaceRef outer, FaceRef inner) const {
    if (inner.dim > outer.dim) return false;
    const auto& a = faces_[outer.dim][outer.id].vertices;
    const auto& b = faces_[inner.dim][inner.id].vertices;
    return std::includes(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<int> Polytope::fvector_of(FaceRef face) const {
    std::vector<int> out;
    for (int d = 0; d < face.dim; ++d)
        out.push_back(static_cast<int>(faces_of(face.dim, face.id, d).size()));
    return out;
}

Flag Polytope::adjacent_flag(FaceRef face, const Flag& flag, int i) const {
    const int d = face.dim;
    FaceRef upper = (i + 1 < d) ? FaceRef{i + 1, flag[i + 1]} : face;
    Flag out = flag;
    if (i == 0) {
        const auto& ends = faces_[1][upper.id].sub;
        out[0] = ends[0] == flag[0] ? ends[1] : ends[0];
        return out;
    }
    const auto& ups = faces_[i - 1][flag[i - 1]].super;
    const auto& downs = faces_[upper.dim][upper.id].sub;
    for (int c : ups) {
        if (c == flag[i]) continue;
        if (std::find(downs.begin(), downs.end(), c) != downs.end()) {
            out[i] = c;
            return out;
        }
    }
    throw Error(name_ + ": no adjacent flag at position " + std::to_string(i));
}

std::vector<Flag> Polytope::flags(FaceRef face) const {
    if (face.dim == 0) return {Flag{}};
    std::vector<Flag> out;
    for (int y : faces_[face.dim][face.id].sub) {
        for (auto fl : flags({face.dim - 1, y})) {
            fl.push_back(y);
            out.push_back(std::move(fl));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int Polytope::flag_parity(FaceRef face, const Flag& flag) const {
    const auto& par = faces_[face.dim][face.id].parity;
    auto it = par.find(flag);
    if (it == par.end()) throw Error(name_ + ": not a flag of " + describe(face));
    return it->second;
}

int Polytope::incidence(int d, int id, int sub_id) const {
    const auto& f = faces_[d][id];
    auto it = std::find(f.sub.begin(), f.sub.end(), sub_id);
    if (it == f.sub.end()) return 0;
    return f.sub_sign[it - f.sub.begin()];
}

void Polytope::compute_orientations() {
    for (int d = 0; d <= dim_; ++d) {
        for (int f = 0; f < count(d); ++f) {
            Face& face = faces_[d][f];
            // Greedy descent from the top gives the lexicographically smallest flag.
            Flag ref(d);
            if (d > 0) {
                ref[0] = face.vertices.front();
                for (int k = 1; k < d; ++k) {
                    int best = -1;
                    for (int c : faces_[k - 1][ref[k - 1]].super)
                        if (contains({d, f}, {k, c}) && (best < 0 || c < best)) best = c;
                    ref[k] = best;
                }
            }
            face.ref_flag = ref;
            face.parity.clear();
            face.parity[ref] = 1;
            std::deque<Flag> queue{ref};
            while (!queue.empty()) {
                Flag cur = std::move(queue.front());
                queue.pop_front();
                const signed char p = face.parity[cur];
                for (int i = 0; i < d; ++i) {
                    Flag nb = adjacent_flag({d, f}, cur, i);
                    auto [it, fresh] = face.parity.emplace(nb, static_cast<signed char>(-p));
                    if (fresh)
                        queue.push_back(std::move(nb));
                    else if (it->second != -p)
                        throw Error(name_ + ": flag graph of " + describe({d, f}) +
                                    " is not bipartite");
                }
            }
        }
    }
    for (int d = 1; d <= dim_; ++d) {
        for (int f = 0; f < count(d); ++f) {
            Face& face = faces_[d][f];
            face.sub_sign.clear();
            for (int y : face.sub) {
                Flag fl = faces_[d - 1][y].ref_flag;
                fl.push_back(y);
                face.sub_sign.push_back(face.parity.at(fl));
            }
        }
    }
}

Polytope Polytope::parse(std::istream& in, std::string_view source) {
    std::string line;
    std::string name(source);
    int dim = -1;
    std::vector<int> fvec;
    std::vector<std::vector<std::vector<int>>> covers;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (head == "lattice") {
            if (!(ls >> name)) throw FormatError("lattice name missing", lineno);
        } else if (head == "dim") {
            if (!(ls >> dim) || dim < 1) throw FormatError("bad dimension", lineno);
        } else if (head == "fvector") {
            int x;
            while (ls >> x) fvec.push_back(x);
            if (dim < 0 || static_cast<int>(fvec.size()) != dim)
                throw FormatError("fvector must follow dim and list f_0..f_{dim-1}", lineno);
            covers.assign(dim + 1, {});
            for (int d = 1; d < dim; ++d) covers[d].resize(fvec[d]);
            covers[dim].resize(1);
        } else {
            if (covers.empty()) throw FormatError("covering pair before header", lineno);
            int d = 0, f = 0, s = 0;
            std::istringstream ps(line);
            std::string extra;
            if (!(ps >> d >> f >> s) || (ps >> extra))
                throw FormatError("expected 'd faceId subFaceId'", lineno);
            if (d < 1 || d > dim || f < 0 || f >= static_cast<int>(covers[d].size()))
                throw FormatError("face out of range", lineno);
            if (s < 0 || s >= fvec[d - 1]) throw FormatError("subface out of range", lineno);
            covers[d][f].push_back(s);
        }
    }
    if (covers.empty()) throw FormatError(std::string(source) + ": missing lattice header");
    for (int d = 1; d <= dim; ++d)
        for (std::size_t f = 0; f < covers[d].size(); ++f)
            if (covers[d][f].empty())
                throw FormatError(std::string(source) + ": face " + std::to_string(f) +
                                  " of dimension " + std::to_string(d) + " has no subfaces");
    Polytope p = from_covering(name, dim, std::move(covers));
    if (p.count(0) != fvec[0])
        throw FormatError(std::string(source) + ": vertex count disagrees with fvector");
    return p;
}

namespace {

const std::map<std::string, std::vector<int>, std::less<>>& catalog_fvectors() {
    static const std::map<std::string, std::vector<int>, std::less<>> table{
        {"pentagon", {5, 5}},
        {"hexagon", {6, 6}},
        {"dodecahedron", {20, 30, 12}},
        {"lobell6", {24, 36, 14}},
        {"120cell", {600, 1200, 720, 120}},
    };
    return table;
}

std::filesystem::path catalog_dir() {
    std::vector<std::filesystem::path> candidates;
    if (const char* env = std::getenv("CORNERS_DATA"); env && *env) candidates.emplace_back(env);
    if (*CORNERS_BUILD_DATA_DIR) candidates.emplace_back(CORNERS_BUILD_DATA_DIR);
    if (*CORNERS_INSTALL_DATA_DIR) candidates.emplace_back(CORNERS_INSTALL_DATA_DIR);
    for (const auto& c : candidates) {
        if (std::filesystem::exists(c / "pentagon.lattice")) return c;
        if (std::filesystem::exists(c / "catalog" / "pentagon.lattice")) return c / "catalog";
    }
    throw Error("catalog data directory not found; set CORNERS_DATA");
}

}  // namespace

std::vector<std::string> catalog_names() {
    std::vector<std::string> out;
    for (const auto& [k, v] : catalog_fvectors()) out.push_back(k);
    return out;
}

PolytopePtr load_lattice_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    return std::make_shared<const Polytope>(Polytope::parse(in, path));
}

PolytopePtr catalog_load(std::string_view name) {
    static std::mutex mu;
    static std::map<std::string, PolytopePtr, std::less<>> cache;
    auto known = catalog_fvectors().find(name);
    if (known == catalog_fvectors().end())
        throw Error("unknown catalog polytope '" + std::string(name) + "'");
    std::lock_guard lock(mu);
    if (auto it = cache.find(name); it != cache.end()) return it->second;
    auto path = catalog_dir() / (std::string(name) + ".lattice");
    auto p = load_lattice_file(path.string());
    if (p->fvector() != known->second)
        throw Error("catalog entry " + std::string(name) + " has unexpected f-vector");
    cache.emplace(std::string(name), p);
    return p;
}

// ---------------------------------------------------------------- FaceIso

int FaceIso::map_vertex(int v) const {
    auto it = std::lower_bound(vertex_map.begin(), vertex_map.end(), std::pair{v, -1});
    if (it == vertex_map.end() || it->first != v)
        throw Error("vertex " + std::to_string(v) + " outside the source face");
    return it->second;
}

std::optional<FaceRef> FaceIso::map_face(FaceRef f) const {
    std::vector<int> img;
    for (int v : source->vertices(f.dim, f.id)) {
        auto it = std::lower_bound(vertex_map.begin(), vertex_map.end(), std::pair{v, -1});
        if (it == vertex_map.end() || it->first != v) return std::nullopt;
        img.push_back(it->second);
    }
    std::sort(img.begin(), img.end());
    auto id = target->face_with_vertices(f.dim, img);
    if (!id) return std::nullopt;
    return FaceRef{f.dim, *id};
}

FaceIso FaceIso::inverse() const {
    FaceIso inv{target, target_face, source, source_face, {}};
    for (auto [a, b] : vertex_map) inv.vertex_map.emplace_back(b, a);
    std::sort(inv.vertex_map.begin(), inv.vertex_map.end());
    return inv;
}

FaceIso FaceIso::restrict_to(FaceRef f) const {
    auto img = map_face(f);
    if (!img) throw Error("face is not mapped by the isomorphism");
    FaceIso r{source, f, target, *img, {}};
    for (int v : source->vertices(f.dim, f.id)) r.vertex_map.emplace_back(v, map_vertex(v));
    return r;
}

Flag FaceIso::map_flag(const Flag& flag) const {
    Flag out(flag.size());
    for (std::size_t j = 0; j < flag.size(); ++j) {
        auto img = map_face({static_cast<int>(j), flag[j]});
        if (!img) throw Error("flag entry not mapped by the isomorphism");
        out[j] = img->id;
    }
    return out;
}

bool FaceIso::is_valid() const {
    if (!source || !target) return false;
    if (source_face.dim != target_face.dim) return false;
    auto sv = source->vertices(source_face.dim, source_face.id);
    auto tv = target->vertices(target_face.dim, target_face.id);
    if (sv.size() != vertex_map.size() || tv.size() != vertex_map.size()) return false;
    std::vector<int> imgs;
    for (std::size_t i = 0; i < sv.size(); ++i) {
        if (vertex_map[i].first != sv[i]) return false;
        imgs.push_back(vertex_map[i].second);
    }
    std::sort(imgs.begin(), imgs.end());
    if (!std::equal(imgs.begin(), imgs.end(), tv.begin(), tv.end())) return false;
    for (int d = 1; d <= source_face.dim; ++d) {
        auto src = source->faces_of(source_face.dim, source_face.id, d);
        auto dst = target->faces_of(target_face.dim, target_face.id, d);
        if (src.size() != dst.size()) return false;
        for (int f : src)
            if (!map_face({d, f})) return false;
    }
    return true;
}

void FaceIso::validate() const {
    if (!is_valid())
        throw Error("vertex bijection from " + (source ? source->name() : "?") + " " +
                    describe(source_face) + " to " + (target ? target->name() : "?") + " " +
                    describe(target_face) + " is not a face-lattice isomorphism");
}

FaceIso compose(const FaceIso& first, const FaceIso& second) {
    if (first.target != second.source || first.target_face != second.source_face)
        throw Error("cannot compose isomorphisms with mismatched faces");
    FaceIso out{first.source, first.source_face, second.target, second.target_face, {}};
    for (auto [a, b] : first.vertex_map) out.vertex_map.emplace_back(a, second.map_vertex(b));
    return out;
}

FaceIso identity_iso(const PolytopePtr& p, FaceRef face) {
    FaceIso out{p, face, p, face, {}};
    for (int v : p->vertices(face.dim, face.id)) out.vertex_map.emplace_back(v, v);
    return out;
}

namespace {

// Extends a flag correspondence Phi -> Psi to the unique flag-graph isomorphism,
// if one exists, and reads off the vertex bijection.
std::optional<FaceIso> propagate(const PolytopePtr& p, FaceRef x, const PolytopePtr& q, FaceRef y,
                                 const Flag& phi, const Flag& psi) {
    if (x.dim != y.dim) return std::nullopt;
    if (x.dim == 0) return FaceIso{p, x, q, y, {{x.id, y.id}}};
    std::map<Flag, Flag> image;
    image.emplace(phi, psi);
    std::deque<const std::pair<const Flag, Flag>*> queue{&*image.begin()};
    while (!queue.empty()) {
        const auto* cur = queue.front();
        queue.pop_front();
        for (int i = 0; i < x.dim; ++i) {
            Flag a = p->adjacent_flag(x, cur->first, i);
            Flag b = q->adjacent_flag(y, cur->second, i);
            auto [it, fresh] = image.emplace(std::move(a), std::move(b));
            if (fresh)
                queue.push_back(&*it);
            else if (it->second != q->adjacent_flag(y, cur->second, i))
                return std::nullopt;
        }
    }
    std::vector<std::map<int, int>> face_map(x.dim);
    for (const auto& [a, b] : image) {
        for (int j = 0; j < x.dim; ++j) {
            auto [it, fresh] = face_map[j].emplace(a[j], b[j]);
            if (!fresh && it->second != b[j]) return std::nullopt;
        }
    }
    FaceIso iso{p, x, q, y, {}};
    for (auto [a, b] : face_map[0]) iso.vertex_map.emplace_back(a, b);
    if (!iso.is_valid()) return std::nullopt;
    return iso;
}

}  // namespace

std::vector<FaceIso> all_isomorphisms(const PolytopePtr& p, FaceRef x, const PolytopePtr& q,
                                      FaceRef y) {
    std::vector<FaceIso> out;
    if (x.dim != y.dim || p->fvector_of(x) != q->fvector_of(y)) return out;
    const Flag ref = p->reference_flag(x);
    for (const auto& psi : q->flags(y))
        if (auto iso = propagate(p, x, q, y, ref, psi)) out.push_back(std::move(*iso));
    auto key = [](const FaceIso& iso) {
        std::vector<int> k;
        for (auto [a, b] : iso.vertex_map) k.push_back(b);
        return k;
    };
    std::sort(out.begin(), out.end(),
              [&](const FaceIso& a, const FaceIso& b) { return key(a) < key(b); });
    return out;
}

FaceIso extend_facet_iso(const FaceIso& iso, FaceRef a, FaceRef b) {
    iso.validate();
    const FaceRef f = iso.source_face;
    const FaceRef g = iso.target_face;
    if (a.dim != f.dim + 1 || !iso.source->contains(a, f))
        throw Error("source of the gluing is not a facet of the face to extend over");
    if (b.dim != g.dim + 1 || !iso.target->contains(b, g))
        throw Error("target of the gluing is not a facet of the face to extend over");
    Flag phi = iso.source->reference_flag(f);
    Flag psi = iso.map_flag(phi);
    phi.push_back(f.id);
    psi.push_back(g.id);
    auto ext = propagate(iso.source, a, iso.target, b, phi, psi);
    if (!ext)
        throw Error("gluing of " + describe(f) + " onto " + describe(g) +
                    " does not extend to " + describe(a) + " -> " + describe(b));
    for (auto [v, w] : iso.vertex_map)
        if (ext->map_vertex(v) != w) throw Error("extension does not restrict to the gluing");
    return *ext;
}

int orientation_sign(const FaceIso& iso) {
    if (iso.source_face.dim != iso.target_face.dim)
        throw Error("orientation sign needs faces of equal dimension");
    Flag img = iso.map_flag(iso.source->reference_flag(iso.source_face));
    return iso.target->flag_parity(iso.target_face, img);
}

}  // namespace corners
