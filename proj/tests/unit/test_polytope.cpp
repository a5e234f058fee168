#include <doctest.h>

#include "corners/error.hpp"
#include "corners/polytope.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace corners;

namespace {

// Vertex-graph automorphisms by plain backtracking; independent of flag propagation.
std::vector<std::vector<int>> graph_automorphisms(const Polytope& p) {
    const int nv = p.count(0);
    std::vector<std::set<int>> nb(nv);
    for (int e = 0; e < p.count(1); ++e) {
        auto ends = p.sub(1, e);
        nb[ends[0]].insert(ends[1]);
        nb[ends[1]].insert(ends[0]);
    }
    std::vector<std::vector<int>> out;
    std::vector<int> img(nv, -1);
    std::vector<bool> used(nv, false);
    std::function<void(int)> rec = [&](int v) {
        if (v == nv) {
            out.push_back(img);
            return;
        }
        for (int w = 0; w < nv; ++w) {
            if (used[w]) continue;
            bool ok = true;
            for (int u = 0; u < v && ok; ++u)
                ok = (nb[v].count(u) > 0) == (nb[w].count(img[u]) > 0);
            if (!ok) continue;
            img[v] = w;
            used[w] = true;
            rec(v + 1);
            used[w] = false;
        }
        img[v] = -1;
    };
    rec(0);
    return out;
}

// Cyclic vertex order of a polygon face.
std::vector<int> boundary_cycle(const Polytope& p, int face) {
    auto edges = p.sub(2, face);
    std::vector<int> cyc{p.sub(1, edges[0])[0], p.sub(1, edges[0])[1]};
    std::set<int> used{edges[0]};
    while (cyc.size() < edges.size()) {
        for (int e : edges) {
            auto ends = p.sub(1, e);
            if (used.count(e)) continue;
            if (ends[0] == cyc.back() || ends[1] == cyc.back()) {
                cyc.push_back(ends[0] == cyc.back() ? ends[1] : ends[0]);
                used.insert(e);
                break;
            }
        }
    }
    return cyc;
}

// +1 if the image cycle runs the same way round as the target's cycle, -1 if reversed.
int cycle_sign(const FaceIso& iso) {
    auto src = boundary_cycle(*iso.source, iso.source_face.id);
    auto dst = boundary_cycle(*iso.target, iso.target_face.id);
    std::vector<int> img;
    for (int v : src) img.push_back(iso.map_vertex(v));
    const std::size_t n = dst.size();
    const std::size_t at = std::find(dst.begin(), dst.end(), img[0]) - dst.begin();
    return dst[(at + 1) % n] == img[1] ? 1 : -1;
}

}  // namespace

TEST_CASE("catalog f-vectors") {
    CHECK(catalog_load("pentagon")->fvector() == std::vector<int>{5, 5});
    CHECK(catalog_load("hexagon")->fvector() == std::vector<int>{6, 6});
    CHECK(catalog_load("dodecahedron")->fvector() == std::vector<int>{20, 30, 12});
    CHECK(catalog_load("lobell6")->fvector() == std::vector<int>{24, 36, 14});
    auto h = catalog_load("120cell");
    CHECK(h->fvector() == std::vector<int>{600, 1200, 720, 120});
    for (int f = 0; f < 120; ++f) CHECK(h->fvector_of({3, f}) == std::vector<int>{20, 30, 12});
    CHECK_THROWS_AS(catalog_load("icosahedron"), Error);
}

TEST_CASE("lobell6 has two hexagons and twelve pentagons") {
    auto r6 = catalog_load("lobell6");
    std::map<int, int> sizes;
    for (int f = 0; f < r6->count(2); ++f) ++sizes[static_cast<int>(r6->sub(2, f).size())];
    CHECK(sizes == std::map<int, int>{{5, 12}, {6, 2}});
    CHECK(r6->sub(2, 0).size() == 6);
}

TEST_CASE("dodecahedron facets are pentagons and the Euler relation holds") {
    auto d = catalog_load("dodecahedron");
    for (int f = 0; f < 12; ++f) CHECK(d->fvector_of({2, f}) == std::vector<int>{5, 5});
    for (int v = 0; v < 20; ++v) CHECK(d->super(0, v).size() == 3);
    CHECK(20 - 30 + 12 == 2);
}

TEST_CASE("incidence numbers square to zero on every catalog polytope") {
    for (const auto& name : catalog_names()) {
        auto p = catalog_load(name);
        for (int d = 2; d <= p->dim(); ++d) {
            for (int x = 0; x < p->count(d); ++x) {
                std::map<int, int> acc;
                for (int y : p->sub(d, x))
                    for (int z : p->sub(d - 1, y)) acc[z] += p->incidence(d, x, y) * p->incidence(d - 1, y, z);
                for (auto [z, v] : acc) CHECK(v == 0);
            }
        }
    }
}

TEST_CASE("dodecahedron automorphisms match a graph-automorphism oracle") {
    auto d = catalog_load("dodecahedron");
    auto isos = all_isomorphisms(d, {3, 0}, d, {3, 0});
    auto oracle = graph_automorphisms(*d);
    REQUIRE(oracle.size() == 120);
    REQUIRE(isos.size() == 120);
    std::set<std::vector<int>> a, b(oracle.begin(), oracle.end());
    int positive = 0;
    for (const auto& iso : isos) {
        std::vector<int> img;
        for (auto [v, w] : iso.vertex_map) img.push_back(w);
        a.insert(img);
        positive += orientation_sign(iso) > 0;
    }
    CHECK(a == b);
    CHECK(positive == 60);
}

TEST_CASE("extend_facet_iso: exactly one extension per pentagon isomorphism") {
    auto d = catalog_load("dodecahedron");
    auto autos = graph_automorphisms(*d);
    const FaceRef top{3, 0};
    int cases = 0;
    for (int f = 0; f < 12; ++f) {
        for (int g = 0; g < 12; ++g) {
            for (const auto& iso : all_isomorphisms(d, {2, f}, d, {2, g})) {
                FaceIso ext = extend_facet_iso(iso, top, top);
                int survivors = 0;
                for (const auto& a : autos) {
                    bool restricts = true;
                    for (auto [v, w] : iso.vertex_map) restricts = restricts && a[v] == w;
                    if (!restricts) continue;
                    ++survivors;
                    for (auto [v, w] : ext.vertex_map) CHECK(a[v] == w);
                }
                CHECK(survivors == 1);
                ++cases;
            }
        }
    }
    CHECK(cases == 12 * 12 * 10);
}

TEST_CASE("extend_facet_iso identity and invalid input") {
    auto d = catalog_load("dodecahedron");
    FaceIso id = identity_iso(d, {2, 3});
    FaceIso ext = extend_facet_iso(id, {3, 0}, {3, 0});
    for (auto [v, w] : ext.vertex_map) CHECK(v == w);

    // Transposing two neighbouring vertices of the boundary cycle breaks edge incidence.
    auto cyc = boundary_cycle(*d, 3);
    FaceIso bad = id;
    for (auto& [v, w] : bad.vertex_map) {
        if (v == cyc[1]) w = cyc[2];
        else if (v == cyc[2]) w = cyc[1];
    }
    CHECK_FALSE(bad.is_valid());
    CHECK_THROWS_AS(extend_facet_iso(bad, {3, 0}, {3, 0}), Error);
}

TEST_CASE("orientation signs") {
    auto pent = catalog_load("pentagon");
    CHECK(orientation_sign(identity_iso(pent, {2, 0})) == 1);
    FaceIso swap{pent, {1, 0}, pent, {1, 0}, {{0, 1}, {1, 0}}};
    CHECK(orientation_sign(swap) == -1);
    int reflections = 0;
    for (const auto& iso : all_isomorphisms(pent, {2, 0}, pent, {2, 0})) {
        CHECK(orientation_sign(iso) == cycle_sign(iso));
        reflections += cycle_sign(iso) < 0;
    }
    CHECK(reflections == 5);
    CHECK_THROWS_AS(orientation_sign(FaceIso{pent, {1, 0}, pent, {2, 0}, {}}), Error);
}

TEST_CASE("orientation sign is multiplicative") {
    auto d = catalog_load("dodecahedron");
    std::mt19937 rng(7);
    for (int f = 0; f < 12; ++f) {
        auto fg = all_isomorphisms(d, {2, f}, d, {2, (f + 5) % 12});
        auto gh = all_isomorphisms(d, {2, (f + 5) % 12}, d, {2, (f * 7) % 12});
        for (const auto& a : fg) {
            const auto& b = gh[rng() % gh.size()];
            CHECK(orientation_sign(compose(a, b)) == orientation_sign(a) * orientation_sign(b));
            CHECK(orientation_sign(a) * orientation_sign(fg[0]) == cycle_sign(a) * cycle_sign(fg[0]));
        }
    }
}

TEST_CASE("lattice parser rejects malformed input") {
    std::istringstream missing("dim 2\n1 0 0\n");
    CHECK_THROWS_AS(Polytope::parse(missing), FormatError);
    std::istringstream ok("lattice square\ndim 2\nfvector 4 4\n1 0 0\n1 0 1\n1 1 1\n1 1 2\n1 2 2\n1 2 3\n"
                          "1 3 3\n1 3 0\n2 0 0\n2 0 1\n2 0 2\n2 0 3\n");
    auto sq = Polytope::parse(ok);
    CHECK(sq.name() == "square");
    CHECK(sq.fvector() == std::vector<int>{4, 4});
    std::istringstream diamond("lattice bad\ndim 2\nfvector 4 3\n1 0 0\n1 0 1\n1 1 1\n1 1 2\n1 2 2\n1 2 3\n"
                               "2 0 0\n2 0 1\n2 0 2\n");
    CHECK_THROWS_AS(Polytope::parse(diamond), Error);
    std::istringstream range("lattice bad\ndim 2\nfvector 3 3\n1 0 7\n");
    CHECK_THROWS_AS(Polytope::parse(range), FormatError);
}
