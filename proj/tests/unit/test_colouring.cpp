#include <doctest.h>

#include "corners/colouring.hpp"
#include "corners/error.hpp"
#include "fixtures.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <set>

using namespace corners;

namespace {

FacetGraph triangle() { return FacetGraph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}); }

FacetGraph cycle(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return FacetGraph::from_edges(n, e);
}

// Brute force chromatic check for tiny graphs.
bool colourable_brute(const FacetGraph& g, int k) {
    const int n = g.size();
    if (k > n) return false;
    std::vector<int> c(n, 0);
    while (true) {
        bool ok = true;
        for (int v = 0; v < n && ok; ++v)
            for (int u : g.adj[v])
                if (c[u] == c[v]) ok = false;
        std::set<int> used(c.begin(), c.end());
        if (ok && static_cast<int>(used.size()) == k) return true;
        int i = 0;
        while (i < n && ++c[i] == k) c[i++] = 0;
        if (i == n) return false;
    }
}

FacetGraph random_graph(std::mt19937& rng, int n, double p) {
    std::bernoulli_distribution coin(p);
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (coin(rng)) e.emplace_back(i, j);
    return FacetGraph::from_edges(n, e);
}

}  // namespace

TEST_CASE("triangle: 3-colourable, not 2-colourable") {
    auto g = triangle();
    auto r3 = find_colouring(g, 3);
    REQUIRE(r3.status == SearchStatus::found);
    CHECK(is_proper(g, *r3.colouring));
    auto r2 = find_colouring(g, 2);
    CHECK(r2.status == SearchStatus::none);
    CHECK_FALSE(r2.certificate.empty());
}

TEST_CASE("odd cycle needs the full search to refute two colours") {
    auto g = cycle(7);
    auto r = find_colouring(g, 2);
    CHECK(r.status == SearchStatus::none);
    CHECK(find_colouring(g, 3).status == SearchStatus::found);
}

TEST_CASE("surjectivity: more colours than facets is impossible") {
    auto g = FacetGraph::from_edges(2, {});
    CHECK(find_colouring(g, 3).status == SearchStatus::none);
    auto r = find_colouring(g, 2);
    REQUIRE(r.status == SearchStatus::found);
    CHECK(r.colouring->colour[0] != r.colouring->colour[1]);
}

TEST_CASE("pentagon pair adjacency graph and its 3-colourings") {
    auto w = load_fixture("pentagon-pair.tess").build();
    auto g = adjacency_graph(w);
    REQUIRE(g.size() == 3);
    CHECK(g.adj[0].empty());
    CHECK(g.adj[1] == std::vector<int>{2});
    CHECK(g.components == 2);
    Colouring lambda{3, {3, 1, 2}};
    CHECK(is_proper(g, lambda));
    auto r = find_colouring(g, 3);
    REQUIRE(r.status == SearchStatus::found);
    CHECK(is_proper(g, *r.colouring));
    CHECK(find_colouring(g, 1).status == SearchStatus::none);
}

TEST_CASE("mirrored pentagon pair: two components") {
    auto w = load_fixture("pentagon-pair.tess").build();
    auto mr = mirror(w, 0);
    auto g = adjacency_graph(mr.complex);
    CHECK(g.size() == 4);
    CHECK(g.components == 2);
    for (int v = 0; v < 4; ++v)
        for (int u : g.adj[v]) CHECK(mr.side[u] == mr.side[v]);
}

TEST_CASE("adjacency graph rejects non-embedded facets") {
    auto p = catalog_load("pentagon");
    // Edge 0 onto edge 2 without the twist: edges 1, 3 and 4 merge into one
    // facet that meets itself at the corner between edges 3 and 4.
    auto w = CornerComplex::build({p}, {{{0, 0}, {0, 2}, {p, {1, 0}, p, {1, 2}, {{0, 2}, {1, 3}}}}});
    CHECK_FALSE(w.all_embedded());
    try {
        adjacency_graph(w);
        FAIL("expected a non-embedded facet error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("not embedded") != std::string::npos);
    }
}

TEST_CASE("exact search agrees with brute force on small random graphs") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        auto g = random_graph(rng, 7, 0.45);
        for (int k = 1; k <= 4; ++k) {
            auto r = find_colouring(g, k);
            const bool expect = colourable_brute(g, k);
            CHECK(r.status == (expect ? SearchStatus::found : SearchStatus::none));
            if (r.colouring) {
                CHECK(is_proper(g, *r.colouring));
                std::set<int> used(r.colouring->colour.begin(), r.colouring->colour.end());
                CHECK(static_cast<int>(used.size()) == k);
            }
        }
    }
}

TEST_CASE("clique bound refutes without search") {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) e.emplace_back(i, j);
    auto g = FacetGraph::from_edges(5, e);
    auto clique = greedy_clique(g, {0, 1, 2, 3, 4});
    CHECK(clique.size() == 5);
    auto r = find_colouring(g, 4);
    CHECK(r.status == SearchStatus::none);
    CHECK(r.nodes == 0);
}

TEST_CASE("vertex stratum forces a clique of size n") {
    auto w = CornerComplex::build({catalog_load("dodecahedron")}, {});
    auto g = adjacency_graph(w);
    CHECK(find_colouring(g, 2).status == SearchStatus::none);
    CHECK(find_colouring(g, 4).status == SearchStatus::found);
}

TEST_CASE("Mycielski graphs: refutation without a clique bound, and budget exhaustion") {
    // Mycielskian of a graph with n vertices: copies u_i, shadows w_i, apex z.
    auto mycielski = [](const FacetGraph& g) {
        const int n = g.size();
        std::vector<std::pair<int, int>> e;
        for (int v = 0; v < n; ++v)
            for (int u : g.adj[v]) {
                if (u > v) e.emplace_back(v, u);
                e.emplace_back(n + v, u);
            }
        for (int v = 0; v < n; ++v) e.emplace_back(n + v, 2 * n);
        return FacetGraph::from_edges(2 * n + 1, e);
    };
    auto grotzsch = mycielski(cycle(5));  // 11 vertices, triangle-free, chromatic number 4
    CHECK(find_colouring(grotzsch, 3).status == SearchStatus::none);
    CHECK(find_colouring(grotzsch, 4).status == SearchStatus::found);
    auto m6 = mycielski(mycielski(grotzsch));  // 47 vertices, chromatic number 6
    auto r = find_colouring(m6, 5, std::chrono::milliseconds{1});
    CHECK(r.status == SearchStatus::unknown);
    CHECK_FALSE(r.certificate.empty());
}

TEST_CASE("symmetrize copies the + side and compacts colours") {
    auto w = load_fixture("pentagon-pair.tess").build();
    auto mr = mirror(w, 0);
    auto g = adjacency_graph(mr.complex);
    std::vector<int> plus, minus;
    for (int f = 0; f < g.size(); ++f) (mr.side[f] > 0 ? plus : minus).push_back(f);
    // Non-symmetric 4-colouring: + side uses {1,2}, - side uses {3,4}.
    Colouring c{4, std::vector<int>(g.size())};
    c.colour[plus[0]] = 1;
    c.colour[plus[1]] = 2;
    c.colour[minus[0]] = 3;
    c.colour[minus[1]] = 4;
    REQUIRE(is_proper(g, c));
    auto s = symmetrize(g, c, mr.involution, mr.side);
    CHECK(s.k == 2);
    CHECK(is_proper(g, s));
    for (int f = 0; f < g.size(); ++f) CHECK(s.colour[f] == s.colour[mr.involution[f]]);
    // Idempotent up to renumbering.
    auto s2 = symmetrize(g, s, mr.involution, mr.side);
    CHECK(s2.colour == s.colour);
}

TEST_CASE("symmetrize property over random proper colourings") {
    auto w = load_fixture("pentagon-pair.tess").build();
    auto mr = mirror(w, 0);
    auto g = adjacency_graph(mr.complex);
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> pick(1, 6);
    for (int trial = 0; trial < 50; ++trial) {
        Colouring c{0, std::vector<int>(g.size(), 0)};
        for (int v = 0; v < g.size(); ++v) {
            int col;
            do col = pick(rng);
            while (std::any_of(g.adj[v].begin(), g.adj[v].end(), [&](int u) { return c.colour[u] == col; }));
            c.colour[v] = col;
        }
        std::set<int> used(c.colour.begin(), c.colour.end());
        std::vector<int> order(used.begin(), used.end());
        for (int& x : c.colour) x = static_cast<int>(std::lower_bound(order.begin(), order.end(), x) - order.begin()) + 1;
        c.k = static_cast<int>(order.size());
        auto s = symmetrize(g, c, mr.involution, mr.side);
        CHECK(is_proper(g, s));
        CHECK(s.k <= c.k);
        for (int f = 0; f < g.size(); ++f) CHECK(s.colour[f] == s.colour[mr.involution[f]]);
    }
}

TEST_CASE("generalised colourings: lift, validation, orientability") {
    auto w = load_fixture("pentagon-pair.tess").build();
    Colouring lambda{3, {3, 1, 2}};
    auto rho = lift(lambda);
    CHECK(rho.m == 3);
    CHECK(rho.image == std::vector<std::uint64_t>{4, 1, 2});
    CHECK(validate_generalised(rho, w).ok);
    CHECK(is_orientable(rho));

    GeneralisedColouring bad{2, {1, 2, 2}};  // F1 and F2 meet at a corner with equal colours
    auto rep = validate_generalised(bad, w);
    CHECK_FALSE(rep.ok);
    CHECK_FALSE(rep.violations.empty());

    GeneralisedColouring not_generating{3, {1, 2, 3}};
    CHECK_FALSE(validate_generalised(not_generating, w).ok);

    CHECK_FALSE(is_orientable(GeneralisedColouring{2, {1, 3}}));
}

TEST_CASE("reduce_colouring: the last colour becomes the all-ones vector") {
    auto w = CornerComplex::build({catalog_load("pentagon")}, {});
    auto g = adjacency_graph(w);
    Colouring lam4{4, {1, 2, 3, 2, 4}};
    REQUIRE(is_proper(g, lam4));
    auto rho = reduce_colouring(lam4, 2);
    CHECK(rho.m == 3);
    CHECK(rho.image == std::vector<std::uint64_t>{1, 2, 4, 2, 7});
    CHECK(is_orientable(rho));
    CHECK(validate_generalised(rho, w).ok);
    CHECK_THROWS_AS(reduce_colouring(Colouring{3, {1, 2, 1, 2, 3}}, 2), Error);
    CHECK_THROWS_AS(reduce_colouring(Colouring{2, {1, 2, 1, 2, 1}}, 2), Error);
}

TEST_CASE("reduce_colouring on random pentagon chains validates") {
    std::mt19937 rng(5);
    auto p = catalog_load("pentagon");
    for (int trial = 0; trial < 20; ++trial) {
        const int n = std::uniform_int_distribution<int>(1, 6)(rng);
        // Chamber i is entered through edge in[i] and left through an edge two or three steps on.
        std::vector<int> in(n);
        for (int& e : in) e = std::uniform_int_distribution<int>(0, 4)(rng);
        std::vector<Gluing> chain;
        for (int i = 0; i + 1 < n; ++i) {
            const int f = (in[i] + std::uniform_int_distribution<int>(2, 3)(rng)) % 5;
            const int e = in[i + 1];
            std::vector<std::pair<int, int>> vmap{{f, (e + 1) % 5}, {(f + 1) % 5, e}};
            std::sort(vmap.begin(), vmap.end());
            chain.push_back({{i, f}, {i + 1, e}, {p, {1, f}, p, {1, e}, vmap}});
        }
        auto w = CornerComplex::build(std::vector<PolytopePtr>(n, p), chain);
        auto g = adjacency_graph(w);
        auto r = find_colouring(g, 4);
        REQUIRE(r.status == SearchStatus::found);
        auto rho = reduce_colouring(*r.colouring, 2);
        CHECK(validate_generalised(rho, w).ok);
        CHECK(is_orientable(rho));
    }
}

TEST_CASE("gf2_rank") {
    CHECK(gf2_rank({}) == 0);
    CHECK(gf2_rank({1, 2, 3}) == 2);
    CHECK(gf2_rank({1, 2, 4, 7}) == 3);
    CHECK(gf2_rank({0, 0}) == 0);
}

TEST_CASE("colouring files round trip") {
    const Colouring c{3, {3, 1, 2}};
    std::stringstream s;
    write_colouring(s, c);
    CHECK(s.str() == "colouring 3\n0 3\n1 1\n2 2\n");
    const auto back = read_colouring(s);
    REQUIRE(back.plain);
    CHECK(back.plain->colour == c.colour);
    CHECK(back.generalised.image == lift(c).image);

    const GeneralisedColouring rho{3, {1, 2, 7, 4}};
    std::stringstream g;
    write_colouring(g, rho);
    CHECK(g.str() == "generalised 3\n0 100\n1 010\n2 111\n3 001\n");
    const auto gb = read_colouring(g);
    CHECK_FALSE(gb.plain);
    CHECK(gb.generalised.image == rho.image);

    for (const char* bad : {"colouring 2\n0 3\n", "colouring 2\n1 1\n", "generalised 2\n0 00\n", "generalised 2\n0 1\n",
                            "palette 2\n", ""}) {
        std::istringstream in(bad);
        CHECK_THROWS_AS(read_colouring(in), FormatError);
    }
}
