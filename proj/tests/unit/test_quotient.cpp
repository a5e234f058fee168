#include <doctest.h>

#include "corners/error.hpp"
#include "corners/quotient.hpp"
#include "fixtures.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <sstream>

using namespace corners;

namespace {

// chi = 2^m * sum_c (-1)^dim(c) 2^(-rank stab c), evaluated exactly over Q.
boost::multiprecision::cpp_rational rational_chi(const CornerComplex& w, const GeneralisedColouring& rho) {
    boost::multiprecision::cpp_rational sum = 0;
    for (int d = 0; d <= w.dim(); ++d)
        for (const auto& st : w.strata(d)) {
            std::vector<std::uint64_t> vs;
            for (int f : st.facets) vs.push_back(rho.image[f]);
            boost::multiprecision::cpp_rational term(1, boost::multiprecision::cpp_int(1) << gf2_rank(vs));
            sum += (d % 2 ? -term : term);
        }
    return sum * (boost::multiprecision::cpp_int(1) << rho.m);
}

std::vector<long long> ranks(const ChainComplex& cc) {
    std::vector<long long> r;
    for (int d = 1; d <= cc.dim(); ++d) r.push_back(rank_rational(cc.boundary[d]));
    return r;
}

}  // namespace

TEST_CASE("pentagon pair with a 3-colouring: genus 3 surface") {
    auto w = load_fixture("pentagon-pair.tess").build();
    const auto rho = lift(Colouring{3, {3, 1, 2}});
    auto q = build_quotient(w, rho);
    CHECK(q.cells(2) == 16);
    CHECK(q.euler_characteristic() == -4);
    CHECK(weighted_euler(w, rho) == -4);
    CHECK(rational_chi(w, rho) == -4);
    CHECK(q.components == 1);
    CHECK(q.orientable);
    CHECK(q.chain.closed_orientable_manifold);
    for (Field f : {Field::gf2, Field::rational}) CHECK(betti(q.chain, f).b == std::vector<long long>{1, 6, 1});
    CHECK(betti(q.chain, Field::rational, true).b == std::vector<long long>{1, 6, 1});
    CHECK_FALSE(q.chi_120_identity.has_value());
}

TEST_CASE("self-glued hexagon with a 3-colouring: 8 hexagons") {
    auto w = load_fixture("hexagon.tess").build();
    auto g = adjacency_graph(w);
    auto r = find_colouring(g, 3);
    REQUIRE(r.status == SearchStatus::found);
    const auto rho = lift(*r.colouring);
    auto q = build_quotient(w, rho);
    CHECK(q.cells(2) == 8);
    CHECK(q.euler_characteristic() == -4);
    CHECK(weighted_euler(w, rho) == -4);
    auto b2 = betti(q.chain, Field::gf2).b;
    auto bq = betti(q.chain, Field::rational).b;
    CHECK(b2[0] - b2[1] + b2[2] == -4);
    CHECK(bq[0] - bq[1] + bq[2] == -4);
    CHECK(b2[0] == 1);
    CHECK(b2[2] == 1);
    // Orientability from sign propagation matches the rational top Betti number.
    CHECK(q.orientable == (bq[2] == 1));
}

TEST_CASE("non-orientable quotient: an even colour vector") {
    // Edge 2 gets the even vector e1+e2; its neighbours e2 and e1 keep every corner independent.
    auto p = catalog_load("pentagon");
    auto w = CornerComplex::build({p}, {});
    GeneralisedColouring rho{2, {1, 2, 3, 1, 2}};
    REQUIRE(validate_generalised(rho, w).ok);
    CHECK_FALSE(is_orientable(rho));
    auto q = build_quotient(w, rho);
    CHECK(q.cells(2) == 4);
    CHECK_FALSE(q.orientable);
    CHECK(betti(q.chain, Field::rational).b[2] == 0);
    CHECK(betti(q.chain, Field::gf2).b[2] == 1);
    CHECK(q.euler_characteristic() == weighted_euler(w, rho));
    CHECK_THROWS_AS(betti(q.chain, Field::rational, true), Error);
}

TEST_CASE("plain colouring and its lift give the same complex as the explicit tessellation") {
    for (const char* name : {"pentagon-pair.tess", "hexagon.tess"}) {
        auto w = load_fixture(name).build();
        auto r = find_colouring(adjacency_graph(w), 3);
        REQUIRE(r.status == SearchStatus::found);
        const auto rho = lift(*r.colouring);
        auto q = build_quotient(w, rho);
        // Route two: glue 2^m explicit copies and take the closed complex's strata.
        auto t = quotient_tessellation(w, rho);
        CHECK(t.closed());
        CHECK(t.chambers().size() == (w.chambers().size() << rho.m));
        ChainComplex tc;
        tc.cells.resize(t.dim() + 1);
        tc.boundary.resize(t.dim() + 1);
        for (int d = 0; d <= t.dim(); ++d) tc.cells[d] = static_cast<long long>(t.strata(d).size());
        for (int d = 1; d <= t.dim(); ++d) {
            std::vector<std::tuple<int, int, std::int64_t>> e;
            for (std::size_t c = 0; c < t.strata(d).size(); ++c)
                for (auto [y, v] : t.strata(d)[c].boundary) e.emplace_back(y, static_cast<int>(c), v);
            tc.boundary[d] = SparseIntMatrix::from_triplets(static_cast<int>(tc.cells[d - 1]),
                                                            static_cast<int>(tc.cells[d]), e);
        }
        CHECK(tc.cells == q.chain.cells);
        CHECK(ranks(tc) == ranks(q.chain));
        for (Field f : {Field::gf2, Field::rational}) CHECK(betti(tc, f).b == betti(q.chain, f).b);
    }
}

TEST_CASE("separation: mirrored pentagon pair") {
    auto w = load_fixture("pentagon-pair.tess").build();
    auto mr = mirror(w, 0);
    auto g = adjacency_graph(mr.complex);
    auto r = find_colouring(g, 3);
    REQUIRE(r.status == SearchStatus::found);
    auto lambda = symmetrize(g, *r.colouring, mr.involution, mr.side);
    REQUIRE(lambda.k == 2);
    auto rep = separation_check(mr, lambda);
    CHECK(rep.components_after_removal == 2);
    CHECK(rep.expected_copies == 4);
    CHECK(rep.separating_copies == 4);
    CHECK(rep.copies_match);
    CHECK(rep.involution_is_isomorphism);
    CHECK(rep.swaps_sides);
    CHECK(rep.ok());

    Colouring asym = lambda;
    for (int f = 0; f < g.size(); ++f)
        if (mr.side[f] < 0) asym.colour[f] = 3 - asym.colour[f];
    REQUIRE(is_proper(g, asym));
    CHECK_THROWS_AS(separation_check(mr, asym), Error);
}

TEST_CASE("invalid colourings are rejected") {
    auto w = load_fixture("pentagon-pair.tess").build();
    CHECK_THROWS_AS(build_quotient(w, GeneralisedColouring{2, {1, 2, 2}}), Error);
    CHECK_THROWS_AS(build_quotient(w, GeneralisedColouring{3, {1, 2}}), Error);
}

TEST_CASE("thickened self-glued hexagon surface has a non-embedded facet") {
    auto w = load_fixture("hexagon.tess").build();
    auto r = find_colouring(adjacency_graph(w), 3);
    REQUIRE(r.status == SearchStatus::found);
    auto surface = quotient_tessellation(w, lift(*r.colouring));
    REQUIRE(surface.closed());
    auto th = thicken(surface, catalog_load("lobell6"));
    const auto& m = th.complex.facets()[th.m_facet];
    CHECK(m.isolated);
    CHECK(m.embedded);
    CHECK(m.slots.size() == surface.chambers().size());
    CHECK_FALSE(th.complex.all_embedded());
    CHECK_THROWS_AS(adjacency_graph(th.complex), Error);
}

TEST_CASE("quotient dump parses back as a chain complex") {
    auto w = load_fixture("pentagon-pair.tess").build();
    auto q = build_quotient(w, lift(Colouring{3, {3, 1, 2}}));
    std::stringstream s;
    write_quotient_dump(s, q);
    auto back = read_chain_complex(s);
    CHECK(back.cells == q.chain.cells);
    CHECK(back.closed_orientable_manifold);
    for (int d = 1; d <= 2; ++d) CHECK(back.boundary[d].to_dense() == q.chain.boundary[d].to_dense());
}

TEST_CASE("cell indexing round trip") {
    auto w = load_fixture("pentagon-pair.tess").build();
    auto q = build_quotient(w, lift(Colouring{3, {3, 1, 2}}));
    for (int d = 0; d <= 2; ++d)
        for (long long i = 0; i < q.cells(d); ++i) {
            auto [c, u] = q.cell_at(d, i);
            CHECK(q.cell_index(d, c, u) == i);
            CHECK(q.stab[d][c].reduce(u) == u);
        }
}
