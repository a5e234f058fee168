#pragma once

#include "corners/corner_complex.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace corners {

/// Simple undirected graph on facets 0..n-1.
struct FacetGraph {
    std::vector<std::vector<int>> adj;  // sorted neighbour lists
    std::vector<int> component;  // component id per vertex, numbered by least vertex
    int components = 0;

    int size() const { return static_cast<int>(adj.size()); }
    static FacetGraph from_edges(int n, const std::vector<std::pair<int, int>>& edges);
};

/// Facet-adjacency graph of w. Throws Error naming the first non-embedded facet.
FacetGraph adjacency_graph(const CornerComplex& w);

/// Proper, surjective map facets -> {1..k}.
struct Colouring {
    int k = 0;
    std::vector<int> colour;
};

bool is_proper(const FacetGraph& g, const Colouring& c);

enum class SearchStatus { found, none, unknown };

struct ColouringResult {
    SearchStatus status = SearchStatus::unknown;
    std::optional<Colouring> colouring;
    /// Why `none` holds (clique bound or closed search tree), or what ran out.
    std::string certificate;
    long long nodes = 0;
};

/// Exact k-colouring search: DSATUR greedy bound, clique lower bound, then
/// DSATUR branch and bound with symmetry breaking. A zero budget means unlimited.
ColouringResult find_colouring(const FacetGraph& g, int k,
                               std::chrono::milliseconds budget = std::chrono::milliseconds{0});

/// Greedy clique used as the lower bound; returned vertex set is a clique.
std::vector<int> greedy_clique(const FacetGraph& g, const std::vector<int>& vertices);

/// Copies the colours of the +1 side across the involution and renumbers the
/// colours in use to 1..h. Throws Error on precondition violations.
Colouring symmetrize(const FacetGraph& g, const Colouring& c, const std::vector<int>& involution,
                     const std::vector<int>& side);

/// Facets -> nonzero vectors of Z_2^m, bit i standing for e_{i+1}.
struct GeneralisedColouring {
    int m = 0;
    std::vector<std::uint64_t> image;
};

GeneralisedColouring lift(const Colouring& c);

struct GeneralisedReport {
    bool ok = true;
    std::vector<std::string> violations;
};

/// Generation of Z_2^m and independence at every boundary stratum.
GeneralisedReport validate_generalised(const GeneralisedColouring& rho, const CornerComplex& w);

/// k even, k > n: e_{c} for colours c < k, and e_1 + ... + e_{k-1} for colour k.
GeneralisedColouring reduce_colouring(const Colouring& c, int n);

bool is_orientable(const GeneralisedColouring& rho);

/// GF(2) rank of a set of bit vectors.
int gf2_rank(std::vector<std::uint64_t> vectors);

}  // namespace corners
