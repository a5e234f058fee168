#include "corners/colouring.hpp"

#include "corners/error.hpp"
#include "dsu.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

namespace corners {

FacetGraph FacetGraph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    FacetGraph g;
    g.adj.assign(n, {});
    detail::Dsu dsu(n);
    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || a >= n || b >= n) throw Error("edge endpoint out of range");
        if (a == b) throw Error("self-loop at vertex " + std::to_string(a));
        g.adj[a].push_back(b);
        g.adj[b].push_back(a);
        dsu.unite(a, b);
    }
    for (auto& nb : g.adj) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    g.component.assign(n, -1);
    std::map<int, int> ids;
    for (int v = 0; v < n; ++v) {
        auto [it, fresh] = ids.emplace(dsu.find(v), g.components);
        if (fresh) ++g.components;
        g.component[v] = it->second;
    }
    return g;
}

FacetGraph adjacency_graph(const CornerComplex& w) {
    std::vector<std::pair<int, int>> edges;
    for (const Facet& f : w.facets()) {
        if (!f.embedded)
            throw Error("facet " + std::to_string(f.id) + " is not embedded (adjacent to itself)");
        for (int g : f.adjacent)
            if (f.id < g) edges.emplace_back(f.id, g);
    }
    return FacetGraph::from_edges(static_cast<int>(w.facets().size()), edges);
}

bool is_proper(const FacetGraph& g, const Colouring& c) {
    if (static_cast<int>(c.colour.size()) != g.size()) return false;
    std::set<int> used;
    for (int v = 0; v < g.size(); ++v) {
        if (c.colour[v] < 1 || c.colour[v] > c.k) return false;
        used.insert(c.colour[v]);
        for (int u : g.adj[v])
            if (c.colour[u] == c.colour[v]) return false;
    }
    return static_cast<int>(used.size()) == c.k;
}

std::vector<int> greedy_clique(const FacetGraph& g, const std::vector<int>& vertices) {
    std::vector<int> best;
    for (int start : vertices) {
        std::vector<int> clique{start};
        std::vector<int> cand = g.adj[start];
        while (!cand.empty()) {
            // Take the candidate with most neighbours among the remaining candidates.
            int pick = -1;
            long best_links = -1;
            for (int c : cand) {
                long links = 0;
                for (int d : cand) links += std::binary_search(g.adj[c].begin(), g.adj[c].end(), d);
                if (links > best_links) {
                    best_links = links;
                    pick = c;
                }
            }
            clique.push_back(pick);
            std::vector<int> next;
            for (int c : cand)
                if (c != pick && std::binary_search(g.adj[pick].begin(), g.adj[pick].end(), c)) next.push_back(c);
            cand = std::move(next);
        }
        if (clique.size() > best.size()) best = clique;
    }
    std::sort(best.begin(), best.end());
    return best;
}

namespace {

using Clock = std::chrono::steady_clock;

// DSATUR on the subgraph induced by `verts` (local ids), colours 1.. unbounded or
// bounded by k for the exact search.
class Dsatur {
public:
    Dsatur(const FacetGraph& g, const std::vector<int>& verts) : verts_(verts) {
        std::map<int, int> local;
        for (std::size_t i = 0; i < verts.size(); ++i) local[verts[i]] = static_cast<int>(i);
        adj_.resize(verts.size());
        for (std::size_t i = 0; i < verts.size(); ++i)
            for (int u : g.adj[verts[i]]) adj_[i].push_back(local.at(u));
    }

    std::vector<int> greedy() {
        const int n = size();
        reset(n + 1);
        for (int step = 0; step < n; ++step) {
            int v = select();
            int c = 1;
            while (count_[v * width_ + c] > 0) ++c;
            assign(v, c);
        }
        return colour_;
    }

    // Returns 1 found, 0 exhausted, -1 out of budget.
    int exact(int k, Clock::time_point deadline, bool bounded, long long& nodes) {
        reset(k + 1);
        k_ = k;
        deadline_ = deadline;
        bounded_ = bounded;
        nodes_ = &nodes;
        out_of_time_ = false;
        const bool ok = search(0, 0);
        if (out_of_time_) return -1;
        return ok ? 1 : 0;
    }

    const std::vector<int>& colours() const { return colour_; }
    int size() const { return static_cast<int>(adj_.size()); }

private:
    void reset(int width) {
        width_ = width;
        colour_.assign(size(), 0);
        count_.assign(static_cast<std::size_t>(size()) * width_, 0);
        sat_.assign(size(), 0);
    }

    int select() const {
        int best = -1;
        for (int v = 0; v < size(); ++v) {
            if (colour_[v]) continue;
            if (best < 0 || sat_[v] > sat_[best] ||
                (sat_[v] == sat_[best] && adj_[v].size() > adj_[best].size()))
                best = v;
        }
        return best;
    }

    void assign(int v, int c) {
        colour_[v] = c;
        for (int u : adj_[v])
            if (count_[u * width_ + c]++ == 0) ++sat_[u];
    }

    void unassign(int v) {
        const int c = colour_[v];
        colour_[v] = 0;
        for (int u : adj_[v])
            if (--count_[u * width_ + c] == 0) --sat_[u];
    }

    bool search(int coloured, int used) {
        if (coloured == size()) return true;
        if ((++*nodes_ & 1023) == 0 && bounded_ && Clock::now() > deadline_) out_of_time_ = true;
        if (out_of_time_) return false;
        const int v = select();
        // Colours beyond used+1 are interchangeable with used+1.
        const int top = std::min(k_, used + 1);
        for (int c = 1; c <= top; ++c) {
            if (count_[v * width_ + c] > 0) continue;
            assign(v, c);
            bool dead = false;
            for (int u : adj_[v])
                if (!colour_[u] && sat_[u] >= k_) dead = true;
            if (!dead && search(coloured + 1, std::max(used, c))) return true;
            unassign(v);
            if (out_of_time_) return false;
        }
        return false;
    }

    std::vector<int> verts_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> colour_;
    std::vector<int> count_;
    std::vector<int> sat_;
    int width_ = 0;
    int k_ = 0;
    Clock::time_point deadline_;
    bool bounded_ = false;
    bool out_of_time_ = false;
    long long* nodes_ = nullptr;
};

}  // namespace

ColouringResult find_colouring(const FacetGraph& g, int k, std::chrono::milliseconds budget) {
    ColouringResult res;
    const int n = g.size();
    if (k < 0) throw Error("colour count must be non-negative");
    if (k > n) {
        res.status = SearchStatus::none;
        res.certificate = "fewer facets (" + std::to_string(n) + ") than colours (" + std::to_string(k) + ")";
        return res;
    }
    const bool bounded = budget.count() > 0;
    const auto deadline = Clock::now() + budget;
    std::vector<std::vector<int>> comps(g.components);
    for (int v = 0; v < n; ++v) comps[g.component[v]].push_back(v);

    std::vector<int> colour(n, 0);
    for (const auto& comp : comps) {
        auto clique = greedy_clique(g, comp);
        if (static_cast<int>(clique.size()) > k) {
            res.status = SearchStatus::none;
            res.certificate = "clique of size " + std::to_string(clique.size()) + " on facets";
            for (int v : clique) res.certificate += " " + std::to_string(v);
            return res;
        }
        Dsatur ds(g, comp);
        auto greedy = ds.greedy();
        std::vector<int> local;
        if (*std::max_element(greedy.begin(), greedy.end()) <= k) {
            local = greedy;
        } else {
            const int verdict = ds.exact(k, deadline, bounded, res.nodes);
            if (verdict < 0) {
                res.status = SearchStatus::unknown;
                res.certificate = "budget exhausted after " + std::to_string(res.nodes) + " nodes";
                return res;
            }
            if (verdict == 0) {
                res.status = SearchStatus::none;
                res.certificate = "branch and bound closed after " + std::to_string(res.nodes) +
                                  " nodes on the component of facet " + std::to_string(comp.front());
                return res;
            }
            local = ds.colours();
        }
        for (std::size_t i = 0; i < comp.size(); ++i) colour[comp[i]] = local[i];
    }

    // Make the colouring surjective: move one vertex of a shared class to each unused colour.
    std::vector<std::vector<int>> classes(k + 1);
    for (int v = 0; v < n; ++v) classes[colour[v]].push_back(v);
    for (int c = 1; c <= k; ++c) {
        if (!classes[c].empty()) continue;
        for (int d = 1; d <= k; ++d) {
            if (classes[d].size() >= 2) {
                const int v = classes[d].back();
                classes[d].pop_back();
                classes[c].push_back(v);
                colour[v] = c;
                break;
            }
        }
    }
    Colouring out{k, colour};
    if (!is_proper(g, out)) throw Error("internal: search returned an improper colouring");
    res.status = SearchStatus::found;
    res.colouring = std::move(out);
    return res;
}

Colouring symmetrize(const FacetGraph& g, const Colouring& c, const std::vector<int>& involution,
                     const std::vector<int>& side) {
    const int n = g.size();
    if (static_cast<int>(involution.size()) != n || static_cast<int>(side.size()) != n)
        throw Error("symmetrize: involution does not match the graph");
    if (!is_proper(g, c)) throw Error("symmetrize: input colouring is not proper");
    for (int v = 0; v < n; ++v) {
        const int w = involution[v];
        if (w < 0 || w >= n || w == v || involution[w] != v || side[w] != -side[v])
            throw Error("symmetrize: not a free involution exchanging the two sides");
        for (int u : g.adj[v])
            if (side[u] != side[v]) throw Error("symmetrize: facets on opposite sides are adjacent");
    }
    std::vector<int> col(n);
    for (int v = 0; v < n; ++v) col[v] = side[v] > 0 ? c.colour[v] : c.colour[involution[v]];
    std::set<int> used(col.begin(), col.end());
    std::map<int, int> renumber;
    for (int x : used) renumber.emplace(x, static_cast<int>(renumber.size()) + 1);
    Colouring out{static_cast<int>(used.size()), {}};
    for (int x : col) out.colour.push_back(renumber.at(x));
    if (!is_proper(g, out)) throw Error("internal: symmetrized colouring is not proper");
    return out;
}

GeneralisedColouring lift(const Colouring& c) {
    if (c.k > 64) throw Error("at most 64 colours are supported");
    GeneralisedColouring rho{c.k, {}};
    for (int x : c.colour) rho.image.push_back(std::uint64_t{1} << (x - 1));
    return rho;
}

int gf2_rank(std::vector<std::uint64_t> vectors) {
    int rank = 0;
    for (int bit = 63; bit >= 0; --bit) {
        const std::uint64_t mask = std::uint64_t{1} << bit;
        auto pivot = std::find_if(vectors.begin() + rank, vectors.end(), [&](auto v) { return v & mask; });
        if (pivot == vectors.end()) continue;
        std::iter_swap(vectors.begin() + rank, pivot);
        for (std::size_t i = 0; i < vectors.size(); ++i)
            if (static_cast<int>(i) != rank && (vectors[i] & mask)) vectors[i] ^= vectors[rank];
        ++rank;
    }
    return rank;
}

GeneralisedReport validate_generalised(const GeneralisedColouring& rho, const CornerComplex& w) {
    GeneralisedReport rep;
    if (!w.all_embedded()) throw Error("validate_generalised: complex has a non-embedded facet");
    if (rho.image.size() != w.facets().size()) {
        rep.ok = false;
        rep.violations.push_back("colouring has " + std::to_string(rho.image.size()) +
                                 " entries for " + std::to_string(w.facets().size()) + " facets");
        return rep;
    }
    if (rho.m < 0 || rho.m > 64) throw Error("dimension of the colour space must be in 0..64");
    const std::uint64_t allowed = rho.m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << rho.m) - 1;
    for (std::size_t f = 0; f < rho.image.size(); ++f) {
        if (rho.image[f] == 0 || (rho.image[f] & ~allowed)) {
            rep.ok = false;
            rep.violations.push_back("facet " + std::to_string(f) + " has an invalid colour vector");
        }
    }
    if (gf2_rank(rho.image) != rho.m) {
        rep.ok = false;
        rep.violations.push_back("colours do not generate Z_2^" + std::to_string(rho.m));
    }
    for (int d = 0; d < w.dim(); ++d) {
        for (std::size_t s = 0; s < w.strata(d).size(); ++s) {
            const auto& fs = w.strata(d)[s].facets;
            if (fs.size() < 2) continue;
            std::vector<std::uint64_t> vs;
            for (int f : fs) vs.push_back(rho.image[f]);
            if (gf2_rank(vs) != static_cast<int>(vs.size())) {
                rep.ok = false;
                std::string names;
                for (int f : fs) names += " " + std::to_string(f);
                rep.violations.push_back("dependent colours at " + std::to_string(d) + "-stratum " +
                                         std::to_string(s) + " (facets" + names + ")");
            }
        }
    }
    return rep;
}

GeneralisedColouring reduce_colouring(const Colouring& c, int n) {
    if (c.k % 2 != 0) throw Error("reduce_colouring: k must be even");
    if (c.k <= n) throw Error("reduce_colouring: k must exceed the dimension");
    if (c.k > 65) throw Error("reduce_colouring: too many colours");
    GeneralisedColouring rho{c.k - 1, {}};
    const std::uint64_t all = (std::uint64_t{1} << (c.k - 1)) - 1;
    for (int x : c.colour) rho.image.push_back(x == c.k ? all : std::uint64_t{1} << (x - 1));
    return rho;
}

bool is_orientable(const GeneralisedColouring& rho) {
    return std::all_of(rho.image.begin(), rho.image.end(), [](std::uint64_t v) { return std::popcount(v) % 2 == 1; });
}

}  // namespace corners
