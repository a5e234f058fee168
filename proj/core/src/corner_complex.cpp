#include "corners/corner_complex.hpp"

#include "corners/error.hpp"
#include "dsu.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>

namespace corners {

namespace {

std::string slot_name(Slot s) { return std::to_string(s.chamber) + "." + std::to_string(s.facet); }

// (n-1)-faces of p containing each face, per dimension.
std::vector<std::vector<std::vector<int>>> facets_containing(const Polytope& p) {
    const int n = p.dim();
    std::vector<std::vector<std::vector<int>>> out(n);
    out[n - 1].resize(p.count(n - 1));
    for (int f = 0; f < p.count(n - 1); ++f) out[n - 1][f] = {f};
    for (int d = n - 2; d >= 0; --d) {
        out[d].resize(p.count(d));
        for (int f = 0; f < p.count(d); ++f) {
            std::set<int> acc;
            for (int up : p.super(d, f)) acc.insert(out[d + 1][up].begin(), out[d + 1][up].end());
            out[d][f].assign(acc.begin(), acc.end());
        }
    }
    return out;
}

struct Edge {
    int other;
    int gluing;
    bool forward;
};

}  // namespace

CornerComplex CornerComplex::build(std::vector<PolytopePtr> chambers, std::vector<Gluing> gluings) {
    if (chambers.empty()) throw Error("a corner complex needs at least one chamber");
    const int n = chambers[0]->dim();
    if (n < 2) throw Error("chambers must have dimension at least 2");
    for (const auto& c : chambers)
        if (!c || c->dim() != n) throw Error("all chambers must have the same dimension");

    CornerComplex w;
    w.dim_ = n;
    w.chambers_ = std::move(chambers);
    w.gluings_ = std::move(gluings);
    const int nch = static_cast<int>(w.chambers_.size());

    w.germ_offset_.assign(n + 1, std::vector<int>(nch + 1, 0));
    for (int d = 0; d <= n; ++d)
        for (int c = 0; c < nch; ++c)
            w.germ_offset_[d][c + 1] = w.germ_offset_[d][c] + w.chambers_[c]->count(d);
    auto germ_index = [&](int d, int c, int f) { return w.germ_offset_[d][c] + f; };
    auto germ_total_dim = [&](int d) { return w.germ_offset_[d][nch]; };

    w.slot_gluing_.assign(germ_total_dim(n - 1), -1);
    std::vector<FaceIso> inverse;
    for (std::size_t k = 0; k < w.gluings_.size(); ++k) {
        const Gluing& g = w.gluings_[k];
        for (Slot s : {g.a, g.b}) {
            if (s.chamber < 0 || s.chamber >= nch || s.facet < 0 ||
                s.facet >= w.chambers_[s.chamber]->count(n - 1))
                throw Error("gluing " + std::to_string(k) + " names a nonexistent slot " +
                            slot_name(s));
        }
        if (g.a == g.b) throw Error("slot " + slot_name(g.a) + " is glued to itself");
        if (g.iso.source.get() != w.chambers_[g.a.chamber].get() ||
            g.iso.target.get() != w.chambers_[g.b.chamber].get() ||
            g.iso.source_face != FaceRef{n - 1, g.a.facet} ||
            g.iso.target_face != FaceRef{n - 1, g.b.facet})
            throw Error("gluing " + slot_name(g.a) + " -> " + slot_name(g.b) +
                        " carries an isomorphism between the wrong faces");
        g.iso.validate();
        for (Slot s : {g.a, g.b}) {
            int& slot = w.slot_gluing_[germ_index(n - 1, s.chamber, s.facet)];
            if (slot >= 0) throw Error("slot " + slot_name(s) + " is glued twice");
            slot = static_cast<int>(k);
        }
        inverse.push_back(g.iso.inverse());
    }

    std::map<const Polytope*, std::vector<std::vector<std::vector<int>>>> containing;
    for (const auto& c : w.chambers_)
        if (!containing.count(c.get())) containing.emplace(c.get(), facets_containing(*c));

    w.strata_.assign(n + 1, {});
    w.germ_stratum_.assign(n + 1, {});
    std::vector<std::vector<int>> germ_sign(n + 1);

    for (int d = 0; d < n; ++d) {
        const int total = germ_total_dim(d);
        detail::Dsu dsu(total);
        std::vector<std::vector<Edge>> adj(total);
        for (std::size_t k = 0; k < w.gluings_.size(); ++k) {
            const Gluing& g = w.gluings_[k];
            for (int f : g.iso.source->faces_of(n - 1, g.a.facet, d)) {
                auto img = g.iso.map_face({d, f});
                const int x = germ_index(d, g.a.chamber, f);
                const int y = germ_index(d, g.b.chamber, img->id);
                dsu.unite(x, y);
                adj[x].push_back({y, static_cast<int>(k), true});
                adj[y].push_back({x, static_cast<int>(k), false});
            }
        }
        auto& stratum_of = w.germ_stratum_[d];
        stratum_of.assign(total, -1);
        germ_sign[d].assign(total, 1);
        std::vector<Germ> germ_of(total);
        for (int c = 0; c < nch; ++c)
            for (int f = 0; f < w.chambers_[c]->count(d); ++f) germ_of[germ_index(d, c, f)] = {c, f};

        std::vector<std::vector<int>> vmap(total);
        for (int r = 0; r < total; ++r) {
            if (dsu.find(r) != r) continue;
            const int sid = static_cast<int>(w.strata_[d].size());
            Stratum st;
            st.dim = d;
            const Germ rg = germ_of[r];
            const auto& rp = w.chambers_[rg.chamber];
            auto rv = rp->vertices(d, rg.face);
            vmap[r].assign(rv.begin(), rv.end());
            std::deque<int> queue{r};
            stratum_of[r] = sid;
            std::vector<int> members;
            while (!queue.empty()) {
                int x = queue.front();
                queue.pop_front();
                members.push_back(x);
                for (const Edge& e : adj[x]) {
                    const FaceIso& iso = e.forward ? w.gluings_[e.gluing].iso : inverse[e.gluing];
                    std::vector<int> img;
                    img.reserve(vmap[x].size());
                    for (int v : vmap[x]) img.push_back(iso.map_vertex(v));
                    if (stratum_of[e.other] < 0) {
                        stratum_of[e.other] = sid;
                        vmap[e.other] = std::move(img);
                        queue.push_back(e.other);
                    } else if (vmap[e.other] != img) {
                        throw Error("local model violation: the " + std::to_string(d) +
                                    "-stratum through chamber " + std::to_string(rg.chamber) +
                                    " face " + std::to_string(rg.face) +
                                    " is identified with itself by a nontrivial map");
                    }
                }
            }
            std::sort(members.begin(), members.end());
            for (int x : members) {
                const Germ g = germ_of[x];
                st.germs.push_back(g);
                int sign = 1;
                if (x != r && d > 0) {
                    FaceIso iso{rp, {d, rg.face}, w.chambers_[g.chamber], {d, g.face}, {}};
                    for (std::size_t i = 0; i < rv.size(); ++i) iso.vertex_map.emplace_back(rv[i], vmap[x][i]);
                    sign = orientation_sign(iso);
                }
                st.germ_sign.push_back(sign);
                germ_sign[d][x] = sign;
            }
            w.strata_[d].push_back(std::move(st));
        }
    }
    w.germ_stratum_[n].resize(nch);
    germ_sign[n].assign(nch, 1);
    for (int c = 0; c < nch; ++c) {
        w.germ_stratum_[n][c] = c;
        Stratum st;
        st.dim = n;
        st.germs = {{c, 0}};
        st.germ_sign = {1};
        w.strata_[n].push_back(std::move(st));
    }

    for (int d = 1; d <= n; ++d) {
        for (auto& st : w.strata_[d]) {
            const Germ rg = st.germs[0];
            const auto& p = *w.chambers_[rg.chamber];
            std::map<int, int> acc;
            for (int s : p.sub(d, rg.face)) {
                const int gi = germ_index(d - 1, rg.chamber, s);
                acc[w.germ_stratum_[d - 1][gi]] += p.incidence(d, rg.face, s) * germ_sign[d - 1][gi];
            }
            st.boundary.assign(acc.begin(), acc.end());
        }
    }

    for (const auto& st : w.strata_[n - 1])
        if (st.germs.size() > 2)
            throw Error("local model violation: more than two chambers share a facet germ");

    // Facets: unglued slots merged across flat ridges.
    const int nslots = germ_total_dim(n - 1);
    detail::Dsu facet_dsu(nslots);
    auto unglued = [&](int c, int facet) { return w.slot_gluing_[germ_index(n - 1, c, facet)] < 0; };
    std::vector<std::pair<int, std::pair<Slot, Slot>>> corner_list;
    for (std::size_t sid = 0; sid < w.strata_[n - 2].size(); ++sid) {
        const auto& st = w.strata_[n - 2][sid];
        std::vector<std::vector<int>> free_facets;
        for (const Germ& g : st.germs) {
            const auto& ups = containing.at(w.chambers_[g.chamber].get())[n - 2][g.face];
            std::vector<int> free;
            for (int f : ups)
                if (unglued(g.chamber, f)) free.push_back(f);
            free_facets.push_back(free);
        }
        const std::size_t germs = st.germs.size();
        auto free_count = [&](std::size_t i) { return free_facets[i].size(); };
        if (germs == 1 && free_count(0) == 2) {
            const Germ g = st.germs[0];
            corner_list.push_back({static_cast<int>(sid),
                                   {{g.chamber, free_facets[0][0]}, {g.chamber, free_facets[0][1]}}});
        } else if (germs == 2 && free_count(0) == 1 && free_count(1) == 1) {
            facet_dsu.unite(germ_index(n - 1, st.germs[0].chamber, free_facets[0][0]),
                            germ_index(n - 1, st.germs[1].chamber, free_facets[1][0]));
        } else if (germs != 4 || free_count(0) + free_count(1) + free_count(2) + free_count(3) != 0) {
            std::string where;
            for (std::size_t i = 0; i < germs; ++i)
                where += (i ? ", " : "") + std::to_string(st.germs[i].chamber) + ":" +
                         std::to_string(st.germs[i].face) + "(" + std::to_string(free_count(i)) + " free)";
            throw Error("local model violation at " + std::to_string(n - 2) + "-stratum " +
                        std::to_string(sid) + ": " + std::to_string(germs) +
                        " chambers meet [" + where + "]");
        }
    }

    w.slot_facet_.assign(nslots, -1);
    std::vector<int> root_facet(nslots, -1);
    for (int c = 0; c < nch; ++c) {
        for (int f = 0; f < w.chambers_[c]->count(n - 1); ++f) {
            if (!unglued(c, f)) continue;
            const int gi = germ_index(n - 1, c, f);
            const int root = facet_dsu.find(gi);
            if (root_facet[root] < 0) {
                root_facet[root] = static_cast<int>(w.facets_.size());
                Facet fa;
                fa.id = root_facet[root];
                w.facets_.push_back(fa);
            }
            w.slot_facet_[gi] = root_facet[root];
            w.facets_[root_facet[root]].slots.push_back({c, f});
        }
    }

    std::vector<std::set<int>> adjacent(w.facets_.size());
    for (const auto& [sid, pair] : corner_list) {
        const int f1 = w.facet_of(pair.first);
        const int f2 = w.facet_of(pair.second);
        w.corners_.push_back({sid, w.strata_[n - 2][sid].germs[0], pair.first, pair.second});
        w.facets_[f1].isolated = false;
        w.facets_[f2].isolated = false;
        if (f1 == f2) {
            w.facets_[f1].embedded = false;
        } else {
            adjacent[f1].insert(f2);
            adjacent[f2].insert(f1);
        }
    }
    for (std::size_t f = 0; f < w.facets_.size(); ++f)
        w.facets_[f].adjacent.assign(adjacent[f].begin(), adjacent[f].end());

    for (int d = 0; d < n; ++d) {
        for (auto& st : w.strata_[d]) {
            std::set<int> fs;
            for (const Germ& g : st.germs)
                for (int f : containing.at(w.chambers_[g.chamber].get())[d][g.face])
                    if (unglued(g.chamber, f)) fs.insert(w.facet_of({g.chamber, f}));
            st.facets.assign(fs.begin(), fs.end());
        }
    }
    return w;
}

std::optional<int> CornerComplex::gluing_at(Slot s) const {
    const int k = slot_gluing_[germ_offset_[dim_ - 1][s.chamber] + s.facet];
    if (k < 0) return std::nullopt;
    return k;
}

bool CornerComplex::all_embedded() const {
    return std::all_of(facets_.begin(), facets_.end(), [](const Facet& f) { return f.embedded; });
}

long long CornerComplex::germ_total() const {
    long long total = 0;
    for (const auto& level : strata_)
        for (const auto& st : level) total += static_cast<long long>(st.germs.size());
    return total;
}

FaceIso host_identification(const PolytopePtr& p, const PolytopePtr& host) {
    if (host->dim() != p->dim() + 1)
        throw Error("host " + host->name() + " must have dimension one more than " + p->name());
    auto isos = all_isomorphisms(p, {p->dim(), 0}, host, {p->dim(), 0});
    if (isos.empty())
        throw Error(p->name() + " is not isomorphic to facet 0 of " + host->name());
    return isos.front();
}

ThickenResult thicken(const CornerComplex& m, const PolytopePtr& host) {
    const int n = host->dim();
    if (m.dim() != n - 1) throw Error("thicken: complex dimension must be one less than the host's");
    if (!m.closed()) throw Error("thicken: the input complex has boundary");
    std::map<const Polytope*, FaceIso> ident;
    for (const auto& c : m.chambers())
        if (!ident.count(c.get())) ident.emplace(c.get(), host_identification(c, host));

    std::vector<Gluing> gluings;
    for (const Gluing& g : m.gluings()) {
        const FaceIso& ia = ident.at(g.iso.source.get());
        const FaceIso& ib = ident.at(g.iso.target.get());
        const FaceIso ra = ia.restrict_to({n - 2, g.a.facet});
        const FaceIso rb = ib.restrict_to({n - 2, g.b.facet});
        const FaceIso conj = compose(compose(ra.inverse(), g.iso), rb);
        auto other_facet = [&](FaceRef ridge) {
            for (int f : host->super(ridge.dim, ridge.id))
                if (f != 0) return f;
            throw Error("host ridge lies in facet 0 only");
        };
        const int a = other_facet(ra.target_face);
        const int b = other_facet(rb.target_face);
        FaceIso ext = extend_facet_iso(conj, {n - 1, a}, {n - 1, b});
        gluings.push_back({{g.a.chamber, a}, {g.b.chamber, b}, std::move(ext)});
    }
    std::vector<PolytopePtr> chambers(m.chambers().size(), host);
    ThickenResult out{CornerComplex::build(std::move(chambers), std::move(gluings)), 0};
    out.m_facet = out.complex.facet_of({0, 0});
    return out;
}

MirrorResult mirror(const CornerComplex& w, int facet) {
    if (facet < 0 || facet >= static_cast<int>(w.facets().size()))
        throw Error("mirror: no facet " + std::to_string(facet));
    const Facet& f = w.facets()[facet];
    if (!f.isolated) throw Error("mirror: facet " + std::to_string(facet) + " is not isolated");
    const int n = w.dim();
    const int nch = static_cast<int>(w.chambers().size());
    std::vector<PolytopePtr> chambers = w.chambers();
    chambers.insert(chambers.end(), w.chambers().begin(), w.chambers().end());
    std::vector<Gluing> gluings = w.gluings();
    for (const Gluing& g : w.gluings())
        gluings.push_back({{g.a.chamber + nch, g.a.facet}, {g.b.chamber + nch, g.b.facet}, g.iso});
    for (Slot s : f.slots)
        gluings.push_back({s, {s.chamber + nch, s.facet}, identity_iso(w.chambers()[s.chamber], {n - 1, s.facet})});

    MirrorResult out{CornerComplex::build(std::move(chambers), std::move(gluings)), {}, {}, nch, f.slots};
    const auto& facets = out.complex.facets();
    out.involution.assign(facets.size(), -1);
    out.side.assign(facets.size(), 0);
    for (const Facet& fa : facets) {
        const int side = fa.slots.front().chamber < nch ? 1 : -1;
        int partner = -1;
        for (Slot s : fa.slots) {
            if ((s.chamber < nch ? 1 : -1) != side) throw Error("mirror: a facet crosses the mirror");
            Slot t{s.chamber < nch ? s.chamber + nch : s.chamber - nch, s.facet};
            const int p = out.complex.facet_of(t);
            if (partner >= 0 && p != partner) throw Error("mirror: facet correspondence is not well defined");
            partner = p;
        }
        out.side[fa.id] = side;
        out.involution[fa.id] = partner;
    }
    for (const Facet& fa : facets) {
        if (out.involution[fa.id] == fa.id || out.involution[out.involution[fa.id]] != fa.id)
            throw Error("mirror: facet correspondence is not a free involution");
        for (int g : fa.adjacent)
            if (out.side[g] != out.side[fa.id]) throw Error("mirror: facets on opposite sides meet");
    }
    return out;
}

long long facet_count_prediction(long long n) {
    if (n < 0) throw Error("facet_count_prediction: negative chamber count");
    // 2n (20/8 + 12/2 + 30 + 12 + 20 + 12 + 1), summed over a common denominator.
    return 2 * n * (20 + 48 + 240 + 96 + 160 + 96 + 8) / 8;
}

}  // namespace corners
