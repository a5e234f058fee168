#include "corners/quotient.hpp"

#include "corners/error.hpp"
#include "dsu.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <ostream>
#include <set>

namespace corners {

void Stabilizer::add(std::uint64_t v) {
    v = reduce(v);
    if (v == 0) return;
    const std::uint64_t pivot = std::uint64_t{1} << (63 - std::countl_zero(v));
    for (auto& b : basis_)
        if (b & pivot) b ^= v;
    basis_.push_back(v);
    pivots_ |= pivot;
}

std::uint64_t Stabilizer::reduce(std::uint64_t u) const {
    for (std::uint64_t b : basis_) {
        const std::uint64_t pivot = std::uint64_t{1} << (63 - std::countl_zero(b));
        if (u & pivot) u ^= b;
    }
    return u;
}

namespace {

std::uint64_t low_mask(int m) { return m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1; }

// Bits of u at the positions of mask, packed to the low end.
std::uint64_t compress(std::uint64_t u, std::uint64_t mask) {
    std::uint64_t out = 0;
    int k = 0;
    for (std::uint64_t m = mask; m; m &= m - 1, ++k)
        if (u & (m & -m)) out |= std::uint64_t{1} << k;
    return out;
}

std::uint64_t deposit(std::uint64_t idx, std::uint64_t mask) {
    std::uint64_t out = 0;
    int k = 0;
    for (std::uint64_t m = mask; m; m &= m - 1, ++k)
        if (idx & (std::uint64_t{1} << k)) out |= m & -m;
    return out;
}

void check_colouring(const CornerComplex& w, const GeneralisedColouring& rho) {
    if (rho.m > 30) throw Error("quotients need at most 30 colour dimensions");
    auto rep = validate_generalised(rho, w);
    if (!rep.ok) throw Error("invalid colouring: " + rep.violations.front());
}

}  // namespace

long long QuotientComplex::cell_index(int d, int stratum, std::uint64_t u) const {
    const auto& s = stab[d][stratum];
    const std::uint64_t free = low_mask(m) & ~s.pivots();
    return offset[d][stratum] + static_cast<long long>(compress(s.reduce(u), free));
}

std::pair<int, std::uint64_t> QuotientComplex::cell_at(int d, long long index) const {
    auto it = std::upper_bound(offset[d].begin(), offset[d].end(), index);
    const int stratum = static_cast<int>(it - offset[d].begin()) - 1;
    const auto& s = stab[d][stratum];
    const std::uint64_t free = low_mask(m) & ~s.pivots();
    return {stratum, deposit(static_cast<std::uint64_t>(index - offset[d][stratum]), free)};
}

QuotientComplex build_quotient(const CornerComplex& w, const GeneralisedColouring& rho) {
    check_colouring(w, rho);
    const int n = w.dim();
    QuotientComplex q;
    q.dim = n;
    q.m = rho.m;
    q.stab.resize(n + 1);
    q.offset.resize(n + 1);
    q.base_boundary.resize(n + 1);
    for (int d = 0; d <= n; ++d) {
        const auto& strata = w.strata(d);
        long long at = 0;
        for (const auto& st : strata) {
            Stabilizer s;
            for (int f : st.facets) s.add(rho.image[f]);
            q.offset[d].push_back(at);
            at += 1LL << (q.m - s.rank());
            q.stab[d].push_back(s);
            q.base_boundary[d].push_back(st.boundary);
        }
        q.offset[d].push_back(at);
    }

    q.chain.cells.resize(n + 1);
    q.chain.boundary.resize(n + 1);
    for (int d = 0; d <= n; ++d) q.chain.cells[d] = q.cells(d);
    for (int d = 1; d <= n; ++d) {
        if (q.cells(d) > INT32_MAX || q.cells(d - 1) > INT32_MAX) throw Error("quotient too large");
        SparseIntMatrix mat(static_cast<int>(q.cells(d - 1)), static_cast<int>(q.cells(d)));
        for (std::size_t c = 0; c < w.strata(d).size(); ++c) {
            const auto& s = q.stab[d][c];
            const std::uint64_t free = low_mask(q.m) & ~s.pivots();
            const long long count = q.offset[d][c + 1] - q.offset[d][c];
            for (long long i = 0; i < count; ++i) {
                const std::uint64_t u = deposit(static_cast<std::uint64_t>(i), free);
                auto& col = mat.columns[q.offset[d][c] + i];
                for (auto [y, coef] : q.base_boundary[d][c])
                    if (coef != 0) col.emplace_back(static_cast<int>(q.cell_index(d - 1, y, u)), coef);
                std::sort(col.begin(), col.end());
            }
        }
        q.chain.boundary[d] = std::move(mat);
    }
    if (!boundary_squares_to_zero(q.chain))
        throw Error("internal: boundary maps of the quotient do not compose to zero");

    // Connectivity over all cells, following every incidence including cancelling ones.
    std::vector<long long> base(n + 2, 0);
    for (int d = 0; d <= n; ++d) base[d + 1] = base[d] + q.cells(d);
    detail::Dsu dsu(static_cast<int>(base[n + 1]));
    for (int d = 1; d <= n; ++d) {
        for (long long i = 0; i < q.cells(d); ++i) {
            auto [c, u] = q.cell_at(d, i);
            for (auto [y, coef] : q.base_boundary[d][c])
                dsu.unite(static_cast<int>(base[d] + i), static_cast<int>(base[d - 1] + q.cell_index(d - 1, y, u)));
        }
    }
    std::set<int> roots;
    for (int x = 0; x < dsu.size(); ++x) roots.insert(dsu.find(x));
    q.components = static_cast<long long>(roots.size());

    // Orientability: signs on top cells making the fundamental chain a cycle. Cofaces
    // are taken germ by germ so that a cell met twice by one top cell is seen twice.
    std::vector<std::vector<std::pair<int, int>>> cofaces(q.cells(n - 1));
    for (long long i = 0; i < q.cells(n - 1); ++i) {
        auto [c, u0] = q.cell_at(n - 1, i);
        const auto& st = w.strata(n - 1)[c];
        std::vector<std::uint64_t> coset{u0};
        for (const auto& rep : st.facets) {
            const std::uint64_t r = rho.image[rep];
            const std::size_t k = coset.size();
            for (std::size_t j = 0; j < k; ++j)
                if (std::find(coset.begin(), coset.end(), coset[j] ^ r) == coset.end()) coset.push_back(coset[j] ^ r);
        }
        for (std::size_t g = 0; g < st.germs.size(); ++g) {
            const Germ germ = st.germs[g];
            const int inc = w.chambers()[germ.chamber]->incidence(n, 0, germ.face) * st.germ_sign[g];
            for (std::uint64_t u : coset)
                cofaces[i].emplace_back(static_cast<int>(q.cell_index(n, germ.chamber, u)), inc);
        }
    }
    q.orientable = std::all_of(cofaces.begin(), cofaces.end(), [](const auto& cf) { return cf.size() == 2; });
    if (q.orientable) {
        std::vector<std::vector<long long>> faces_of_top(q.cells(n));
        for (long long i = 0; i < q.cells(n - 1); ++i)
            for (auto [t, v] : cofaces[i]) faces_of_top[t].push_back(i);
        std::vector<int> sign(q.cells(n), 0);
        for (long long start = 0; start < q.cells(n) && q.orientable; ++start) {
            if (sign[start]) continue;
            sign[start] = 1;
            std::vector<long long> stack{start};
            while (!stack.empty() && q.orientable) {
                const long long t = stack.back();
                stack.pop_back();
                for (long long r : faces_of_top[t]) {
                    const auto [t1, v1] = cofaces[r][0];
                    const auto [t2, v2] = cofaces[r][1];
                    // sign[t1] v1 + sign[t2] v2 = 0
                    if (!sign[t1] && !sign[t2]) continue;
                    const long long known = sign[t1] ? t1 : t2;
                    const long long other = sign[t1] ? t2 : t1;
                    const int want = -sign[known] * (known == t1 ? v1 : v2) * (known == t1 ? v2 : v1);
                    if (t1 == t2) {
                        if (v1 + v2 != 0) q.orientable = false;
                    } else if (!sign[other]) {
                        sign[other] = want;
                        stack.push_back(other);
                    } else if (sign[other] != want) {
                        q.orientable = false;
                    }
                }
            }
        }
    }
    q.chain.closed_orientable_manifold = q.orientable && q.components == 1;

    bool all_120 = std::all_of(w.chambers().begin(), w.chambers().end(),
                               [](const PolytopePtr& p) { return p->name() == "120cell"; });
    if (all_120) q.chi_120_identity = 2 * q.euler_characteristic() == 17 * q.cells(n);
    return q;
}

long long weighted_euler(const CornerComplex& w, const GeneralisedColouring& rho) {
    check_colouring(w, rho);
    long long chi = 0;
    for (int d = 0; d <= w.dim(); ++d) {
        for (const auto& st : w.strata(d)) {
            std::vector<std::uint64_t> vs;
            for (int f : st.facets) vs.push_back(rho.image[f]);
            chi += (d % 2 ? -1 : 1) * (1LL << (rho.m - gf2_rank(vs)));
        }
    }
    return chi;
}

CornerComplex quotient_tessellation(const CornerComplex& w, const GeneralisedColouring& rho) {
    check_colouring(w, rho);
    const int n = w.dim();
    const int nch = static_cast<int>(w.chambers().size());
    const std::uint64_t copies = std::uint64_t{1} << rho.m;
    std::vector<PolytopePtr> chambers;
    for (std::uint64_t u = 0; u < copies; ++u)
        chambers.insert(chambers.end(), w.chambers().begin(), w.chambers().end());
    auto at = [&](int c, std::uint64_t u) { return static_cast<int>(u) * nch + c; };
    std::vector<Gluing> gluings;
    for (std::uint64_t u = 0; u < copies; ++u)
        for (const Gluing& g : w.gluings())
            gluings.push_back({{at(g.a.chamber, u), g.a.facet}, {at(g.b.chamber, u), g.b.facet}, g.iso});
    for (const Facet& f : w.facets()) {
        const std::uint64_t r = rho.image[f.id];
        for (std::uint64_t u = 0; u < copies; ++u) {
            if ((u ^ r) < u) continue;
            for (Slot s : f.slots)
                gluings.push_back({{at(s.chamber, u), s.facet},
                                   {at(s.chamber, u ^ r), s.facet},
                                   identity_iso(w.chambers()[s.chamber], {n - 1, s.facet})});
        }
    }
    return CornerComplex::build(std::move(chambers), std::move(gluings));
}

SeparationReport separation_check(const MirrorResult& mr, const Colouring& lambda) {
    const CornerComplex& w = mr.complex;
    const int n = w.dim();
    const int half = mr.copy_chambers;
    if (lambda.colour.size() != w.facets().size()) throw Error("separation_check: colouring size mismatch");
    for (std::size_t f = 0; f < lambda.colour.size(); ++f)
        if (lambda.colour[f] != lambda.colour[mr.involution[f]])
            throw Error("separation_check: colouring is not symmetric under the mirror involution");
    const GeneralisedColouring rho = lift(lambda);
    const QuotientComplex q = build_quotient(w, rho);
    SeparationReport rep;
    rep.expected_copies = 1LL << q.m;

    // Strata of W lying in the mirrored facet.
    std::vector<std::set<int>> in_m(n);
    for (Slot s : mr.mirror_slots) {
        const auto& p = w.chambers()[s.chamber];
        for (int d = 0; d < n; ++d)
            for (int f : p->faces_of(n - 1, s.facet, d)) in_m[d].insert(w.stratum_of(d, {s.chamber, f}));
    }
    for (int d = 0; d < n; ++d)
        for (int c : in_m[d])
            if (q.stab[d][c].rank() != 0) throw Error("separation_check: mirrored facet meets the boundary");

    // Top cells joined across codimension-one cells off the mirror image.
    const auto& top = q.chain.boundary[n];
    std::vector<std::vector<int>> cofaces(q.cells(n - 1));
    for (int t = 0; t < top.cols; ++t)
        for (auto [r, v] : top.columns[t]) cofaces[r].push_back(t);
    detail::Dsu sides(top.cols);
    for (long long r = 0; r < q.cells(n - 1); ++r) {
        if (in_m[n - 1].count(q.cell_at(n - 1, r).first)) continue;
        for (std::size_t i = 1; i < cofaces[r].size(); ++i) sides.unite(cofaces[r][0], cofaces[r][i]);
    }
    std::set<int> side_roots;
    for (int t = 0; t < top.cols; ++t) side_roots.insert(sides.find(t));
    rep.components_after_removal = static_cast<int>(side_roots.size());

    // Components of the mirror image, each compared with the facet's own cell counts.
    std::vector<long long> base(n + 1, 0);
    for (int d = 0; d < n; ++d) base[d + 1] = base[d] + q.cells(d);
    detail::Dsu copies(static_cast<int>(base[n]));
    std::vector<bool> member(base[n], false);
    for (int d = 0; d < n; ++d)
        for (long long i = 0; i < q.cells(d); ++i) {
            auto [c, u] = q.cell_at(d, i);
            if (!in_m[d].count(c)) continue;
            member[base[d] + i] = true;
            if (d == 0) continue;
            for (auto [y, coef] : q.base_boundary[d][c])
                copies.unite(static_cast<int>(base[d] + i), static_cast<int>(base[d - 1] + q.cell_index(d - 1, y, u)));
        }
    std::map<int, std::vector<long long>> per_copy;
    for (int d = 0; d < n; ++d)
        for (long long i = 0; i < q.cells(d); ++i) {
            if (!member[base[d] + i]) continue;
            auto& counts = per_copy[copies.find(static_cast<int>(base[d] + i))];
            counts.resize(n, 0);
            ++counts[d];
        }
    rep.separating_copies = static_cast<long long>(per_copy.size());
    std::vector<long long> m_counts(n, 0);
    for (int d = 0; d < n; ++d) m_counts[d] = static_cast<long long>(in_m[d].size());
    rep.copies_match = std::all_of(per_copy.begin(), per_copy.end(), [&](const auto& kv) { return kv.second == m_counts; });

    // sigma(c, u) = (mirror of c, u) with the orientation sign of the mirrored germ.
    auto mirror_stratum = [&](int d, int c) {
        const Germ g = w.strata(d)[c].germs[0];
        const Germ h{g.chamber < half ? g.chamber + half : g.chamber - half, g.face};
        const int image = w.stratum_of(d, h);
        const auto& st = w.strata(d)[image];
        const auto it = std::lower_bound(st.germs.begin(), st.germs.end(), h);
        return std::pair{image, st.germ_sign[it - st.germs.begin()]};
    };
    bool iso = true;
    for (int d = 1; d <= n && iso; ++d) {
        for (std::size_t c = 0; c < w.strata(d).size() && iso; ++c) {
            auto [sc, eps] = mirror_stratum(d, static_cast<int>(c));
            if (q.stab[d][sc].pivots() != q.stab[d][c].pivots()) iso = false;
            std::map<int, int> lhs, rhs;
            for (auto [y, coef] : q.base_boundary[d][sc]) lhs[y] += eps * coef;
            for (auto [y, coef] : q.base_boundary[d][c]) {
                auto [sy, ey] = mirror_stratum(d - 1, y);
                rhs[sy] += coef * ey;
            }
            std::erase_if(lhs, [](const auto& kv) { return kv.second == 0; });
            std::erase_if(rhs, [](const auto& kv) { return kv.second == 0; });
            if (lhs != rhs) iso = false;
        }
    }
    rep.involution_is_isomorphism = iso;

    const int plus_root = sides.find(static_cast<int>(q.cell_index(n, 0, 0)));
    bool swaps = rep.components_after_removal == 2;
    for (int t = 0; t < top.cols && swaps; ++t) {
        auto [c, u] = q.cell_at(n, t);
        const int image = static_cast<int>(q.cell_index(n, mirror_stratum(n, c).first, u));
        if ((sides.find(t) == plus_root) == (sides.find(image) == plus_root)) swaps = false;
    }
    rep.swaps_sides = swaps;
    return rep;
}

void write_quotient_dump(std::ostream& out, const QuotientComplex& q) {
    out << "complex " << q.dim << "\n";
    out << "group " << q.m << "\n";
    if (q.chain.closed_orientable_manifold) out << "orientable-closed-manifold\n";
    for (int d = 0; d <= q.dim; ++d) out << "cells " << d << " " << q.cells(d) << "\n";
    for (int d = 0; d <= q.dim; ++d)
        for (long long i = 0; i < q.cells(d); ++i) {
            auto [c, u] = q.cell_at(d, i);
            out << "cell " << d << " " << i << " " << c << " " << u << "\n";
        }
    for (int d = 1; d <= q.dim; ++d) {
        const auto& m = q.chain.boundary[d];
        for (int c = 0; c < m.cols; ++c)
            for (auto [r, v] : m.columns[c]) out << d << " " << r << " " << c << " " << v << "\n";
    }
}

}  // namespace corners
