#include "corners/homology.hpp"

#include "corners/error.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <queue>
#include <sstream>
#include <thread>

namespace corners {

SparseIntMatrix SparseIntMatrix::from_triplets(int rows, int cols,
                                               const std::vector<std::tuple<int, int, std::int64_t>>& entries) {
    SparseIntMatrix m(rows, cols);
    std::vector<std::map<int, std::int64_t>> acc(cols);
    for (const auto& [r, c, v] : entries) {
        if (r < 0 || r >= rows || c < 0 || c >= cols) throw Error("matrix entry out of range");
        acc[c][r] += v;
    }
    for (int c = 0; c < cols; ++c)
        for (auto [r, v] : acc[c])
            if (v != 0) m.columns[c].emplace_back(r, v);
    return m;
}

SparseIntMatrix SparseIntMatrix::from_dense(const std::vector<std::vector<std::int64_t>>& dense) {
    const int rows = static_cast<int>(dense.size());
    const int cols = rows ? static_cast<int>(dense[0].size()) : 0;
    SparseIntMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (dense[r][c] != 0) m.columns[c].emplace_back(r, dense[r][c]);
    return m;
}

std::vector<std::vector<std::int64_t>> SparseIntMatrix::to_dense() const {
    std::vector<std::vector<std::int64_t>> d(rows, std::vector<std::int64_t>(cols, 0));
    for (int c = 0; c < cols; ++c)
        for (auto [r, v] : columns[c]) d[r][c] = v;
    return d;
}

SparseIntMatrix SparseIntMatrix::transpose() const {
    SparseIntMatrix t(cols, rows);
    for (int c = 0; c < cols; ++c)
        for (auto [r, v] : columns[c]) t.columns[r].emplace_back(c, v);
    return t;
}

std::size_t SparseIntMatrix::nnz() const {
    std::size_t n = 0;
    for (const auto& c : columns) n += c.size();
    return n;
}

namespace {

// ------------------------------------------------------------------ arithmetic policies

struct ModP {
    using Value = std::uint32_t;
    std::uint32_t p;

    Value from_int(std::int64_t v) const {
        std::int64_t r = v % static_cast<std::int64_t>(p);
        return static_cast<Value>(r < 0 ? r + p : r);
    }
    bool zero(Value v) const { return v == 0; }
    Value mul(Value a, Value b) const { return static_cast<Value>(std::uint64_t{a} * b % p); }
    Value inv(Value a) const {
        std::int64_t t = 0, nt = 1, r = p, nr = a;
        while (nr) {
            const std::int64_t q = r / nr;
            std::tie(t, nt) = std::pair{nt, t - q * nt};
            std::tie(r, nr) = std::pair{nr, r - q * nr};
        }
        return static_cast<Value>(t < 0 ? t + p : t);
    }
    // new = alpha * target - beta * pivot with alpha = 1.
    std::pair<Value, Value> factors(Value target_coef, Value pivot_coef) const {
        return {1, mul(target_coef, inv(pivot_coef))};
    }
    Value combine(Value alpha, Value t, Value beta, Value q) const {
        const std::uint64_t a = std::uint64_t{alpha} * t % p;
        const std::uint64_t b = std::uint64_t{beta} * q % p;
        return static_cast<Value>((a + p - b) % p);
    }
    template <class Row>
    void normalize(Row&) const {}
};

struct Integers {
    using Value = mpz_class;
    Value from_int(std::int64_t v) const { return Value(static_cast<long>(v)); }
    bool zero(const Value& v) const { return sgn(v) == 0; }
    std::pair<Value, Value> factors(const Value& target_coef, const Value& pivot_coef) const {
        Value g = gcd(target_coef, pivot_coef);
        return {pivot_coef / g, target_coef / g};
    }
    Value combine(const Value& alpha, const Value& t, const Value& beta, const Value& q) const {
        return alpha * t - beta * q;
    }
    template <class Row>
    void normalize(Row& row) const {
        Value g = 0;
        for (const auto& e : row) {
            g = gcd(g, e.val);
            if (g == 1) return;
        }
        if (g > 1)
            for (auto& e : row) e.val /= g;
    }
};

template <class Policy>
struct Entry {
    int col;
    typename Policy::Value val;
};

// ------------------------------------------------------------------ dense phases

template <class Fn>
void parallel_rows(int begin, int end, int threads, Fn&& fn) {
    const int n = end - begin;
    if (threads <= 1 || n < 4096) {
        fn(begin, end);
        return;
    }
    std::vector<std::thread> pool;
    const int chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int lo = begin + t * chunk;
        const int hi = std::min(end, lo + chunk);
        if (lo < hi) pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

long long dense_rank_gf2(std::vector<std::vector<std::uint64_t>>& rows, int ncols, int threads) {
    const int nrows = static_cast<int>(rows.size());
    long long rank = 0;
    for (int c = 0; c < ncols && rank < nrows; ++c) {
        const int w = c / 64;
        const std::uint64_t bit = std::uint64_t{1} << (c % 64);
        int piv = -1;
        for (int r = static_cast<int>(rank); r < nrows; ++r)
            if (rows[r][w] & bit) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(rows[rank], rows[piv]);
        const auto& prow = rows[rank];
        const std::size_t words = prow.size();
        parallel_rows(static_cast<int>(rank) + 1, nrows, threads, [&](int lo, int hi) {
            for (int r = lo; r < hi; ++r) {
                auto& row = rows[r];
                if (!(row[w] & bit)) continue;
                for (std::size_t k = w; k < words; ++k) row[k] ^= prow[k];
            }
        });
        ++rank;
    }
    return rank;
}

long long dense_rank_mod_p(std::vector<std::vector<std::uint32_t>>& rows, int ncols, std::uint32_t p, int threads) {
    const ModP f{p};
    const int nrows = static_cast<int>(rows.size());
    long long rank = 0;
    for (int c = 0; c < ncols && rank < nrows; ++c) {
        int piv = -1;
        for (int r = static_cast<int>(rank); r < nrows; ++r)
            if (rows[r][c]) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(rows[rank], rows[piv]);
        const auto& prow = rows[rank];
        const std::uint32_t pinv = f.inv(prow[c]);
        parallel_rows(static_cast<int>(rank) + 1, nrows, threads, [&](int lo, int hi) {
            for (int r = lo; r < hi; ++r) {
                auto& row = rows[r];
                if (!row[c]) continue;
                const std::uint64_t factor = p - f.mul(row[c], pinv);
                for (int k = c; k < ncols; ++k)
                    if (prow[k]) row[k] = static_cast<std::uint32_t>((row[k] + factor * prow[k]) % p);
            }
        });
        ++rank;
    }
    return rank;
}

// ------------------------------------------------------------------ sparse elimination

template <class Policy>
class SparseEliminator {
public:
    using Value = typename Policy::Value;
    using Row = std::vector<Entry<Policy>>;

    SparseEliminator(const SparseIntMatrix& m, Policy policy) : f_(std::move(policy)), ncols_(m.cols) {
        rows_.resize(m.rows);
        for (int c = 0; c < m.cols; ++c)
            for (auto [r, v] : m.columns[c]) {
                Value x = f_.from_int(v);
                if (!f_.zero(x)) rows_[r].push_back({c, x});
            }
        col_rows_.resize(ncols_);
        col_count_.assign(ncols_, 0);
        col_done_.assign(ncols_, false);
        for (int r = 0; r < m.rows; ++r) {
            if (rows_[r].empty()) continue;
            ++active_rows_;
            nnz_ += rows_[r].size();
            for (const auto& e : rows_[r]) {
                col_rows_[e.col].push_back(r);
                if (col_count_[e.col]++ == 0) ++active_cols_;
            }
        }
        for (int c = 0; c < ncols_; ++c)
            if (col_count_[c] > 0) heap_.push({col_count_[c], c});
    }

    // Eliminates until done or until the active part is dense enough; returns the
    // rank found so far. `dense_fill` <= 0 disables the switch.
    long long run(double dense_fill, std::size_t dense_limit) {
        while (!heap_.empty()) {
            if (dense_fill > 0 && active_rows_ > 0 && active_cols_ > 0) {
                const double area = static_cast<double>(active_rows_) * active_cols_;
                if (area <= static_cast<double>(dense_limit) && nnz_ >= dense_fill * area) {
                    dense_pending_ = true;
                    return rank_;
                }
            }
            auto [cnt, c] = heap_.top();
            heap_.pop();
            if (col_done_[c] || col_count_[c] != cnt || cnt == 0) continue;
            pivot_on(c);
        }
        return rank_;
    }

    bool dense_pending() const { return dense_pending_; }

    // Active rows restricted to active columns, renumbered densely.
    std::vector<int> active_columns() const {
        std::vector<int> cols;
        for (int c = 0; c < ncols_; ++c)
            if (!col_done_[c] && col_count_[c] > 0) cols.push_back(c);
        return cols;
    }
    const std::vector<Row>& rows() const { return rows_; }

private:
    bool contains(const Row& row, int c) const {
        auto it = std::lower_bound(row.begin(), row.end(), c, [](const auto& e, int x) { return e.col < x; });
        return it != row.end() && it->col == c;
    }
    const Value& value_at(const Row& row, int c) const {
        return std::lower_bound(row.begin(), row.end(), c, [](const auto& e, int x) { return e.col < x; })->val;
    }

    void bump(int c, int delta) {
        const int before = col_count_[c];
        col_count_[c] += delta;
        if (before == 0 && col_count_[c] > 0) ++active_cols_;
        if (before > 0 && col_count_[c] == 0) --active_cols_;
        if (!col_done_[c] && col_count_[c] > 0) heap_.push({col_count_[c], c});
    }

    void pivot_on(int c) {
        auto& cand = col_rows_[c];
        std::vector<int> live;
        for (int r : cand)
            if (contains(rows_[r], c)) live.push_back(r);
        std::sort(live.begin(), live.end());
        live.erase(std::unique(live.begin(), live.end()), live.end());
        int piv = live.front();
        for (int r : live)
            if (rows_[r].size() < rows_[piv].size()) piv = r;
        const Row prow = std::move(rows_[piv]);
        rows_[piv].clear();
        --active_rows_;
        nnz_ -= prow.size();
        for (const auto& e : prow) bump(e.col, -1);
        const Value pc = value_at(prow, c);
        for (int r : live) {
            if (r == piv) continue;
            eliminate(r, prow, value_at(rows_[r], c), pc);
        }
        cand.clear();
        col_done_[c] = true;
        ++rank_;
    }

    void eliminate(int r, const Row& prow, const Value& tc, const Value& pc) {
        const auto [alpha, beta] = f_.factors(tc, pc);
        Row& row = rows_[r];
        Row out;
        out.reserve(row.size() + prow.size());
        std::size_t i = 0, j = 0;
        const Value zero = f_.from_int(0);
        while (i < row.size() || j < prow.size()) {
            if (j == prow.size() || (i < row.size() && row[i].col < prow[j].col)) {
                out.push_back({row[i].col, f_.combine(alpha, row[i].val, beta, zero)});
                ++i;
            } else if (i == row.size() || prow[j].col < row[i].col) {
                const int col = prow[j].col;
                out.push_back({col, f_.combine(alpha, zero, beta, prow[j].val)});
                bump(col, +1);
                col_rows_[col].push_back(r);
                ++j;
            } else {
                Value v = f_.combine(alpha, row[i].val, beta, prow[j].val);
                if (f_.zero(v))
                    bump(row[i].col, -1);
                else
                    out.push_back({row[i].col, std::move(v)});
                ++i;
                ++j;
            }
        }
        f_.normalize(out);
        nnz_ -= row.size();
        nnz_ += out.size();
        if (out.empty()) --active_rows_;
        row = std::move(out);
    }

    Policy f_;
    int ncols_;
    std::vector<Row> rows_;
    std::vector<std::vector<int>> col_rows_;
    std::vector<int> col_count_;
    std::vector<bool> col_done_;
    std::priority_queue<std::pair<int, int>, std::vector<std::pair<int, int>>, std::greater<>> heap_;
    long long active_rows_ = 0;
    long long active_cols_ = 0;
    std::size_t nnz_ = 0;
    long long rank_ = 0;
    bool dense_pending_ = false;
};

constexpr std::size_t dense_limit_gf2 = std::size_t{1} << 33;  // bits
constexpr std::size_t dense_limit_mod_p = std::size_t{1} << 27;  // 32-bit entries

}  // namespace

long long rank_gf2(const SparseIntMatrix& m, const RankOptions& opt) {
    SparseEliminator<ModP> el(m, ModP{2});
    long long rank = el.run(opt.dense_fill, dense_limit_gf2);
    if (!el.dense_pending()) return rank;
    const auto cols = el.active_columns();
    std::vector<int> index(m.cols, -1);
    for (std::size_t i = 0; i < cols.size(); ++i) index[cols[i]] = static_cast<int>(i);
    const std::size_t words = (cols.size() + 63) / 64;
    std::vector<std::vector<std::uint64_t>> dense;
    for (const auto& row : el.rows()) {
        if (row.empty()) continue;
        std::vector<std::uint64_t> bits(words, 0);
        for (const auto& e : row) {
            const int k = index[e.col];
            bits[k / 64] |= std::uint64_t{1} << (k % 64);
        }
        dense.push_back(std::move(bits));
    }
    return rank + dense_rank_gf2(dense, static_cast<int>(cols.size()), opt.threads);
}

long long rank_mod_p(const SparseIntMatrix& m, std::uint32_t p, const RankOptions& opt) {
    if (p < 2) throw Error("modulus must be at least 2");
    if (p == 2) return rank_gf2(m, opt);
    SparseEliminator<ModP> el(m, ModP{p});
    long long rank = el.run(opt.dense_fill, dense_limit_mod_p);
    if (!el.dense_pending()) return rank;
    const auto cols = el.active_columns();
    std::vector<int> index(m.cols, -1);
    for (std::size_t i = 0; i < cols.size(); ++i) index[cols[i]] = static_cast<int>(i);
    std::vector<std::vector<std::uint32_t>> dense;
    for (const auto& row : el.rows()) {
        if (row.empty()) continue;
        std::vector<std::uint32_t> vals(cols.size(), 0);
        for (const auto& e : row) vals[index[e.col]] = e.val;
        dense.push_back(std::move(vals));
    }
    return rank + dense_rank_mod_p(dense, static_cast<int>(cols.size()), p, opt.threads);
}

long long rank_exact(const SparseIntMatrix& m) {
    SparseEliminator<Integers> el(m, Integers{});
    return el.run(0.0, 0);
}

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

std::uint64_t splitmix(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++s;
    }
    for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s && composite; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) composite = false;
        }
        if (composite) return false;
    }
    return true;
}

std::uint32_t random_prime(std::uint64_t& state, std::uint32_t lo, std::uint32_t hi) {
    if (hi <= lo + 2) throw Error("empty prime range");
    for (;;) {
        const std::uint64_t x = lo + 1 + splitmix(state) % (hi - lo - 1);
        if (is_prime(x)) return static_cast<std::uint32_t>(x);
    }
}

RationalRank rank_rational_report(const SparseIntMatrix& m, std::uint64_t seed, const RankOptions& opt) {
    RationalRank out;
    std::uint64_t state = seed;
    out.p1 = random_prime(state, 1u << 20, 1u << 30);
    do out.p2 = random_prime(state, 1u << 20, 1u << 30);
    while (out.p2 == out.p1);
    out.rank_p1 = rank_mod_p(m, out.p1, opt);
    out.rank_p2 = rank_mod_p(m, out.p2, opt);
    if (out.rank_p1 == out.rank_p2) {
        out.rank = out.rank_p1;
    } else {
        out.escalated = true;
        out.rank = rank_exact(m);
    }
    return out;
}

long long rank_rational(const SparseIntMatrix& m, std::uint64_t seed, const RankOptions& opt) {
    return rank_rational_report(m, seed, opt).rank;
}

std::vector<std::int64_t> smith_normal_form(const SparseIntMatrix& m, int cap) {
    if (m.rows > cap || m.cols > cap)
        throw Error("smith_normal_form: matrix exceeds the " + std::to_string(cap) + " cap");
    const int R = m.rows, C = m.cols;
    std::vector<std::vector<mpz_class>> a(R, std::vector<mpz_class>(C, 0));
    for (int c = 0; c < C; ++c)
        for (auto [r, v] : m.columns[c]) a[r][c] = static_cast<long>(v);
    std::vector<mpz_class> diag;
    for (int t = 0; t < std::min(R, C); ++t) {
        auto smallest = [&](bool line_only) {
            int bi = -1, bj = -1;
            for (int i = t; i < R; ++i)
                for (int j = t; j < C; ++j) {
                    if (line_only && i != t && j != t) continue;
                    if (sgn(a[i][j]) == 0) continue;
                    if (bi < 0 || abs(a[i][j]) < abs(a[bi][bj])) {
                        bi = i;
                        bj = j;
                    }
                }
            return std::pair{bi, bj};
        };
        auto move_to_pivot = [&](int i, int j) {
            std::swap(a[t], a[i]);
            for (int r = 0; r < R; ++r) std::swap(a[r][t], a[r][j]);
        };
        auto [pi, pj] = smallest(false);
        if (pi < 0) break;
        move_to_pivot(pi, pj);
        for (;;) {
            bool clean = true;
            for (int i = t + 1; i < R; ++i) {
                if (sgn(a[i][t]) == 0) continue;
                mpz_class q = a[i][t] / a[t][t];
                for (int j = t; j < C; ++j) a[i][j] -= q * a[t][j];
                if (sgn(a[i][t]) != 0) clean = false;
            }
            for (int j = t + 1; j < C; ++j) {
                if (sgn(a[t][j]) == 0) continue;
                mpz_class q = a[t][j] / a[t][t];
                for (int i = t; i < R; ++i) a[i][j] -= q * a[i][t];
                if (sgn(a[t][j]) != 0) clean = false;
            }
            if (!clean) {
                auto [i, j] = smallest(true);
                move_to_pivot(i, j);
                continue;
            }
            int bad = -1;
            for (int i = t + 1; i < R && bad < 0; ++i)
                for (int j = t + 1; j < C; ++j)
                    if (sgn(a[i][j]) != 0 && a[i][j] % a[t][t] != 0) {
                        bad = i;
                        break;
                    }
            if (bad < 0) break;
            for (int j = t; j < C; ++j) a[t][j] += a[bad][j];
        }
        diag.push_back(abs(a[t][t]));
    }
    std::vector<std::int64_t> out;
    for (const auto& d : diag) {
        if (!d.fits_slong_p()) throw Error("smith_normal_form: invariant factor exceeds 64 bits");
        out.push_back(d.get_si());
    }
    return out;
}

std::string field_name(Field f) { return f == Field::gf2 ? "gf2" : "rational"; }

long long ChainComplex::euler_characteristic() const {
    long long chi = 0;
    for (std::size_t d = 0; d < cells.size(); ++d) chi += (d % 2 ? -1 : 1) * cells[d];
    return chi;
}

BettiVector betti(const ChainComplex& cc, Field field, bool fast, const RankOptions& opt) {
    const int n = cc.dim();
    BettiVector out;
    out.field = field;
    out.fast_path = fast;
    out.ranks.assign(n + 2, 0);
    auto rank_of = [&](int d) {
        const auto& m = cc.boundary[d];
        return field == Field::gf2 ? rank_gf2(m, opt) : rank_rational(m, 0x5eed + d, opt);
    };
    if (!fast) {
        for (int d = 1; d <= n; ++d) out.ranks[d] = rank_of(d);
        for (int d = 0; d <= n; ++d) out.b.push_back(cc.cells[d] - out.ranks[d] - out.ranks[d + 1]);
        return out;
    }
    if (field != Field::rational) throw Error("the fast Betti path is rational only");
    if (!cc.closed_orientable_manifold) throw Error("the fast Betti path needs a closed orientable manifold");
    if (n % 2 != 0) throw Error("the fast Betti path needs an even-dimensional manifold");
    const int half = n / 2;
    for (int d = 1; d <= half; ++d) out.ranks[d] = rank_of(d);
    out.b.assign(n + 1, 0);
    for (int d = 0; d < half; ++d) {
        out.b[d] = cc.cells[d] - out.ranks[d] - out.ranks[d + 1];
        out.b[n - d] = out.b[d];
    }
    long long rest = cc.euler_characteristic();
    for (int d = 0; d <= n; ++d)
        if (d != half) rest -= (d % 2 ? -1 : 1) * out.b[d];
    out.b[half] = half % 2 ? -rest : rest;
    return out;
}

bool boundary_squares_to_zero(const ChainComplex& cc) {
    for (int d = 2; d <= cc.dim(); ++d) {
        const auto& hi = cc.boundary[d];
        const auto& lo = cc.boundary[d - 1];
        for (int c = 0; c < hi.cols; ++c) {
            std::map<int, std::int64_t> acc;
            for (auto [y, a] : hi.columns[c])
                for (auto [z, b] : lo.columns[y]) acc[z] += a * b;
            for (auto [z, v] : acc)
                if (v != 0) return false;
        }
    }
    return true;
}

void write_chain_complex(std::ostream& out, const ChainComplex& cc) {
    out << "complex " << cc.dim() << "\n";
    if (cc.closed_orientable_manifold) out << "orientable-closed-manifold\n";
    for (int d = 0; d <= cc.dim(); ++d) out << "cells " << d << " " << cc.cells[d] << "\n";
    for (int d = 1; d <= cc.dim(); ++d) {
        const auto& m = cc.boundary[d];
        for (int c = 0; c < m.cols; ++c)
            for (auto [r, v] : m.columns[c]) out << d << " " << r << " " << c << " " << v << "\n";
    }
}

ChainComplex read_chain_complex(std::istream& in) {
    ChainComplex cc;
    std::vector<std::vector<std::tuple<int, int, std::int64_t>>> entries;
    std::string line;
    int lineno = 0;
    int dim = -1;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (head == "complex") {
            if (!(ls >> dim) || dim < 0) throw FormatError("bad complex dimension", lineno);
            cc.cells.assign(dim + 1, -1);
            entries.assign(dim + 1, {});
        } else if (head == "cell" || head == "group") {
        } else if (head == "orientable-closed-manifold") {
            cc.closed_orientable_manifold = true;
        } else if (head == "cells") {
            int d;
            long long count;
            if (dim < 0 || !(ls >> d >> count) || d < 0 || d > dim || count < 0)
                throw FormatError("bad cells line", lineno);
            cc.cells[d] = count;
        } else {
            std::istringstream es(line);
            int d, r, c;
            std::int64_t v;
            std::string extra;
            if (dim < 0 || !(es >> d >> r >> c >> v) || (es >> extra) || d < 1 || d > dim)
                throw FormatError("expected 'd row col value'", lineno);
            entries[d].emplace_back(r, c, v);
        }
    }
    if (dim < 0) throw FormatError("missing 'complex' header");
    for (int d = 0; d <= dim; ++d)
        if (cc.cells[d] < 0) throw FormatError("missing cell count for dimension " + std::to_string(d));
    cc.boundary.resize(dim + 1);
    for (int d = 1; d <= dim; ++d) {
        try {
            cc.boundary[d] = SparseIntMatrix::from_triplets(static_cast<int>(cc.cells[d - 1]),
                                                            static_cast<int>(cc.cells[d]), entries[d]);
        } catch (const Error& e) {
            throw FormatError(std::string("dimension ") + std::to_string(d) + ": " + e.what());
        }
    }
    return cc;
}

}  // namespace corners
