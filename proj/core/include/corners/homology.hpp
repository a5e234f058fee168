#pragma once

#include <cstdint>
#include <iosfwd>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

namespace corners {

/// Integer matrix in compressed sparse column form.
struct SparseIntMatrix {
    int rows = 0;
    int cols = 0;
    /// columns[c] = (row, value) pairs, rows ascending, values nonzero.
    std::vector<std::vector<std::pair<int, std::int64_t>>> columns;

    SparseIntMatrix() = default;
    SparseIntMatrix(int r, int c) : rows(r), cols(c), columns(c) {}
    /// Sums duplicate coordinates and drops zeros.
    static SparseIntMatrix from_triplets(int rows, int cols,
                                         const std::vector<std::tuple<int, int, std::int64_t>>& entries);
    static SparseIntMatrix from_dense(const std::vector<std::vector<std::int64_t>>& dense);
    std::vector<std::vector<std::int64_t>> to_dense() const;
    SparseIntMatrix transpose() const;
    std::size_t nnz() const;
};

struct RankOptions {
    /// Active-submatrix density at which elimination switches to dense storage.
    double dense_fill = 0.2;
    int threads = 1;
};

long long rank_gf2(const SparseIntMatrix& m, const RankOptions& opt = {});
long long rank_mod_p(const SparseIntMatrix& m, std::uint32_t p, const RankOptions& opt = {});
/// Exact rank over Q by fraction-free sparse elimination with big integers.
long long rank_exact(const SparseIntMatrix& m);

struct RationalRank {
    long long rank = 0;
    std::uint32_t p1 = 0;
    std::uint32_t p2 = 0;
    long long rank_p1 = 0;
    long long rank_p2 = 0;
    bool escalated = false;
};

/// Rank over Q: ranks modulo two random primes in (2^20, 2^30); exact fallback if they differ.
RationalRank rank_rational_report(const SparseIntMatrix& m, std::uint64_t seed = 0x5eed, const RankOptions& opt = {});
long long rank_rational(const SparseIntMatrix& m, std::uint64_t seed = 0x5eed, const RankOptions& opt = {});

bool is_prime(std::uint64_t n);
std::uint32_t random_prime(std::uint64_t& state, std::uint32_t lo, std::uint32_t hi);

/// Invariant factors d_1 | d_2 | ... (nonzero ones only). Throws Error above the cap
/// or when a factor does not fit in 64 bits.
std::vector<std::int64_t> smith_normal_form(const SparseIntMatrix& m, int cap = 2000);

enum class Field { gf2, rational };
std::string field_name(Field f);

/// Cellular chain complex: boundary[d] maps d-cells to (d-1)-cells, d = 1..dim.
struct ChainComplex {
    std::vector<long long> cells;  // per dimension 0..dim
    std::vector<SparseIntMatrix> boundary;  // index 0 unused
    /// Set by the quotient builder when the complex is a closed orientable manifold.
    bool closed_orientable_manifold = false;

    int dim() const { return static_cast<int>(cells.size()) - 1; }
    long long euler_characteristic() const;
};

struct BettiVector {
    Field field = Field::gf2;
    std::vector<long long> b;
    std::vector<long long> ranks;  // rank of boundary[d], index 0 unused
    bool fast_path = false;
};

/// Slow path: b_d = c_d - rank d_d - rank d_{d+1}. Fast path (rational only, closed
/// orientable even-dimensional manifolds): lower half by ranks, the rest by duality and chi.
BettiVector betti(const ChainComplex& cc, Field field, bool fast = false, const RankOptions& opt = {});

/// Verifies that consecutive boundary maps compose to zero over Z.
bool boundary_squares_to_zero(const ChainComplex& cc);

/// Coordinate dump: "complex <dim>", "cells <d> <count>", then "<d> <row> <col> <value>".
void write_chain_complex(std::ostream& out, const ChainComplex& cc);
ChainComplex read_chain_complex(std::istream& in);

}  // namespace corners
