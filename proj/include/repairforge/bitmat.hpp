#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "repairforge/common.hpp"

namespace repairforge {

// Column vector over GF(2). Bits are packed LSB-first into 64-bit words;
// addition is XOR, so every vector is its own additive inverse.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(size_t len) : len_(len), w_(words_for(len), 0) {}

    static BitVector from_bits(std::initializer_list<int> bits);
    static BitVector from_bits(const std::vector<int>& bits);

    size_t size() const { return len_; }
    bool empty() const { return len_ == 0; }

    bool get(size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
    void set(size_t i, bool v) {
        uint64_t m = uint64_t(1) << (i & 63);
        if (v) w_[i >> 6] |= m; else w_[i >> 6] &= ~m;
    }
    void flip(size_t i) { w_[i >> 6] ^= uint64_t(1) << (i & 63); }

    bool is_zero() const;
    size_t popcount() const;

    BitVector& operator^=(const BitVector& o);
    friend BitVector operator^(BitVector a, const BitVector& b) { a ^= b; return a; }
    bool operator==(const BitVector&) const = default;

    BitVector slice(size_t start, size_t count) const;
    void paste(size_t start, const BitVector& src);
    static BitVector concat(const std::vector<BitVector>& parts);

    const std::vector<uint64_t>& words() const { return w_; }
    std::string str() const;

private:
    static size_t words_for(size_t len) { return (len + 63) / 64; }
    size_t len_ = 0;
    std::vector<uint64_t> w_;
};

// Dense row-major GF(2) matrix. Each row is padded to a whole number of
// words so rows can be XORed word-wise during elimination.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(size_t rows, size_t cols)
        : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), w_(rows * wpr_, 0) {}

    static BitMatrix identity(size_t n);
    // Rows listed in `rows` become unit rows of an n x n selector; all other
    // rows are zero.
    static BitMatrix diag_selector(const std::vector<uint32_t>& rows, size_t n);
    static BitMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    bool get(size_t r, size_t c) const { return (w_[r * wpr_ + (c >> 6)] >> (c & 63)) & 1u; }
    void set(size_t r, size_t c, bool v) {
        uint64_t m = uint64_t(1) << (c & 63);
        if (v) w_[r * wpr_ + (c >> 6)] |= m; else w_[r * wpr_ + (c >> 6)] &= ~m;
    }

    bool is_zero() const;
    bool operator==(const BitMatrix&) const = default;

    BitMatrix& operator^=(const BitMatrix& o);
    friend BitMatrix operator^(BitMatrix a, const BitMatrix& b) { a ^= b; return a; }

    BitVector operator*(const BitVector& x) const;
    BitMatrix operator*(const BitMatrix& o) const;

    BitMatrix transpose() const;
    BitMatrix block(size_t r0, size_t c0, size_t nr, size_t nc) const;
    void paste(size_t r0, size_t c0, const BitMatrix& src);
    BitVector row(size_t r) const;
    void set_row(size_t r, const BitVector& v);

    static BitMatrix vstack(const std::vector<BitMatrix>& parts);
    static BitMatrix block_diag(const BitMatrix& b, size_t copies);
    static BitMatrix block_diag(const std::vector<BitMatrix>& blocks);

    // Number of columns containing at least one 1 (symbols a mask touches).
    size_t nonzero_cols() const;

    std::string str() const;

    // Internal row access for elimination routines.
    uint64_t* row_words(size_t r) { return w_.data() + r * wpr_; }
    const uint64_t* row_words(size_t r) const { return w_.data() + r * wpr_; }
    size_t words_per_row() const { return wpr_; }

private:
    size_t rows_ = 0, cols_ = 0, wpr_ = 0;
    std::vector<uint64_t> w_;
};

size_t mat_rank(BitMatrix m);

// Any x with m*x = y (free variables zeroed), or nullopt when inconsistent.
std::optional<BitVector> solve_linear(const BitMatrix& m, const BitVector& y);

// X with a*X = b.
std::optional<BitMatrix> solve_right(const BitMatrix& a, const BitMatrix& b);

// X with X*d = g, i.e. every row of g lies in the row space of d.
std::optional<BitMatrix> solve_left(const BitMatrix& d, const BitMatrix& g);

std::optional<BitMatrix> invert(const BitMatrix& m);

struct BlockMismatch {
    size_t row = 0;
    size_t col = 0;
    bool operator==(const BlockMismatch&) const = default;
};

using PairedBlocksResult = std::variant<std::vector<BitMatrix>, BlockMismatch>;

// Tests whether s (of order delta*N, N even) is block diagonal with delta
// half-blocks of order N/2, each repeated twice consecutively. Returns the
// half-blocks, or the first entry (row-major) breaking the shape.
PairedBlocksResult detect_paired_blocks(const BitMatrix& s, size_t N, size_t delta);

// Reassembles the matrix detect_paired_blocks decomposed.
BitMatrix paired_blocks_to_matrix(const std::vector<BitMatrix>& blocks);

}  // namespace repairforge
