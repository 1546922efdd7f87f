#include "repairforge/bitmat.hpp"

#include <bit>
#include <sstream>

namespace repairforge {

BitVector BitVector::from_bits(std::initializer_list<int> bits) {
    BitVector v(bits.size());
    size_t i = 0;
    for (int b : bits) v.set(i++, b != 0);
    return v;
}

BitVector BitVector::from_bits(const std::vector<int>& bits) {
    BitVector v(bits.size());
    for (size_t i = 0; i < bits.size(); ++i) v.set(i, bits[i] != 0);
    return v;
}

bool BitVector::is_zero() const {
    for (uint64_t x : w_)
        if (x) return false;
    return true;
}

size_t BitVector::popcount() const {
    size_t c = 0;
    for (uint64_t x : w_) c += std::popcount(x);
    return c;
}

BitVector& BitVector::operator^=(const BitVector& o) {
    require(len_ == o.len_, errc::shape, "BitVector xor: length mismatch");
    for (size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
    return *this;
}

BitVector BitVector::slice(size_t start, size_t count) const {
    require(start + count <= len_, errc::shape, "BitVector slice out of range");
    BitVector out(count);
    for (size_t i = 0; i < count; ++i) out.set(i, get(start + i));
    return out;
}

void BitVector::paste(size_t start, const BitVector& src) {
    require(start + src.len_ <= len_, errc::shape, "BitVector paste out of range");
    for (size_t i = 0; i < src.len_; ++i) set(start + i, src.get(i));
}

BitVector BitVector::concat(const std::vector<BitVector>& parts) {
    size_t total = 0;
    for (const auto& p : parts) total += p.size();
    BitVector out(total);
    size_t at = 0;
    for (const auto& p : parts) {
        out.paste(at, p);
        at += p.size();
    }
    return out;
}

std::string BitVector::str() const {
    std::string s(len_, '0');
    for (size_t i = 0; i < len_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

BitMatrix BitMatrix::identity(size_t n) {
    BitMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

BitMatrix BitMatrix::diag_selector(const std::vector<uint32_t>& rows, size_t n) {
    BitMatrix m(n, n);
    for (uint32_t r : rows) {
        require(r < n, errc::value, "selector row out of range");
        m.set(r, r, true);
    }
    return m;
}

BitMatrix BitMatrix::from_rows(std::initializer_list<std::initializer_list<int>> rows) {
    size_t nr = rows.size();
    size_t nc = nr ? rows.begin()->size() : 0;
    BitMatrix m(nr, nc);
    size_t r = 0;
    for (const auto& row : rows) {
        require(row.size() == nc, errc::shape, "ragged rows");
        size_t c = 0;
        for (int bit : row) m.set(r, c++, bit != 0);
        ++r;
    }
    return m;
}

bool BitMatrix::is_zero() const {
    for (uint64_t x : w_)
        if (x) return false;
    return true;
}

BitMatrix& BitMatrix::operator^=(const BitMatrix& o) {
    require(rows_ == o.rows_ && cols_ == o.cols_, errc::shape, "BitMatrix xor: shape mismatch");
    for (size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
    return *this;
}

BitVector BitMatrix::operator*(const BitVector& x) const {
    require(cols_ == x.size(), errc::shape, "BitMatrix*vector: dimension mismatch");
    BitVector y(rows_);
    const auto& xw = x.words();
    for (size_t r = 0; r < rows_; ++r) {
        const uint64_t* rw = row_words(r);
        uint64_t acc = 0;
        for (size_t i = 0; i < wpr_; ++i) acc ^= rw[i] & xw[i];
        y.set(r, std::popcount(acc) & 1);
    }
    return y;
}

BitMatrix BitMatrix::operator*(const BitMatrix& o) const {
    require(cols_ == o.rows_, errc::shape, "BitMatrix*BitMatrix: dimension mismatch");
    BitMatrix out(rows_, o.cols_);
    for (size_t r = 0; r < rows_; ++r) {
        uint64_t* orow = out.row_words(r);
        const uint64_t* rw = row_words(r);
        for (size_t c = 0; c < cols_; ++c) {
            if ((rw[c >> 6] >> (c & 63)) & 1u) {
                const uint64_t* brow = o.row_words(c);
                for (size_t i = 0; i < out.wpr_; ++i) orow[i] ^= brow[i];
            }
        }
    }
    return out;
}

BitMatrix BitMatrix::transpose() const {
    BitMatrix t(cols_, rows_);
    for (size_t r = 0; r < rows_; ++r)
        for (size_t c = 0; c < cols_; ++c)
            if (get(r, c)) t.set(c, r, true);
    return t;
}

BitMatrix BitMatrix::block(size_t r0, size_t c0, size_t nr, size_t nc) const {
    require(r0 + nr <= rows_ && c0 + nc <= cols_, errc::shape, "block out of range");
    BitMatrix b(nr, nc);
    for (size_t r = 0; r < nr; ++r)
        for (size_t c = 0; c < nc; ++c)
            if (get(r0 + r, c0 + c)) b.set(r, c, true);
    return b;
}

void BitMatrix::paste(size_t r0, size_t c0, const BitMatrix& src) {
    require(r0 + src.rows_ <= rows_ && c0 + src.cols_ <= cols_, errc::shape, "paste out of range");
    for (size_t r = 0; r < src.rows_; ++r)
        for (size_t c = 0; c < src.cols_; ++c)
            set(r0 + r, c0 + c, src.get(r, c));
}

BitVector BitMatrix::row(size_t r) const {
    BitVector v(cols_);
    for (size_t c = 0; c < cols_; ++c) v.set(c, get(r, c));
    return v;
}

void BitMatrix::set_row(size_t r, const BitVector& v) {
    require(v.size() == cols_, errc::shape, "set_row: width mismatch");
    for (size_t c = 0; c < cols_; ++c) set(r, c, v.get(c));
}

BitMatrix BitMatrix::vstack(const std::vector<BitMatrix>& parts) {
    require(!parts.empty(), errc::value, "vstack of nothing");
    size_t nc = parts.front().cols();
    size_t nr = 0;
    for (const auto& p : parts) {
        require(p.cols() == nc, errc::shape, "vstack: column mismatch");
        nr += p.rows();
    }
    BitMatrix out(nr, nc);
    size_t at = 0;
    for (const auto& p : parts) {
        out.paste(at, 0, p);
        at += p.rows();
    }
    return out;
}

BitMatrix BitMatrix::block_diag(const BitMatrix& b, size_t copies) {
    BitMatrix out(b.rows() * copies, b.cols() * copies);
    for (size_t i = 0; i < copies; ++i) out.paste(i * b.rows(), i * b.cols(), b);
    return out;
}

BitMatrix BitMatrix::block_diag(const std::vector<BitMatrix>& blocks) {
    size_t nr = 0, nc = 0;
    for (const auto& b : blocks) { nr += b.rows(); nc += b.cols(); }
    BitMatrix out(nr, nc);
    size_t r = 0, c = 0;
    for (const auto& b : blocks) {
        out.paste(r, c, b);
        r += b.rows();
        c += b.cols();
    }
    return out;
}

size_t BitMatrix::nonzero_cols() const {
    size_t count = 0;
    for (size_t c = 0; c < cols_; ++c) {
        for (size_t r = 0; r < rows_; ++r) {
            if (get(r, c)) { ++count; break; }
        }
    }
    return count;
}

std::string BitMatrix::str() const {
    std::ostringstream os;
    for (size_t r = 0; r < rows_; ++r) {
        for (size_t c = 0; c < cols_; ++c) os << (get(r, c) ? '1' : '0');
        os << '\n';
    }
    return os.str();
}

namespace {

// Gauss-Jordan on [a | b]; returns the pivot column of each pivot row in
// order. Both matrices are modified in place.
std::vector<size_t> eliminate(BitMatrix& a, BitMatrix* b) {
    std::vector<size_t> pivot_cols;
    size_t pr = 0;  // next pivot row
    for (size_t c = 0; c < a.cols() && pr < a.rows(); ++c) {
        size_t sel = a.rows();
        for (size_t r = pr; r < a.rows(); ++r) {
            if (a.get(r, c)) { sel = r; break; }
        }
        if (sel == a.rows()) continue;
        if (sel != pr) {
            for (size_t i = 0; i < a.words_per_row(); ++i)
                std::swap(a.row_words(sel)[i], a.row_words(pr)[i]);
            if (b)
                for (size_t i = 0; i < b->words_per_row(); ++i)
                    std::swap(b->row_words(sel)[i], b->row_words(pr)[i]);
        }
        for (size_t r = 0; r < a.rows(); ++r) {
            if (r != pr && a.get(r, c)) {
                for (size_t i = 0; i < a.words_per_row(); ++i)
                    a.row_words(r)[i] ^= a.row_words(pr)[i];
                if (b)
                    for (size_t i = 0; i < b->words_per_row(); ++i)
                        b->row_words(r)[i] ^= b->row_words(pr)[i];
            }
        }
        pivot_cols.push_back(c);
        ++pr;
    }
    return pivot_cols;
}

bool row_is_zero(const BitMatrix& m, size_t r) {
    const uint64_t* rw = m.row_words(r);
    for (size_t i = 0; i < m.words_per_row(); ++i)
        if (rw[i]) return false;
    return true;
}

}  // namespace

size_t mat_rank(BitMatrix m) { return eliminate(m, nullptr).size(); }

std::optional<BitMatrix> solve_right(const BitMatrix& a, const BitMatrix& b) {
    require(a.rows() == b.rows(), errc::shape, "solve_right: row mismatch");
    BitMatrix u = a, v = b;
    std::vector<size_t> pivots = eliminate(u, &v);
    // Rows reduced to zero in u must be zero in v, else inconsistent.
    for (size_t r = pivots.size(); r < u.rows(); ++r)
        if (row_is_zero(u, r) && !row_is_zero(v, r)) return std::nullopt;
    BitMatrix x(a.cols(), b.cols());
    for (size_t p = 0; p < pivots.size(); ++p)
        for (size_t c = 0; c < b.cols(); ++c)
            if (v.get(p, c)) x.set(pivots[p], c, true);
    return x;
}

std::optional<BitVector> solve_linear(const BitMatrix& m, const BitVector& y) {
    require(m.rows() == y.size(), errc::shape, "solve_linear: dimension mismatch");
    BitMatrix rhs(y.size(), 1);
    for (size_t i = 0; i < y.size(); ++i) rhs.set(i, 0, y.get(i));
    auto x = solve_right(m, rhs);
    if (!x) return std::nullopt;
    BitVector out(m.cols());
    for (size_t i = 0; i < m.cols(); ++i) out.set(i, x->get(i, 0));
    return out;
}

std::optional<BitMatrix> solve_left(const BitMatrix& d, const BitMatrix& g) {
    require(d.cols() == g.cols(), errc::shape, "solve_left: column mismatch");
    auto xt = solve_right(d.transpose(), g.transpose());
    if (!xt) return std::nullopt;
    return xt->transpose();
}

std::optional<BitMatrix> invert(const BitMatrix& m) {
    require(m.rows() == m.cols(), errc::shape, "invert: matrix not square");
    return solve_right(m, BitMatrix::identity(m.rows()));
}

PairedBlocksResult detect_paired_blocks(const BitMatrix& s, size_t N, size_t delta) {
    require(N >= 2 && N % 2 == 0, errc::shape, "detect_paired_blocks: N must be even and positive");
    require(delta >= 1, errc::shape, "detect_paired_blocks: delta must be positive");
    size_t half = N / 2;
    size_t order = delta * N;
    require(s.rows() == order && s.cols() == order, errc::shape,
            "detect_paired_blocks: matrix must be delta*N square");
    // Row-major scan so the reported mismatch is the first violating entry.
    for (size_t r = 0; r < order; ++r) {
        size_t br = r / half;
        for (size_t c = 0; c < order; ++c) {
            size_t bc = c / half;
            if (br != bc) {
                if (s.get(r, c)) return BlockMismatch{r, c};
            } else if (br % 2 == 1) {
                // Odd diagonal block must repeat its even twin.
                if (s.get(r, c) != s.get(r - half, c - half)) return BlockMismatch{r, c};
            }
        }
    }
    std::vector<BitMatrix> blocks;
    blocks.reserve(delta);
    for (size_t m = 0; m < delta; ++m)
        blocks.push_back(s.block(2 * m * half, 2 * m * half, half, half));
    return blocks;
}

BitMatrix paired_blocks_to_matrix(const std::vector<BitMatrix>& blocks) {
    std::vector<BitMatrix> expanded;
    expanded.reserve(blocks.size() * 2);
    for (const auto& b : blocks) {
        require(b.rows() == b.cols(), errc::shape, "paired block must be square");
        expanded.push_back(b);
        expanded.push_back(b);
    }
    return BitMatrix::block_diag(expanded);
}

}  // namespace repairforge
