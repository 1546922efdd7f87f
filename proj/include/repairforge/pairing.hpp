#pragma once

#include <utility>

#include "repairforge/bitmat.hpp"

namespace repairforge {

// A length-t*N vector viewed as t segments of even length N. Each segment
// splits into a low half [i,0] and a high half [i,1].
struct SegmentedVector {
    BitVector vec;
    size_t t = 0;
    size_t N = 0;

    SegmentedVector() = default;
    SegmentedVector(BitVector v, size_t segment_len);

    BitVector segment(size_t i) const { return vec.slice(i * N, N); }
    BitVector half(size_t i, size_t which) const { return vec.slice(i * N + which * (N / 2), N / 2); }

    bool operator==(const SegmentedVector&) const = default;
};

// The half-mixing map used by the pairing: per segment, (u0, u1) -> (u0+u1, u0).
// It has order 3, so its inverse is its square.
BitVector half_mix(const BitVector& v, size_t N);
BitVector half_unmix(const BitVector& v, size_t N);

// Matrix form of half_mix on vectors of length len (len a multiple of N).
BitMatrix half_mix_matrix(size_t len, size_t N);

// Pairing combination on one segment: output halves are
// (a0 + b0 + b1, a1 + b0); equivalently a + half_mix(b).
BitVector boxplus_segment(const BitVector& a, const BitVector& b);

// Segment-wise pairing combination on equal-shape vectors.
BitVector boxplus(const BitVector& a, const BitVector& b, size_t N);
SegmentedVector boxplus_N(const SegmentedVector& a, const SegmentedVector& b);

// Recovers (a, b) from x = a + b and y = boxplus(a, b). The pair map is a
// bijection, so the result is unique.
std::pair<BitVector, BitVector> unpair_sum_box(const BitVector& x, const BitVector& y, size_t N);
std::pair<SegmentedVector, SegmentedVector> unpair_sum_box(const SegmentedVector& x,
                                                           const SegmentedVector& y);

enum class ComboKind {
    a_box_b,   // combo = boxplus(a, b)
    b_box_a,   // combo = boxplus(b, a)
    a_plus_b,  // combo = a + b
};

// Recovers a from a known partner b and one combined value.
BitVector cancel_partner(const BitVector& known_b, const BitVector& combo, ComboKind kind,
                         size_t N);
SegmentedVector cancel_partner(const SegmentedVector& known_b, const SegmentedVector& combo,
                               ComboKind kind);

// Masked recovery: given sx = S(a+b) and sy = S(boxplus(a,b)) where
// S = diag(s_half, s_half) acts identically on both halves of a segment,
// returns (S*a, S*b). Works because such S commutes with half_mix.
std::pair<BitVector, BitVector> masked_unpair(const BitVector& sx, const BitVector& sy,
                                              const BitMatrix& s_half);

}  // namespace repairforge
