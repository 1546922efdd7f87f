#include "repairforge/pairing.hpp"

namespace repairforge {

namespace {

void check_segment_shape(const BitVector& v, size_t N, const char* who) {
    require(N >= 2, errc::shape, std::string(who) + ": segment length must be at least 2");
    require(N % 2 == 0, errc::shape, std::string(who) + ": segment length must be even");
    require(v.size() % N == 0, errc::shape,
            std::string(who) + ": vector length is not a multiple of the segment length");
}

}  // namespace

SegmentedVector::SegmentedVector(BitVector v, size_t segment_len) {
    check_segment_shape(v, segment_len, "SegmentedVector");
    N = segment_len;
    t = v.size() / segment_len;
    vec = std::move(v);
}

BitVector half_mix(const BitVector& v, size_t N) {
    check_segment_shape(v, N, "half_mix");
    size_t half = N / 2;
    BitVector out(v.size());
    for (size_t s = 0; s * N < v.size(); ++s) {
        size_t base = s * N;
        for (size_t i = 0; i < half; ++i) {
            out.set(base + i, v.get(base + i) ^ v.get(base + half + i));
            out.set(base + half + i, v.get(base + i));
        }
    }
    return out;
}

BitVector half_unmix(const BitVector& v, size_t N) { return half_mix(half_mix(v, N), N); }

BitMatrix half_mix_matrix(size_t len, size_t N) {
    require(N % 2 == 0 && N >= 2 && len % N == 0, errc::shape, "half_mix_matrix: bad shape");
    size_t half = N / 2;
    BitMatrix m(len, len);
    for (size_t base = 0; base < len; base += N) {
        for (size_t i = 0; i < half; ++i) {
            m.set(base + i, base + i, true);
            m.set(base + i, base + half + i, true);
            m.set(base + half + i, base + i, true);
        }
    }
    return m;
}

BitVector boxplus_segment(const BitVector& a, const BitVector& b) {
    require(a.size() == b.size(), errc::shape, "boxplus_segment: length mismatch");
    require(a.size() % 2 == 0 && a.size() >= 2, errc::shape, "boxplus_segment: length must be even");
    return a ^ half_mix(b, a.size());
}

BitVector boxplus(const BitVector& a, const BitVector& b, size_t N) {
    require(a.size() == b.size(), errc::shape, "boxplus: length mismatch");
    check_segment_shape(a, N, "boxplus");
    return a ^ half_mix(b, N);
}

SegmentedVector boxplus_N(const SegmentedVector& a, const SegmentedVector& b) {
    require(a.t == b.t && a.N == b.N, errc::shape, "boxplus_N: shape mismatch");
    return SegmentedVector(boxplus(a.vec, b.vec, a.N), a.N);
}

std::pair<BitVector, BitVector> unpair_sum_box(const BitVector& x, const BitVector& y, size_t N) {
    require(x.size() == y.size(), errc::shape, "unpair_sum_box: length mismatch");
    check_segment_shape(x, N, "unpair_sum_box");
    // x + y = (I + mix) b = unmix b, hence b = mix(x + y).
    BitVector b = half_mix(x ^ y, N);
    BitVector a = x ^ b;
    return {a, b};
}

std::pair<SegmentedVector, SegmentedVector> unpair_sum_box(const SegmentedVector& x,
                                                           const SegmentedVector& y) {
    require(x.t == y.t && x.N == y.N, errc::shape, "unpair_sum_box: shape mismatch");
    auto [a, b] = unpair_sum_box(x.vec, y.vec, x.N);
    return {SegmentedVector(a, x.N), SegmentedVector(b, x.N)};
}

BitVector cancel_partner(const BitVector& known_b, const BitVector& combo, ComboKind kind,
                         size_t N) {
    require(known_b.size() == combo.size(), errc::shape, "cancel_partner: length mismatch");
    check_segment_shape(combo, N, "cancel_partner");
    switch (kind) {
        case ComboKind::a_box_b:
            return combo ^ half_mix(known_b, N);
        case ComboKind::b_box_a:
            return half_unmix(combo ^ known_b, N);
        case ComboKind::a_plus_b:
            return combo ^ known_b;
    }
    fail(errc::value, "cancel_partner: unknown combination kind");
}

SegmentedVector cancel_partner(const SegmentedVector& known_b, const SegmentedVector& combo,
                               ComboKind kind) {
    require(known_b.t == combo.t && known_b.N == combo.N, errc::shape,
            "cancel_partner: shape mismatch");
    return SegmentedVector(cancel_partner(known_b.vec, combo.vec, kind, combo.N), combo.N);
}

std::pair<BitVector, BitVector> masked_unpair(const BitVector& sx, const BitVector& sy,
                                              const BitMatrix& s_half) {
    size_t L = s_half.rows();
    require(L >= 1, errc::shape, "masked_unpair: empty mask");
    require(sx.size() == sy.size(), errc::shape, "masked_unpair: length mismatch");
    require(sx.size() % (2 * L) == 0 && sx.size() >= 2 * L, errc::shape,
            "masked_unpair: inputs are not stacks of 2L-length segments");
    // The masked images pair exactly like the unmasked vectors, with the
    // half length N/2 replaced by L.
    return unpair_sum_box(sx, sy, 2 * L);
}

}  // namespace repairforge
