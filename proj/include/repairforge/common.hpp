#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace repairforge {

// Error classes, kept coarse on purpose: the CLI maps each value to a
// distinct exit code, and tests match on them.
enum class errc {
    shape,       // dimension / length / parity-of-length violations
    value,       // bad argument (not prime, field too small, bad targets, ...)
    parse,       // malformed file content
    io,          // filesystem failure
    singular,    // linear system has no solution where one was required
    strategy,    // repair strategy does not determine the lost payload
    r1_violation,
    r2_violation,
    not_target,
    mds,         // MDS invariant breach
    internal,
};

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, errc code, const std::string& msg) {
    if (!cond) fail(code, msg);
}

// Exact symbol counts that need not be integral (e.g. optimal repair
// bandwidth per helper).
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }

    bool operator==(const Rational&) const = default;

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

inline bool operator==(const Rational& a, long long b) { return a.den == 1 && a.num == b; }

}  // namespace repairforge
