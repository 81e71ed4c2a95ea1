#pragma once

// Exact fixed-point dyadic rationals: a value is numerator / 2^precision.
//
// Two instantiations are used throughout the library:
//   Value      - 64-bit numerator, used for valuations, prices and welfare.
//   WideDyadic - arbitrary-precision numerator, used where a formula has to be
//                evaluated at 64+ fractional bits.
// Arithmetic never rounds implicitly. Operands of different precision are
// aligned to the finer one; the bounded instantiation throws on overflow.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>

#include "calab/errors.hpp"

namespace calab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Precision used for constants and integer lifts when the caller does not
/// pick one.
inline constexpr unsigned kDefaultPrecision = 20;

enum class Rounding { kDown, kUp, kNearest };

namespace detail {

template <class Int>
inline constexpr bool kBounded = std::is_same_v<Int, std::int64_t>;

template <class Int>
Int checked_shl(const Int& x, unsigned s) {
    if constexpr (kBounded<Int>) {
        if (x == 0) return 0;
        if (s >= 63) throw std::overflow_error("dyadic: shift overflow");
        const __int128 wide = static_cast<__int128>(x) << s;
        if (wide > std::numeric_limits<std::int64_t>::max() ||
            wide < std::numeric_limits<std::int64_t>::min())
            throw std::overflow_error("dyadic: shift overflow");
        return static_cast<Int>(wide);
    } else {
        return x << s;
    }
}

template <class Int>
Int checked_add(const Int& a, const Int& b) {
    if constexpr (kBounded<Int>) {
        Int r;
        if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("dyadic: add overflow");
        return r;
    } else {
        return a + b;
    }
}

template <class Int>
Int checked_sub(const Int& a, const Int& b) {
    if constexpr (kBounded<Int>) {
        Int r;
        if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("dyadic: sub overflow");
        return r;
    } else {
        return a - b;
    }
}

template <class Int>
Int checked_mul(const Int& a, const Int& b) {
    if constexpr (kBounded<Int>) {
        Int r;
        if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("dyadic: mul overflow");
        return r;
    } else {
        return a * b;
    }
}

// Floor division by 2^s (arithmetic shift semantics for negative values).
template <class Int>
Int floor_shr(const Int& x, unsigned s) {
    if constexpr (kBounded<Int>) {
        if (s >= 63) return x < 0 ? -1 : 0;
        return x >> s;
    } else {
        if (x >= 0) return x >> s;
        const Int mag = -x;
        Int q = mag >> s;
        if ((q << s) != mag) q += 1;
        return -q;
    }
}

inline BigInt to_big(std::int64_t x) { return BigInt(x); }
inline const BigInt& to_big(const BigInt& x) { return x; }

}  // namespace detail

template <class Int>
class BasicDyadic {
public:
    using int_type = Int;

    constexpr BasicDyadic() = default;

    static BasicDyadic from_raw(Int numerator, unsigned precision) {
        BasicDyadic d;
        d.num_ = std::move(numerator);
        d.prec_ = precision;
        return d;
    }

    /// n lifted to the given precision (numerator n * 2^precision).
    static BasicDyadic from_integer(const Int& n, unsigned precision = kDefaultPrecision) {
        return from_raw(detail::checked_shl(n, precision), precision);
    }

    /// Nearest dyadic at `precision` to the rational q, rounded as requested.
    static BasicDyadic from_rational(const Rational& q, unsigned precision, Rounding mode) {
        const BigInt scaled_num = boost::multiprecision::numerator(q) << precision;
        const BigInt den = boost::multiprecision::denominator(q);
        BigInt fl = scaled_num / den;
        BigInt rem = scaled_num - fl * den;
        if (rem < 0) {
            fl -= 1;
            rem += den;
        }
        BigInt out = fl;
        if (rem != 0) {
            if (mode == Rounding::kUp) out = fl + 1;
            if (mode == Rounding::kNearest && 2 * rem >= den) out = fl + 1;
        }
        return from_raw(narrow(out), precision);
    }

    const Int& numerator() const { return num_; }
    unsigned precision() const { return prec_; }

    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }

    /// The same number at a finer (or equal) precision; exact.
    BasicDyadic at_precision(unsigned p) const {
        if (p >= prec_) return from_raw(detail::checked_shl(num_, p - prec_), p);
        const unsigned s = prec_ - p;
        const Int q = detail::floor_shr(num_, s);
        if (detail::checked_shl(q, s) != num_)
            throw UsageError("dyadic: " + to_string() + " is not representable at precision " +
                             std::to_string(p));
        return from_raw(q, p);
    }

    /// Largest multiple of 2^-p that is <= *this.
    BasicDyadic floor_to(unsigned p) const {
        if (p >= prec_) return at_precision(p);
        return from_raw(detail::floor_shr(num_, prec_ - p), p);
    }

    BasicDyadic round_to(unsigned p, Rounding mode) const {
        if (p >= prec_) return at_precision(p);
        const BasicDyadic fl = floor_to(p);
        if (fl.at_precision(prec_).num_ == num_) return fl;
        const Int up = detail::checked_add(fl.num_, Int(1));
        switch (mode) {
            case Rounding::kDown:
                return fl;
            case Rounding::kUp:
                return from_raw(up, p);
            case Rounding::kNearest: {
                // compare the discarded remainder with one half ulp
                const BasicDyadic half = from_raw(Int(1), p + 1);
                return (*this - fl) >= half ? from_raw(up, p) : fl;
            }
        }
        return fl;
    }

    BasicDyadic operator-() const { return from_raw(detail::checked_sub(Int(0), num_), prec_); }

    friend BasicDyadic operator+(const BasicDyadic& a, const BasicDyadic& b) {
        const unsigned p = a.prec_ > b.prec_ ? a.prec_ : b.prec_;
        return from_raw(detail::checked_add(a.aligned(p), b.aligned(p)), p);
    }
    friend BasicDyadic operator-(const BasicDyadic& a, const BasicDyadic& b) {
        const unsigned p = a.prec_ > b.prec_ ? a.prec_ : b.prec_;
        return from_raw(detail::checked_sub(a.aligned(p), b.aligned(p)), p);
    }
    /// Exact product; precision is the sum of the operand precisions.
    friend BasicDyadic operator*(const BasicDyadic& a, const BasicDyadic& b) {
        return from_raw(detail::checked_mul(a.num_, b.num_), a.prec_ + b.prec_);
    }
    BasicDyadic times(const Int& n) const { return from_raw(detail::checked_mul(num_, n), prec_); }

    BasicDyadic& operator+=(const BasicDyadic& o) { return *this = *this + o; }
    BasicDyadic& operator-=(const BasicDyadic& o) { return *this = *this - o; }

    friend bool operator==(const BasicDyadic& a, const BasicDyadic& b) {
        return compare(a, b) == std::strong_ordering::equal;
    }
    friend std::strong_ordering operator<=>(const BasicDyadic& a, const BasicDyadic& b) {
        return compare(a, b);
    }

    Rational to_rational() const {
        return Rational(detail::to_big(num_)) / Rational(BigInt(1) << prec_);
    }
    double to_double() const { return static_cast<double>(to_rational()); }

    /// "numerator/2^precision"
    std::string to_string() const {
        std::string s;
        if constexpr (detail::kBounded<Int>) {
            s = std::to_string(num_);
        } else {
            s = num_.str();
        }
        return s + "/2^" + std::to_string(prec_);
    }

    /// Accepts "n/2^k" or a plain integer "n" (precision 0).
    static BasicDyadic parse(std::string_view text) {
        const auto slash = text.find('/');
        auto parse_int = [&](std::string_view part) -> Int {
            if (part.empty()) throw UsageError("dyadic: malformed value '" + std::string(text) + "'");
            std::size_t start = (part[0] == '-' || part[0] == '+') ? 1 : 0;
            if (start == part.size()) throw UsageError("dyadic: malformed value '" + std::string(text) + "'");
            for (std::size_t i = start; i < part.size(); ++i)
                if (part[i] < '0' || part[i] > '9')
                    throw UsageError("dyadic: malformed value '" + std::string(text) + "'");
            const BigInt big{std::string(part)};
            return narrow(big);
        };
        if (slash == std::string_view::npos) return from_raw(parse_int(text), 0);
        const std::string_view den = text.substr(slash + 1);
        if (den.size() < 3 || den[0] != '2' || den[1] != '^')
            throw UsageError("dyadic: denominator must be 2^k in '" + std::string(text) + "'");
        const std::string_view exp = den.substr(2);
        unsigned k = 0;
        for (char c : exp) {
            if (c < '0' || c > '9') throw UsageError("dyadic: bad exponent in '" + std::string(text) + "'");
            k = k * 10 + static_cast<unsigned>(c - '0');
            if (k > 4096) throw UsageError("dyadic: exponent too large in '" + std::string(text) + "'");
        }
        return from_raw(parse_int(text.substr(0, slash)), k);
    }

    friend std::ostream& operator<<(std::ostream& os, const BasicDyadic& d) { return os << d.to_string(); }

private:
    static Int narrow(const BigInt& x) {
        if constexpr (detail::kBounded<Int>) {
            if (x > std::numeric_limits<std::int64_t>::max() || x < std::numeric_limits<std::int64_t>::min())
                throw std::overflow_error("dyadic: value does not fit 64-bit numerator");
            return static_cast<std::int64_t>(x);
        } else {
            return x;
        }
    }

    Int aligned(unsigned p) const { return detail::checked_shl(num_, p - prec_); }

    static std::strong_ordering compare(const BasicDyadic& a, const BasicDyadic& b) {
        if constexpr (detail::kBounded<Int>) {
            if (a.prec_ == b.prec_) return a.num_ <=> b.num_;
            const unsigned diff = a.prec_ > b.prec_ ? a.prec_ - b.prec_ : b.prec_ - a.prec_;
            if (diff <= 62) {
                __int128 x = a.num_, y = b.num_;
                if (a.prec_ < b.prec_) x <<= diff; else y <<= diff;
                return x <=> y;
            }
        }
        if constexpr (!detail::kBounded<Int>) {
            if (a.prec_ == b.prec_) return a.num_.compare(b.num_) <=> 0;
        }
        const unsigned p = a.prec_ > b.prec_ ? a.prec_ : b.prec_;
        const BigInt x = detail::to_big(a.num_) << (p - a.prec_);
        const BigInt y = detail::to_big(b.num_) << (p - b.prec_);
        return x.compare(y) <=> 0;
    }

    Int num_{0};
    unsigned prec_{0};
};

using Value = BasicDyadic<std::int64_t>;
using WideDyadic = BasicDyadic<BigInt>;

inline WideDyadic widen(const Value& v) { return WideDyadic::from_raw(BigInt(v.numerator()), v.precision()); }

/// Integer n as a Value at the default precision.
inline Value integer_value(std::int64_t n, unsigned precision = kDefaultPrecision) {
    return Value::from_integer(n, precision);
}

inline Value max(const Value& a, const Value& b) { return a < b ? b : a; }
inline Value min(const Value& a, const Value& b) { return b < a ? b : a; }

// ---------------------------------------------------------------------------
// Irrational constants. Each is available as an enclosing interval [lo, hi]
// with hi - lo = 2^-precision, and as a round-to-nearest point value.

struct DyadicInterval {
    WideDyadic lo;
    WideDyadic hi;
};

namespace detail {

inline BigInt isqrt(const BigInt& x) { return boost::multiprecision::sqrt(x); }

// floor(c * 2^p) for the supported constants.
inline BigInt floor_sqrt3_minus_1(unsigned p) {
    return isqrt(BigInt(3) << (2 * p)) - (BigInt(1) << p);
}
inline BigInt floor_golden_conjugate(unsigned p) {
    // (sqrt5 - 1)/2 * 2^p = sqrt(5 * 4^(p-1)) - 2^(p-1), p >= 1
    return isqrt(BigInt(5) << (2 * (p - 1))) - (BigInt(1) << (p - 1));
}

template <class FloorFn>
DyadicInterval enclose(FloorFn fn, unsigned p) {
    const BigInt fl = fn(p);
    return {WideDyadic::from_raw(fl, p), WideDyadic::from_raw(fl + 1, p)};
}

template <class FloorFn>
WideDyadic nearest(FloorFn fn, unsigned p) {
    return WideDyadic::from_raw((fn(p + 1) + 1) >> 1, p);
}

inline Value narrow_value(const WideDyadic& w) {
    if (w.numerator() > std::numeric_limits<std::int64_t>::max() ||
        w.numerator() < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("dyadic: constant does not fit 64-bit numerator");
    return Value::from_raw(static_cast<std::int64_t>(w.numerator()), w.precision());
}

}  // namespace detail

/// sqrt(3) - 1
inline DyadicInterval enclose_sqrt3_minus_1(unsigned precision) {
    return detail::enclose(detail::floor_sqrt3_minus_1, precision);
}
inline WideDyadic sqrt3_minus_1_wide(unsigned precision) {
    return detail::nearest(detail::floor_sqrt3_minus_1, precision);
}
inline Value sqrt3_minus_1(unsigned precision = kDefaultPrecision) {
    return detail::narrow_value(sqrt3_minus_1_wide(precision));
}

/// (sqrt(5) - 1) / 2
inline DyadicInterval enclose_golden_conjugate(unsigned precision) {
    return detail::enclose(detail::floor_golden_conjugate, precision);
}
inline WideDyadic golden_conjugate_wide(unsigned precision) {
    return detail::nearest(detail::floor_golden_conjugate, precision);
}
inline Value golden_conjugate(unsigned precision = kDefaultPrecision) {
    return detail::narrow_value(golden_conjugate_wide(precision));
}

/// round_p(c * l) for c = sqrt(3) - 1, computed from an interval fine enough
/// that the rounding is decided correctly.
inline Value sqrt3_minus_1_times(std::int64_t l, unsigned precision = kDefaultPrecision) {
    // l * floor(c * 2^q) <= l*c*2^q < l*(floor+1); with q = precision + 70 the
    // enclosure width l * 2^-q is far below the rounding granularity
    const unsigned q = precision + 70;
    const BigInt fl = detail::floor_sqrt3_minus_1(q + 1) * BigInt(l);
    const WideDyadic approx = WideDyadic::from_raw(fl, q + 1);
    return detail::narrow_value(approx.round_to(precision, Rounding::kNearest));
}

}  // namespace calab
