#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <mpfr.h>

namespace mls {

/// Closed interval of doubles with outward rounding.
///
/// Each arithmetic result is widened by one ulp in both directions, which
/// encloses the exact value for correctly rounded operations (+ - * / sqrt).
/// Results of std::pow are widened by kPowSlackUlps instead.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    static constexpr int kPowSlackUlps = 4;

    constexpr Interval() = default;
    constexpr Interval(double v) : lo(v), hi(v) {}  // NOLINT: exact point
    constexpr Interval(double l, double h) : lo(l), hi(h) {}

    double mid() const { return lo + (hi - lo) / 2.0; }
    double width() const { return hi - lo; }
    bool contains(double v) const { return lo <= v && v <= hi; }

    static double down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
    static double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

    friend Interval operator+(const Interval& a, const Interval& b) {
        if (b.lo == 0.0 && b.hi == 0.0) return a;
        if (a.lo == 0.0 && a.hi == 0.0) return b;
        return {down(a.lo + b.lo), up(a.hi + b.hi)};
    }
    friend Interval operator-(const Interval& a, const Interval& b) { return {down(a.lo - b.hi), up(a.hi - b.lo)}; }
    friend Interval operator*(const Interval& a, const Interval& b);
    /// Division by an interval that excludes zero.
    friend Interval operator/(const Interval& a, const Interval& b);
    Interval& operator+=(const Interval& b) { return *this = *this + b; }
};

/// Enclosure of sqrt over a nonnegative interval.
Interval sqrt(const Interval& x);

/// Enclosure of x^e for a strictly positive interval x.
Interval pow_pos(const Interval& x, double e);

/// Enclosure of d^(-alpha) where d^2 = d2_tenths / 100, i.e. the path-loss
/// factor for a squared distance given in tenths. d2_tenths must be positive.
Interval path_loss(std::int64_t d2_tenths, double alpha);

/// Path-loss factor enclosure when the squared distance itself is only known
/// to lie in [d2lo, d2hi] (tenths). Used for aggregated far-field bounds.
Interval path_loss_range(double d2lo_tenths, double d2hi_tenths, double alpha);

enum class Certainty { Yes, No, Unknown };

std::string to_string(Certainty c);

/// Certified test of a > b for enclosures a and b.
inline Certainty certainly_greater(const Interval& a, const Interval& b) {
    if (a.lo > b.hi) return Certainty::Yes;
    if (a.hi <= b.lo) return Certainty::No;
    return Certainty::Unknown;
}

// ---------------------------------------------------------------------------
// Arbitrary precision intervals (MPFR, directed rounding)
// ---------------------------------------------------------------------------

/// RAII wrapper for an MPFR number.
class Mpfr {
public:
    explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
    Mpfr(const Mpfr& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Mpfr& operator=(const Mpfr& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    ~Mpfr() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    double to_double(mpfr_rnd_t rnd) const { return mpfr_get_d(v_, rnd); }

private:
    mpfr_t v_;
};

/// Interval with MPFR endpoints at a fixed precision.
class BigInterval {
public:
    explicit BigInterval(mpfr_prec_t prec);
    BigInterval(mpfr_prec_t prec, double v);
    static BigInterval from_int(mpfr_prec_t prec, std::int64_t v);

    BigInterval operator+(const BigInterval& b) const;
    /// Product of two nonnegative intervals.
    BigInterval mul_nonneg(const BigInterval& b) const;
    /// Quotient of a nonnegative interval by a strictly positive one.
    BigInterval div_pos(const BigInterval& b) const;

    /// d^(-alpha) with d^2 = d2_tenths / 100.
    static BigInterval path_loss(mpfr_prec_t prec, std::int64_t d2_tenths, double alpha);

    Interval to_interval() const;
    Certainty greater_than(const BigInterval& b) const;

private:
    Mpfr lo_;
    Mpfr hi_;
};

}  // namespace mls
