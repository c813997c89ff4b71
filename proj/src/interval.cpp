#include "mls/interval.hpp"

#include <algorithm>
#include <stdexcept>

namespace mls {

namespace {

double widen_down(double x, int ulps) {
    for (int i = 0; i < ulps; ++i) x = Interval::down(x);
    return x;
}

double widen_up(double x, int ulps) {
    for (int i = 0; i < ulps; ++i) x = Interval::up(x);
    return x;
}

}  // namespace

Interval operator*(const Interval& a, const Interval& b) {
    const double p1 = a.lo * b.lo;
    const double p2 = a.lo * b.hi;
    const double p3 = a.hi * b.lo;
    const double p4 = a.hi * b.hi;
    return {Interval::down(std::min({p1, p2, p3, p4})), Interval::up(std::max({p1, p2, p3, p4}))};
}

Interval operator/(const Interval& a, const Interval& b) {
    if (b.lo <= 0.0 && b.hi >= 0.0) throw std::domain_error("interval division by an interval containing zero");
    const double q1 = a.lo / b.lo;
    const double q2 = a.lo / b.hi;
    const double q3 = a.hi / b.lo;
    const double q4 = a.hi / b.hi;
    return {Interval::down(std::min({q1, q2, q3, q4})), Interval::up(std::max({q1, q2, q3, q4}))};
}

Interval sqrt(const Interval& x) {
    const double lo = x.lo <= 0.0 ? 0.0 : Interval::down(std::sqrt(x.lo));
    return {std::max(0.0, lo), Interval::up(std::sqrt(std::max(0.0, x.hi)))};
}

Interval pow_pos(const Interval& x, double e) {
    if (!(x.lo > 0.0)) throw std::domain_error("pow_pos requires a strictly positive base");
    const double a = std::pow(x.lo, e);
    const double b = std::pow(x.hi, e);
    const int slack = Interval::kPowSlackUlps;
    return {widen_down(std::min(a, b), slack), widen_up(std::max(a, b), slack)};
}

Interval path_loss_range(double d2lo_tenths, double d2hi_tenths, double alpha) {
    // (d2 / 100)^(-alpha/2), decreasing in d2.
    const Interval d2 = Interval(d2lo_tenths, d2hi_tenths) / Interval(100.0);
    if (alpha == 3.0) {
        return Interval(1.0) / (d2 * sqrt(d2));
    }
    if (alpha == 4.0) {
        return Interval(1.0) / (d2 * d2);
    }
    if (alpha == 2.0) {
        return Interval(1.0) / d2;
    }
    return pow_pos(d2, -alpha / 2.0);
}

Interval path_loss(std::int64_t d2_tenths, double alpha) {
    const auto d = static_cast<double>(d2_tenths);
    return path_loss_range(d, d, alpha);
}

std::string to_string(Certainty c) {
    switch (c) {
        case Certainty::Yes: return "yes";
        case Certainty::No: return "no";
        case Certainty::Unknown: return "unknown";
    }
    return "unknown";
}

BigInterval::BigInterval(mpfr_prec_t prec) : lo_(prec), hi_(prec) {
    mpfr_set_zero(lo_.get(), 1);
    mpfr_set_zero(hi_.get(), 1);
}

BigInterval::BigInterval(mpfr_prec_t prec, double v) : lo_(prec), hi_(prec) {
    mpfr_set_d(lo_.get(), v, MPFR_RNDD);
    mpfr_set_d(hi_.get(), v, MPFR_RNDU);
}

BigInterval BigInterval::from_int(mpfr_prec_t prec, std::int64_t v) {
    BigInterval r(prec);
    mpfr_set_sj(r.lo_.get(), v, MPFR_RNDD);
    mpfr_set_sj(r.hi_.get(), v, MPFR_RNDU);
    return r;
}

BigInterval BigInterval::operator+(const BigInterval& b) const {
    BigInterval r(lo_.prec());
    mpfr_add(r.lo_.get(), lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_add(r.hi_.get(), hi_.get(), b.hi_.get(), MPFR_RNDU);
    return r;
}

BigInterval BigInterval::mul_nonneg(const BigInterval& b) const {
    BigInterval r(lo_.prec());
    mpfr_mul(r.lo_.get(), lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_mul(r.hi_.get(), hi_.get(), b.hi_.get(), MPFR_RNDU);
    return r;
}

BigInterval BigInterval::div_pos(const BigInterval& b) const {
    BigInterval r(lo_.prec());
    mpfr_div(r.lo_.get(), lo_.get(), b.hi_.get(), MPFR_RNDD);
    mpfr_div(r.hi_.get(), hi_.get(), b.lo_.get(), MPFR_RNDU);
    return r;
}

BigInterval BigInterval::path_loss(mpfr_prec_t prec, std::int64_t d2_tenths, double alpha) {
    if (d2_tenths <= 0) throw std::domain_error("path loss at zero distance");
    const mpfr_prec_t work = prec + 16;
    BigInterval d2 = from_int(work, d2_tenths).div_pos(from_int(work, 100));
    // Exponent -alpha/2 as an exact binary value (alpha is a double).
    Mpfr e(work + 64);
    mpfr_set_d(e.get(), -alpha, MPFR_RNDN);
    mpfr_div_2ui(e.get(), e.get(), 1, MPFR_RNDN);
    BigInterval r(prec);
    // x^e with e < 0 is decreasing in x for x > 0.
    mpfr_pow(r.lo_.get(), d2.hi_.get(), e.get(), MPFR_RNDD);
    mpfr_pow(r.hi_.get(), d2.lo_.get(), e.get(), MPFR_RNDU);
    return r;
}

Interval BigInterval::to_interval() const { return {lo_.to_double(MPFR_RNDD), hi_.to_double(MPFR_RNDU)}; }

Certainty BigInterval::greater_than(const BigInterval& b) const {
    if (mpfr_greater_p(lo_.get(), b.hi_.get())) return Certainty::Yes;
    if (mpfr_lessequal_p(hi_.get(), b.lo_.get())) return Certainty::No;
    return Certainty::Unknown;
}

}  // namespace mls
