#pragma once

// Exact arithmetic in Q(sqrt d) for squarefree d.

#include <cstdint>
#include <ostream>
#include <string>

#include "quatsplit/exact_arith.hpp"

namespace quatsplit {

class QuadField {
public:
    explicit QuadField(const Int& d) : d_(d) {
        if (d == 0 || d == 1) throw InvalidArgument("quadratic field radicand must not be 0 or 1");
        if (!is_squarefree(d)) throw InvalidArgument("quadratic field radicand " + d.get_str() + " is not squarefree");
        if (!d.fits_slong_p()) throw InvalidArgument("quadratic field radicand too large");
    }
    long d() const { return d_.get_si(); }
    const Int& radicand() const { return d_; }
    friend bool operator==(const QuadField& x, const QuadField& y) { return x.d_ == y.d_; }

private:
    Int d_;
};

/// a + b sqrt(d). Rationals carry d = 0 and combine with any field.
class QFElem {
public:
    QFElem() = default;
    QFElem(long a) : a_(a) {}  // NOLINT: implicit so literals act as scalars
    QFElem(const Rat& a) : a_(a) {}  // NOLINT
    QFElem(const Int& a) : a_(a) {}  // NOLINT
    QFElem(const Rat& a, const Rat& b, const QuadField& k) : a_(a), b_(b), d_(k.d()) {}

    static QFElem sqrt_d(const QuadField& k) { return QFElem(Rat(0), Rat(1), k); }

    const Rat& a() const { return a_; }
    const Rat& b() const { return b_; }
    /// Radicand of the field this element was built in (0 for plain rationals).
    long d() const { return d_; }
    bool is_rational() const { return b_ == 0; }

    QFElem conj() const { return with(a_, -b_); }
    Rat norm() const { return a_ * a_ - Rat(d_) * b_ * b_; }
    Rat tr() const { return 2 * a_; }

    QFElem inverse() const {
        const Rat n = norm();
        if (n == 0) throw DivisionByZero("division by zero in Q(sqrt d)");
        return with(a_ / n, -b_ / n);
    }

    friend QFElem operator+(const QFElem& x, const QFElem& y) {
        return combine(x, y, x.a_ + y.a_, x.b_ + y.b_);
    }
    friend QFElem operator-(const QFElem& x, const QFElem& y) {
        return combine(x, y, x.a_ - y.a_, x.b_ - y.b_);
    }
    friend QFElem operator*(const QFElem& x, const QFElem& y) {
        const long d = merged(x, y);
        return combine(x, y, x.a_ * y.a_ + Rat(d) * x.b_ * y.b_, x.a_ * y.b_ + x.b_ * y.a_);
    }
    friend QFElem operator/(const QFElem& x, const QFElem& y) {
        merged(x, y);
        return x * y.inverse();
    }
    QFElem operator-() const { return with(-a_, -b_); }
    QFElem& operator+=(const QFElem& y) { return *this = *this + y; }
    QFElem& operator-=(const QFElem& y) { return *this = *this - y; }
    QFElem& operator*=(const QFElem& y) { return *this = *this * y; }
    QFElem& operator/=(const QFElem& y) { return *this = *this / y; }

    friend bool operator==(const QFElem& x, const QFElem& y) {
        if (x.a_ != y.a_ || x.b_ != y.b_) return false;
        return x.b_ == 0 || x.d_ == y.d_;
    }
    friend bool operator==(const QFElem& x, long y) { return x.b_ == 0 && x.a_ == y; }

    std::string to_string() const {
        if (b_ == 0) return quatsplit::to_string(a_);
        std::string s = a_ == 0 ? "" : quatsplit::to_string(a_) + (b_ > 0 ? "+" : "");
        return s + quatsplit::to_string(b_) + "*sqrt(" + std::to_string(d_) + ")";
    }
    friend std::ostream& operator<<(std::ostream& os, const QFElem& x) { return os << x.to_string(); }

private:
    static long merged(const QFElem& x, const QFElem& y) {
        if (x.d_ != 0 && y.d_ != 0 && x.d_ != y.d_)
            throw FieldMismatch("elements of Q(sqrt " + std::to_string(x.d_) + ") and Q(sqrt " +
                                std::to_string(y.d_) + ") combined");
        return x.d_ != 0 ? x.d_ : y.d_;
    }
    static QFElem combine(const QFElem& x, const QFElem& y, Rat a, Rat b) {
        QFElem r;
        r.a_ = std::move(a);
        r.b_ = std::move(b);
        r.d_ = merged(x, y);
        return r;
    }
    QFElem with(Rat a, Rat b) const {
        QFElem r;
        r.a_ = std::move(a);
        r.b_ = std::move(b);
        r.d_ = d_;
        return r;
    }

    Rat a_ = 0, b_ = 0;
    long d_ = 0;
};

/// Whether x is a square in the field with radicand d, and a root if so.
inline std::optional<QFElem> sqrt_in_field(const QFElem& x, const QuadField& k) {
    if (x.d() != 0 && x.d() != k.d()) throw FieldMismatch("sqrt_in_field: element from another field");
    if (x == 0) return QFElem(0);
    const Rat d(k.d());
    if (x.is_rational()) {
        const Rat& a = x.a();
        if (is_rational_square(a)) {
            Rat r(isqrt(a.get_num()), isqrt(a.get_den()));
            r.canonicalize();
            return QFElem(r);
        }
        const Rat q = a / d;  // a = d c^2 gives root c sqrt(d)
        if (is_rational_square(q)) {
            Rat r(isqrt(q.get_num()), isqrt(q.get_den()));
            r.canonicalize();
            return QFElem(Rat(0), r, k);
        }
        return std::nullopt;
    }
    // (p + q sqrt d)^2 = a + b sqrt d: p^2 + d q^2 = a, 2pq = b, so
    // p^2 = (a +- sqrt(N)) / 2 with N = a^2 - d b^2 the norm.
    const Rat n = x.norm();
    if (!is_rational_square(n)) return std::nullopt;
    Rat s(isqrt(n.get_num()), isqrt(n.get_den()));
    s.canonicalize();
    for (const Rat& cand : {Rat((x.a() + s) / 2), Rat((x.a() - s) / 2)}) {
        if (cand <= 0 || !is_rational_square(cand)) continue;
        Rat p(isqrt(cand.get_num()), isqrt(cand.get_den()));
        p.canonicalize();
        const Rat q = x.b() / (2 * p);
        const QFElem r(p, q, k);
        if (r * r == x) return r;
    }
    return std::nullopt;
}

}  // namespace quatsplit
