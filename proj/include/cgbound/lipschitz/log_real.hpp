#pragma once

// Nonnegative reals stored by their natural logarithm. The Lipschitz constants
// grow like r₁^{KJ} and leave double range long before the sweeps do.

#include "cgbound/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace cgbound {

class LogReal {
public:
    LogReal() = default; // zero

    explicit LogReal(double x)
    {
        if (!(x >= 0.0)) throw InvalidArgument("LogReal: value must be nonnegative");
        log_ = std::log(x);
    }

    static LogReal from_log(double l)
    {
        LogReal r;
        r.log_ = l;
        return r;
    }
    static LogReal zero() { return {}; }
    static LogReal one() { return from_log(0.0); }

    double log() const noexcept { return log_; }
    /// exp(log); +inf once outside double range.
    double value() const noexcept { return std::exp(log_); }
    bool is_zero() const noexcept { return log_ == -std::numeric_limits<double>::infinity(); }

    friend LogReal operator*(LogReal a, LogReal b)
    {
        if (a.is_zero() || b.is_zero()) return {};
        return from_log(a.log_ + b.log_);
    }
    friend LogReal operator/(LogReal a, LogReal b)
    {
        if (b.is_zero()) throw DomainError("LogReal: division by zero");
        if (a.is_zero()) return {};
        return from_log(a.log_ - b.log_);
    }
    friend LogReal operator+(LogReal a, LogReal b)
    {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        const double hi = std::max(a.log_, b.log_), lo = std::min(a.log_, b.log_);
        return from_log(hi + std::log1p(std::exp(lo - hi)));
    }
    LogReal& operator*=(LogReal o) { return *this = *this * o; }
    LogReal& operator+=(LogReal o) { return *this = *this + o; }

    friend bool operator<(LogReal a, LogReal b) { return a.log_ < b.log_; }
    friend bool operator<=(LogReal a, LogReal b) { return a.log_ <= b.log_; }
    friend bool operator>(LogReal a, LogReal b) { return a.log_ > b.log_; }
    friend bool operator>=(LogReal a, LogReal b) { return a.log_ >= b.log_; }
    friend bool operator==(LogReal a, LogReal b) { return a.log_ == b.log_; }

    friend std::ostream& operator<<(std::ostream& os, LogReal x)
    {
        return os << "exp(" << x.log_ << ")";
    }

private:
    double log_ = -std::numeric_limits<double>::infinity();
};

inline LogReal pow(LogReal x, int k)
{
    if (k == 0) return LogReal::one();
    if (x.is_zero()) return {};
    return LogReal::from_log(x.log() * k);
}

inline LogReal sqrt(LogReal x)
{
    if (x.is_zero()) return {};
    return LogReal::from_log(0.5 * x.log());
}

/// ln(1 + x), accurate for tiny x and finite for x beyond double range.
inline double log1p(LogReal x)
{
    if (x.is_zero()) return 0.0;
    if (x.log() > 30.0) return x.log() + std::log1p(std::exp(-x.log()));
    return std::log1p(x.value());
}

} // namespace cgbound
