#include "ptcache/rational.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include "ptcache/errors.hpp"

namespace ptcache {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ComponentTooLarge: return "ComponentTooLarge";
    case ErrorKind::OutOfSupport: return "OutOfSupport";
    case ErrorKind::UnsupportedGrouping: return "UnsupportedGrouping";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::EmptySelection: return "EmptySelection";
    case ErrorKind::IncompatibleLocals: return "IncompatibleLocals";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::DegenerateSystem: return "DegenerateSystem";
    case ErrorKind::InvalidRatio: return "InvalidRatio";
    case ErrorKind::PresetConstraintViolated: return "PresetConstraintViolated";
    case ErrorKind::MemoryMismatch: return "MemoryMismatch";
    case ErrorKind::DemandOutOfRange: return "DemandOutOfRange";
    case ErrorKind::UndecodableMessage: return "UndecodableMessage";
    case ErrorKind::MissingPacket: return "MissingPacket";
    case ErrorKind::DuplicateDelivery: return "DuplicateDelivery";
    case ErrorKind::EmptyRange: return "EmptyRange";
  }
  return "Unknown";
}

std::string to_string(const BigInt& value) { return value.str(); }

Rational::Rational(BigInt numerator, BigInt denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
  if (den_ == 0) throw std::domain_error("Rational: zero denominator");
  normalize();
}

void Rational::normalize() {
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  if (num_ == 0) {
    den_ = 1;
    return;
  }
  BigInt g = boost::multiprecision::gcd(num_, den_);
  if (g != 1) {
    num_ /= g;
    den_ /= g;
  }
}

Rational Rational::parse(std::string_view text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string_view::npos) return Rational(BigInt(std::string(text)));
    return Rational(BigInt(std::string(text.substr(0, slash))),
                    BigInt(std::string(text.substr(slash + 1))));
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("Rational: cannot parse '" + std::string(text) + "'");
  }
}

std::string Rational::str() const { return num_.str() + "/" + den_.str(); }

double Rational::to_double() const {
  boost::multiprecision::cpp_rational r(num_, den_);
  return r.convert_to<double>();
}

Rational Rational::operator-() const {
  Rational r = *this;
  r.num_ = -r.num_;
  return r;
}

Rational& Rational::operator+=(const Rational& rhs) {
  num_ = num_ * rhs.den_ + rhs.num_ * den_;
  den_ *= rhs.den_;
  normalize();
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) { return *this += -rhs; }

Rational& Rational::operator*=(const Rational& rhs) {
  num_ *= rhs.num_;
  den_ *= rhs.den_;
  normalize();
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.num_ == 0) throw std::domain_error("Rational: division by zero");
  num_ *= rhs.den_;
  den_ *= rhs.num_;
  normalize();
  return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  BigInt lhs = a.num_ * b.den_;
  BigInt rhs = b.num_ * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace ptcache
