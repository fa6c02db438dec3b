#include "almostsq/numbers.hpp"

#include <cctype>
#include <cmath>
#include <limits>

namespace almostsq {

BigNat::BigNat(mpz_class v) : value_(std::move(v)) {
  if (sgn(value_) < 0) throw std::domain_error("BigNat: negative value");
}

BigNat BigNat::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("BigNat: empty string");
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw std::invalid_argument("BigNat: not a nonnegative decimal integer: " + std::string(text));
    }
  }
  return BigNat(mpz_class(std::string(text), 10));
}

bool BigNat::fits_u64() const noexcept { return mpz_sizeinbase(value_.get_mpz_t(), 2) <= 64; }

std::uint64_t BigNat::to_u64() const {
  if (!fits_u64()) throw std::overflow_error("BigNat: value exceeds 64 bits");
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, value_.get_mpz_t());
  return out;
}

double BigNat::log() const {
  if (sgn(value_) <= 0) throw std::domain_error("BigNat::log of zero");
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, value_.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

BigNat& BigNat::operator-=(const BigNat& o) {
  if (cmp(value_, o.value_) < 0) throw std::domain_error("BigNat: subtraction underflow");
  value_ -= o.value_;
  return *this;
}

BigNat operator/(const BigNat& l, const BigNat& r) {
  if (r.is_zero()) throw std::domain_error("BigNat: division by zero");
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), l.value_.get_mpz_t(), r.value_.get_mpz_t());
  return BigNat(std::move(q));
}

BigNat operator%(const BigNat& l, const BigNat& r) {
  if (r.is_zero()) throw std::domain_error("BigNat: division by zero");
  mpz_class m;
  mpz_fdiv_r(m.get_mpz_t(), l.value_.get_mpz_t(), r.value_.get_mpz_t());
  return BigNat(std::move(m));
}

BigNat absdiff(const BigNat& a, const BigNat& b) { return a < b ? b - a : a - b; }

BigNat pow10(unsigned k) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, k);
  return BigNat(std::move(p));
}

// ---------------------------------------------------------------- Rational

Rational::Rational(long num, long den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  value_ = mpq_class(num, den);
  value_.canonicalize();
}

Rational operator/(const Rational& l, const Rational& r) {
  if (r.sign() == 0) throw std::domain_error("Rational: division by zero");
  return Rational(mpq_class(l.value_ / r.value_));
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class pow10_signed_scale(long k) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(k < 0 ? -k : k));
  return p;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  const std::string original(text);
  auto bad = [&] { return std::invalid_argument("not a rational number: '" + original + "'"); };
  if (text.empty()) throw bad();

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view n = text.substr(0, slash);
    std::string_view d = text.substr(slash + 1);
    bool neg = false;
    if (!n.empty() && (n.front() == '-' || n.front() == '+')) {
      neg = n.front() == '-';
      n.remove_prefix(1);
    }
    if (!all_digits(n) || !all_digits(d)) throw bad();
    mpz_class num(std::string(n), 10);
    mpz_class den(std::string(d), 10);
    if (sgn(den) == 0) throw bad();
    if (neg) num = -num;
    return Rational(mpq_class(num, den));
  }

  bool neg = false;
  if (text.front() == '-' || text.front() == '+') {
    neg = text.front() == '-';
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view es = text.substr(e + 1);
    bool eneg = false;
    if (!es.empty() && (es.front() == '-' || es.front() == '+')) {
      eneg = es.front() == '-';
      es.remove_prefix(1);
    }
    if (!all_digits(es) || es.size() > 6) throw bad();
    exponent = std::stol(std::string(es));
    if (eneg) exponent = -exponent;
    text = text.substr(0, e);
  }
  std::string digits;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view ip = text.substr(0, dot);
    std::string_view fp = text.substr(dot + 1);
    if (ip.empty() && fp.empty()) throw bad();
    if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp))) throw bad();
    digits = std::string(ip) + std::string(fp);
    exponent -= static_cast<long>(fp.size());
  } else {
    if (!all_digits(text)) throw bad();
    digits = std::string(text);
  }
  mpq_class v{mpz_class(digits, 10)};
  if (exponent >= 0) {
    v *= pow10_signed_scale(exponent);
  } else {
    v /= pow10_signed_scale(exponent);
  }
  if (neg) v = -v;
  return Rational(std::move(v));
}

Rational Rational::from_double(double v) {
  if (!std::isfinite(v)) throw std::domain_error("Rational: non-finite double");
  mpq_class q;
  mpq_set_d(q.get_mpq_t(), v);
  return Rational(std::move(q));
}

mpz_class floor(const Rational& r) {
  mpz_class out;
  mpz_fdiv_q(out.get_mpz_t(), r.mpq().get_num_mpz_t(), r.mpq().get_den_mpz_t());
  return out;
}

mpz_class ceil(const Rational& r) {
  mpz_class out;
  mpz_cdiv_q(out.get_mpz_t(), r.mpq().get_num_mpz_t(), r.mpq().get_den_mpz_t());
  return out;
}

// -------------------------------------------------------------- FixedPoint

FixedPoint FixedPoint::round(const Rational& r, unsigned scale) {
  mpq_class scaled = r.mpq() * pow10(scale).mpz();
  const bool neg = sgn(scaled) < 0;
  if (neg) scaled = -scaled;
  mpq_class shifted = scaled + mpq_class(1, 2);
  mpz_class m;
  mpz_fdiv_q(m.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  if (neg) m = -m;
  return {std::move(m), scale};
}

Rational FixedPoint::exact() const { return Rational(mpq_class(mantissa_, pow10(scale_).mpz())); }

double FixedPoint::to_double() const { return exact().to_double(); }

std::string FixedPoint::to_string() const {
  mpz_class mag = abs(mantissa_);
  std::string digits = mag.get_str();
  if (digits.size() <= scale_) digits.insert(0, scale_ + 1 - digits.size(), '0');
  std::string out = sgn(mantissa_) < 0 ? "-" : "";
  out += digits.substr(0, digits.size() - scale_);
  if (scale_ > 0) {
    out += '.';
    out += digits.substr(digits.size() - scale_);
  }
  return out;
}

}  // namespace almostsq
