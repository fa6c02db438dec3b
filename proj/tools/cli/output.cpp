#include "cli/output.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace almostsq::cli {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_rational(const Rational& v, unsigned max_digits) {
  mpz_class den = v.den();
  unsigned twos = 0, fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
    den /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    ++fives;
  }
  const unsigned places = std::max(twos, fives);
  if (den == 1 && places <= max_digits) return FixedPoint::round(v, places).to_string();
  return FixedPoint::round(v, max_digits).to_string();
}

RowWriter::RowWriter(std::ostream& os, bool json, std::vector<std::string> columns)
    : os_(os), json_(json), columns_(std::move(columns)) {
  if (json_) return;
  for (std::size_t i = 0; i < columns_.size(); ++i) os_ << (i ? "," : "") << columns_[i];
  os_ << '\n';
}

void RowWriter::write(const std::vector<Cell>& row) {
  if (row.size() != columns_.size()) throw std::logic_error("RowWriter: column count mismatch");
  if (!json_) {
    for (std::size_t i = 0; i < row.size(); ++i) os_ << (i ? "," : "") << row[i].text;
    os_ << '\n';
    return;
  }
  // Numbers are emitted verbatim so big integers and fixed-point values keep
  // every digit.
  os_ << '{';
  for (std::size_t i = 0; i < row.size(); ++i) {
    os_ << (i ? "," : "") << nlohmann::json(columns_[i]).dump() << ':';
    switch (row[i].kind) {
      case Cell::Kind::kNumber:
      case Cell::Kind::kBool:
        os_ << row[i].text;
        break;
      case Cell::Kind::kString:
        os_ << nlohmann::json(row[i].text).dump();
        break;
      case Cell::Kind::kNull:
        os_ << "null";
        break;
    }
  }
  os_ << "}\n";
}

}  // namespace almostsq::cli
