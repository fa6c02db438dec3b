#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "almostsq/numbers.hpp"

namespace almostsq::cli {

/// One output field: a preformatted number, a string, a boolean or null.
struct Cell {
  enum class Kind { kNumber, kString, kBool, kNull };
  Kind kind = Kind::kNull;
  std::string text;

  static Cell number(std::string t) { return {Kind::kNumber, std::move(t)}; }
  static Cell number(const BigNat& v) { return {Kind::kNumber, v.to_string()}; }
  static Cell number(const FixedPoint& v) { return {Kind::kNumber, v.to_string()}; }
  static Cell number(std::uint64_t v) { return {Kind::kNumber, std::to_string(v)}; }
  static Cell number(std::int64_t v) { return {Kind::kNumber, std::to_string(v)}; }
  static Cell string(std::string t) { return {Kind::kString, std::move(t)}; }
  static Cell boolean(bool b) { return {Kind::kBool, b ? "true" : "false"}; }
  static Cell null() { return {}; }
};

/// "%.12g"-style rendering; identical across runs and worker counts.
std::string format_double(double v);

/// Shortest exact decimal when the value terminates within `max_digits`
/// places, otherwise rounded to `max_digits`.
std::string format_rational(const Rational& v, unsigned max_digits = 12);

/// Writes headered CSV or JSON lines with a fixed column list.
class RowWriter {
 public:
  RowWriter(std::ostream& os, bool json, std::vector<std::string> columns);

  void write(const std::vector<Cell>& row);

 private:
  std::ostream& os_;
  bool json_;
  std::vector<std::string> columns_;
};

}  // namespace almostsq::cli
