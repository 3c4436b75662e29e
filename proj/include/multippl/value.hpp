#pragma once

#include <memory>
#include <string>
#include <vector>

namespace multippl {

/// A concrete runtime value. Pairs and lists share immutable storage, so
/// copies are cheap.
class Value {
 public:
  enum class Kind { Unit, Bool, Real, Int, Pair, List };

  Value() = default;
  static Value unit() { return Value(); }
  static Value boolean(bool b);
  static Value real(double r);
  static Value integer(long long n);
  static Value pair(Value a, Value b);
  static Value list(std::vector<Value> items);

  Kind kind() const { return kind_; }
  bool as_bool() const;
  double as_real() const;
  long long as_int() const;
  const Value& first() const;
  const Value& second() const;
  const std::vector<Value>& items() const;

  /// Component k of an n-tuple stored as right-nested pairs.
  const Value& component(int k, int width) const;

  friend bool operator==(const Value& a, const Value& b) { return compare(a, b) == 0; }
  friend bool operator<(const Value& a, const Value& b) { return compare(a, b) < 0; }

  static int compare(const Value& a, const Value& b);

 private:
  Kind kind_ = Kind::Unit;
  bool b_ = false;
  double r_ = 0.0;
  long long i_ = 0;
  std::shared_ptr<const std::vector<Value>> items_;
};

std::string to_string(const Value& v);

}  // namespace multippl
