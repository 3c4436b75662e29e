#include "multippl/value.hpp"

#include <cstdio>
#include <stdexcept>

namespace multippl {

Value Value::boolean(bool b) {
  Value v;
  v.kind_ = Kind::Bool;
  v.b_ = b;
  return v;
}

Value Value::real(double r) {
  Value v;
  v.kind_ = Kind::Real;
  v.r_ = r;
  return v;
}

Value Value::integer(long long n) {
  Value v;
  v.kind_ = Kind::Int;
  v.i_ = n;
  return v;
}

Value Value::pair(Value a, Value b) {
  Value v;
  v.kind_ = Kind::Pair;
  v.items_ = std::make_shared<const std::vector<Value>>(std::vector<Value>{std::move(a), std::move(b)});
  return v;
}

Value Value::list(std::vector<Value> items) {
  Value v;
  v.kind_ = Kind::List;
  v.items_ = std::make_shared<const std::vector<Value>>(std::move(items));
  return v;
}

bool Value::as_bool() const {
  if (kind_ != Kind::Bool) throw std::logic_error("value is not a bool");
  return b_;
}

double Value::as_real() const {
  if (kind_ != Kind::Real) throw std::logic_error("value is not a real");
  return r_;
}

long long Value::as_int() const {
  if (kind_ != Kind::Int) throw std::logic_error("value is not an int");
  return i_;
}

const Value& Value::first() const {
  if (kind_ != Kind::Pair) throw std::logic_error("value is not a pair");
  return (*items_)[0];
}

const Value& Value::second() const {
  if (kind_ != Kind::Pair) throw std::logic_error("value is not a pair");
  return (*items_)[1];
}

const std::vector<Value>& Value::items() const {
  if (kind_ != Kind::List) throw std::logic_error("value is not a list");
  return *items_;
}

const Value& Value::component(int k, int width) const {
  const Value* cur = this;
  for (int i = 0; i < k; ++i) cur = &cur->second();
  return k == width - 1 ? *cur : cur->first();
}

int Value::compare(const Value& a, const Value& b) {
  if (a.kind_ != b.kind_) return a.kind_ < b.kind_ ? -1 : 1;
  switch (a.kind_) {
    case Kind::Unit:
      return 0;
    case Kind::Bool:
      return a.b_ == b.b_ ? 0 : (a.b_ ? 1 : -1);
    case Kind::Real:
      return a.r_ == b.r_ ? 0 : (a.r_ < b.r_ ? -1 : 1);
    case Kind::Int:
      return a.i_ == b.i_ ? 0 : (a.i_ < b.i_ ? -1 : 1);
    case Kind::Pair:
    case Kind::List: {
      const auto& x = *a.items_;
      const auto& y = *b.items_;
      for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
        if (int c = compare(x[i], y[i])) return c;
      return x.size() == y.size() ? 0 : (x.size() < y.size() ? -1 : 1);
    }
  }
  return 0;
}

std::string to_string(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Unit:
      return "()";
    case Value::Kind::Bool:
      return v.as_bool() ? "true" : "false";
    case Value::Kind::Real: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v.as_real());
      return buf;
    }
    case Value::Kind::Int:
      return std::to_string(v.as_int());
    case Value::Kind::Pair: {
      std::string out = "(" + to_string(v.first());
      const Value* cur = &v.second();
      while (cur->kind() == Value::Kind::Pair) {
        out += ", " + to_string(cur->first());
        cur = &cur->second();
      }
      return out + ", " + to_string(*cur) + ")";
    }
    case Value::Kind::List: {
      std::string out = "[";
      for (std::size_t i = 0; i < v.items().size(); ++i) out += (i ? ", " : "") + to_string(v.items()[i]);
      return out + "]";
    }
  }
  return "?";
}

}  // namespace multippl
