#include "thingc/thing.hpp"

#include <algorithm>

namespace thingc {

Thing Thing::integer(std::int64_t v) {
  Thing t;
  t.kind_ = Kind::Integer;
  t.int_ = v;
  return t;
}

Thing Thing::boolean(bool v) {
  Thing t;
  t.kind_ = Kind::Boolean;
  t.bool_ = v;
  return t;
}

Thing Thing::symbol(std::string name) {
  Thing t;
  t.kind_ = Kind::Symbol;
  t.str_ = std::move(name);
  return t;
}

Thing Thing::text(std::string value) {
  Thing t;
  t.kind_ = Kind::Text;
  t.str_ = std::move(value);
  return t;
}

Thing Thing::list(std::vector<Thing> items) {
  Thing t;
  t.kind_ = Kind::List;
  t.items_ = std::move(items);
  return t;
}

Thing Thing::record(std::vector<std::pair<std::string, Thing>> fields) {
  Thing t;
  t.kind_ = Kind::Record;
  std::stable_sort(fields.begin(), fields.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  t.fields_ = std::move(fields);
  return t;
}

bool Thing::operator==(const Thing& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case Kind::Integer: return int_ == other.int_;
    case Kind::Boolean: return bool_ == other.bool_;
    case Kind::Symbol:
    case Kind::Text: return str_ == other.str_;
    case Kind::List: return items_ == other.items_;
    case Kind::Record: return fields_ == other.fields_;
  }
  return false;
}

namespace {

void escape_into(const std::string& s, std::string& out) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
}

}  // namespace

std::string Thing::to_text() const {
  std::string out;
  switch (kind_) {
    case Kind::Integer:
      out = std::to_string(int_);
      break;
    case Kind::Boolean:
      out = bool_ ? "true" : "false";
      break;
    case Kind::Symbol:
      out = str_;
      break;
    case Kind::Text:
      escape_into(str_, out);
      break;
    case Kind::List: {
      out = "[";
      for (std::size_t i = 0; i < items_.size(); ++i) {
        if (i > 0) out += ", ";
        out += items_[i].to_text();
      }
      out += "]";
      break;
    }
    case Kind::Record: {
      out = "{";
      for (std::size_t i = 0; i < fields_.size(); ++i) {
        if (i > 0) out += ", ";
        out += fields_[i].first;
        out += ": ";
        out += fields_[i].second.to_text();
      }
      out += "}";
      break;
    }
  }
  return out;
}

const char* Thing::kind_name(Kind k) {
  switch (k) {
    case Kind::Integer: return "integer";
    case Kind::Boolean: return "boolean";
    case Kind::Symbol: return "symbol";
    case Kind::Text: return "text";
    case Kind::List: return "list";
    case Kind::Record: return "record";
  }
  return "?";
}

}  // namespace thingc
