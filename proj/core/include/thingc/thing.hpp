#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace thingc {

/// A typed immutable value that flows through stages. Transformation always
/// produces a new Thing; nothing mutates one in place.
class Thing {
 public:
  enum class Kind { Integer, Boolean, Symbol, Text, List, Record };

  Thing() : kind_(Kind::Integer) {}

  static Thing integer(std::int64_t v);
  static Thing boolean(bool v);
  static Thing symbol(std::string name);
  static Thing text(std::string value);
  static Thing list(std::vector<Thing> items);
  // Record fields are stored sorted by name so equality and rendering are
  // independent of construction order.
  static Thing record(std::vector<std::pair<std::string, Thing>> fields);

  Kind kind() const { return kind_; }
  bool is_integer() const { return kind_ == Kind::Integer; }
  bool is_boolean() const { return kind_ == Kind::Boolean; }
  bool is_symbol() const { return kind_ == Kind::Symbol; }
  bool is_text() const { return kind_ == Kind::Text; }
  bool is_list() const { return kind_ == Kind::List; }
  bool is_record() const { return kind_ == Kind::Record; }

  std::int64_t as_integer() const { return int_; }
  bool as_boolean() const { return bool_; }
  const std::string& as_string() const { return str_; }  // symbol name or text
  const std::vector<Thing>& items() const { return items_; }
  const std::vector<std::pair<std::string, Thing>>& fields() const { return fields_; }

  bool operator==(const Thing& other) const;
  bool operator!=(const Thing& other) const { return !(*this == other); }

  /// Canonical rendering: 42, true, red, "text", [1, 2], {a: 1}.
  std::string to_text() const;

  static const char* kind_name(Kind k);

 private:
  Kind kind_;
  std::int64_t int_ = 0;
  bool bool_ = false;
  std::string str_;
  std::vector<Thing> items_;
  std::vector<std::pair<std::string, Thing>> fields_;
};

}  // namespace thingc
