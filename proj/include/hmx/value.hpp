#pragma once

#include <cstdint>
#include <string>
#include <variant>

namespace hmx {

enum class Prim { Int, Long, Double, Boolean, Char, String, Subject, Void };

struct TypeTag {
  Prim kind = Prim::Void;
  std::string subject;  // set when kind == Subject

  static TypeTag of(Prim p) { return TypeTag{p, {}}; }
  static TypeTag subject_of(std::string name) {
    return TypeTag{Prim::Subject, std::move(name)};
  }

  bool is_numeric() const {
    return kind == Prim::Int || kind == Prim::Long || kind == Prim::Double ||
           kind == Prim::Boolean || kind == Prim::Char;
  }
  bool is_void() const { return kind == Prim::Void; }

  bool operator==(const TypeTag& o) const {
    return kind == o.kind && subject == o.subject;
  }
  bool operator!=(const TypeTag& o) const { return !(*this == o); }
};

// Renders a TypeTag the way signatures and the subject language spell it.
std::string type_name(const TypeTag& t);

// Reference to an interpreter heap object.
struct ObjRef {
  int32_t id = -1;
  bool operator==(const ObjRef& o) const { return id == o.id; }
};

struct Value {
  std::variant<std::monostate, int32_t, int64_t, double, bool, uint32_t,
               std::string, ObjRef>
      v;

  static Value null() { return Value{}; }
  static Value of_int(int32_t x) { return Value{{x}}; }
  static Value of_long(int64_t x) { return Value{{x}}; }
  static Value of_double(double x) { return Value{{x}}; }
  static Value of_bool(bool x) { return Value{{x}}; }
  static Value of_char(uint32_t cp) { return Value{{cp}}; }
  static Value of_string(std::string s) { return Value{{std::move(s)}}; }
  static Value of_obj(int32_t id) { return Value{{ObjRef{id}}}; }

  bool is_null() const { return std::holds_alternative<std::monostate>(v); }
  bool is_string() const { return std::holds_alternative<std::string>(v); }
  bool is_obj() const { return std::holds_alternative<ObjRef>(v); }

  int32_t as_int() const { return std::get<int32_t>(v); }
  int64_t as_long() const { return std::get<int64_t>(v); }
  double as_double() const { return std::get<double>(v); }
  bool as_bool() const { return std::get<bool>(v); }
  uint32_t as_char() const { return std::get<uint32_t>(v); }
  const std::string& as_string() const { return std::get<std::string>(v); }
  ObjRef as_obj() const { return std::get<ObjRef>(v); }

  // Numeric payload widened to double; booleans map to {0,1}.
  double numeric() const;

  Prim prim() const;

  bool operator==(const Value& o) const { return v == o.v; }
  bool operator!=(const Value& o) const { return !(v == o.v); }
};

// Canonical source-form rendering of a primitive/string value (doubles keep
// round-trip precision, strings are quoted and escaped). Object refs render
// as "<obj>"; use the interpreter's state renderer for those.
std::string render_value(const Value& val);

std::string escape_string(const std::string& s);

}  // namespace hmx
