#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hmx/value.hpp"

namespace hmx {

enum class ExprKind {
  Literal,
  VarRef,     // local, param, or own field (resolved by the typechecker)
  FieldRead,  // kids[0].name
  Unary,      // kids[0]
  Binary,     // kids[0] op kids[1]
  Builtin,    // len/concat/substring/charAt/indexOf
  MethodCall, // kids[0].name(kids[1..])
  New,        // new name(kids...)
};

enum class BinOp { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or };
enum class UnOp { Neg, Not };
enum class BuiltinFn { Len, Concat, Substring, CharAt, IndexOf };

bool is_arith(BinOp op);
bool is_relational(BinOp op);
const char* binop_text(BinOp op);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  ExprKind kind = ExprKind::Literal;
  Value literal;
  std::string name;
  BinOp bin = BinOp::Add;
  UnOp un = UnOp::Neg;
  BuiltinFn builtin = BuiltinFn::Len;
  std::vector<ExprPtr> kids;

  // Filled in by later passes.
  TypeTag type;
  bool var_is_field = false;  // VarRef resolved to an own field
  int resolved = -1;          // ctor/method index for New/MethodCall
  int line = 0, col = 0;
  int node_id = -1;

  ExprPtr clone() const;
};

enum class StmtKind { VarDecl, Assign, If, While, Return, Throw, ExprStmt };

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Stmt {
  StmtKind kind = StmtKind::ExprStmt;
  std::string name;          // VarDecl/Assign target
  TypeTag decl_type;         // VarDecl
  std::string throw_tag;     // Throw
  ExprPtr expr;              // rhs / condition / return value
  std::vector<StmtPtr> then_body;
  std::vector<StmtPtr> else_body;

  bool assign_to_field = false;  // Assign resolved to an own field
  int line = 0;
  int branch_id = -1;  // If/While predicates

  StmtPtr clone() const;
};

struct Callable {
  std::string name;  // "<init>" for constructors
  std::vector<std::pair<std::string, TypeTag>> params;
  TypeTag ret;  // Prim::Void for void; constructors report the owner type
  std::vector<StmtPtr> body;
  int line = 0;

  bool is_ctor() const { return name == "<init>"; }
  Callable clone() const;
};

struct SubjectUnit {
  std::string name;
  std::vector<std::pair<std::string, TypeTag>> fields;
  std::vector<Callable> ctors;
  std::vector<Callable> methods;
  std::pair<size_t, size_t> source_span{0, 0};

  SubjectUnit clone() const;

  // Callables addressed by a single index: ctors first, then methods.
  size_t callable_count() const { return ctors.size() + methods.size(); }
  const Callable& callable(size_t i) const {
    return i < ctors.size() ? ctors[i] : methods[i - ctors.size()];
  }
  Callable& callable(size_t i) {
    return i < ctors.size() ? ctors[i] : methods[i - ctors.size()];
  }
};

struct Corpus {
  std::map<std::string, SubjectUnit> units;
};

// Canonical signature string: OWNER|NAME(T1, T2)RET, void rendered as V,
// constructors named <init> returning the owner type.
std::string signature_key(const Callable& c, const std::string& owner);

// Deterministic source form; parse of the output yields a structurally
// equal AST.
std::string pretty_print(const SubjectUnit& unit);
std::string pretty_print(const Corpus& corpus);

bool structurally_equal(const SubjectUnit& a, const SubjectUnit& b);

}  // namespace hmx
