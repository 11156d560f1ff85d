#include "hmx/ast.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

namespace hmx {

std::string type_name(const TypeTag& t) {
  switch (t.kind) {
    case Prim::Int: return "int";
    case Prim::Long: return "long";
    case Prim::Double: return "double";
    case Prim::Boolean: return "boolean";
    case Prim::Char: return "char";
    case Prim::String: return "string";
    case Prim::Subject: return t.subject;
    case Prim::Void: return "V";
  }
  return "?";
}

double Value::numeric() const {
  switch (v.index()) {
    case 1: return static_cast<double>(as_int());
    case 2: return static_cast<double>(as_long());
    case 3: return as_double();
    case 4: return as_bool() ? 1.0 : 0.0;
    case 5: return static_cast<double>(as_char());
    default: return 0.0;
  }
}

Prim Value::prim() const {
  switch (v.index()) {
    case 1: return Prim::Int;
    case 2: return Prim::Long;
    case 3: return Prim::Double;
    case 4: return Prim::Boolean;
    case 5: return Prim::Char;
    case 6: return Prim::String;
    case 7: return Prim::Subject;
    default: return Prim::Void;
  }
}

std::string escape_string(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

static std::string render_double(double d) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", d);
  std::string s(buf);
  // Keep a decimal marker so the literal re-parses as a double.
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

std::string render_value(const Value& val) {
  switch (val.v.index()) {
    case 0: return "null";
    case 1: return std::to_string(val.as_int());
    case 2: return std::to_string(val.as_long()) + "L";
    case 3: return render_double(val.as_double());
    case 4: return val.as_bool() ? "true" : "false";
    case 5: {
      uint32_t cp = val.as_char();
      if (cp >= 0x20 && cp < 0x7f) {
        std::string s = "'";
        char c = static_cast<char>(cp);
        if (c == '\'' || c == '\\') s += '\\';
        s += c;
        s += "'";
        return s;
      }
      char buf[16];
      std::snprintf(buf, sizeof(buf), "'\\u%04" PRIx32 "'", cp);
      return buf;
    }
    case 6: return "\"" + escape_string(val.as_string()) + "\"";
    case 7: return "<obj>";
  }
  return "?";
}

bool is_arith(BinOp op) {
  return op == BinOp::Add || op == BinOp::Sub || op == BinOp::Mul ||
         op == BinOp::Div || op == BinOp::Mod;
}

bool is_relational(BinOp op) {
  return op == BinOp::Eq || op == BinOp::Ne || op == BinOp::Lt ||
         op == BinOp::Le || op == BinOp::Gt || op == BinOp::Ge;
}

const char* binop_text(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
  }
  return "?";
}

ExprPtr Expr::clone() const {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  e->literal = literal;
  e->name = name;
  e->bin = bin;
  e->un = un;
  e->builtin = builtin;
  e->type = type;
  e->var_is_field = var_is_field;
  e->resolved = resolved;
  e->line = line;
  e->col = col;
  e->node_id = node_id;
  for (const auto& k : kids) e->kids.push_back(k->clone());
  return e;
}

StmtPtr Stmt::clone() const {
  auto s = std::make_unique<Stmt>();
  s->kind = kind;
  s->name = name;
  s->decl_type = decl_type;
  s->throw_tag = throw_tag;
  if (expr) s->expr = expr->clone();
  for (const auto& t : then_body) s->then_body.push_back(t->clone());
  for (const auto& t : else_body) s->else_body.push_back(t->clone());
  s->assign_to_field = assign_to_field;
  s->line = line;
  s->branch_id = branch_id;
  return s;
}

Callable Callable::clone() const {
  Callable c;
  c.name = name;
  c.params = params;
  c.ret = ret;
  c.line = line;
  for (const auto& s : body) c.body.push_back(s->clone());
  return c;
}

SubjectUnit SubjectUnit::clone() const {
  SubjectUnit u;
  u.name = name;
  u.fields = fields;
  u.source_span = source_span;
  for (const auto& c : ctors) u.ctors.push_back(c.clone());
  for (const auto& m : methods) u.methods.push_back(m.clone());
  return u;
}

std::string signature_key(const Callable& c, const std::string& owner) {
  std::string s = owner + "|" + c.name + "(";
  for (size_t i = 0; i < c.params.size(); ++i) {
    if (i) s += ", ";
    s += type_name(c.params[i].second);
  }
  s += ")";
  s += c.is_ctor() ? owner : type_name(c.ret);
  return s;
}

// ---------------------------------------------------------------------------
// Pretty printer

namespace {

int precedence(BinOp op) {
  switch (op) {
    case BinOp::Or: return 1;
    case BinOp::And: return 2;
    case BinOp::Eq: case BinOp::Ne: return 3;
    case BinOp::Lt: case BinOp::Le: case BinOp::Gt: case BinOp::Ge: return 4;
    case BinOp::Add: case BinOp::Sub: return 5;
    case BinOp::Mul: case BinOp::Div: case BinOp::Mod: return 6;
  }
  return 0;
}

const char* builtin_text(BuiltinFn f) {
  switch (f) {
    case BuiltinFn::Len: return "len";
    case BuiltinFn::Concat: return "concat";
    case BuiltinFn::Substring: return "substring";
    case BuiltinFn::CharAt: return "charAt";
    case BuiltinFn::IndexOf: return "indexOf";
  }
  return "?";
}

void print_expr(std::ostream& os, const Expr& e, int parent_prec) {
  switch (e.kind) {
    case ExprKind::Literal:
      os << render_value(e.literal);
      break;
    case ExprKind::VarRef:
      os << e.name;
      break;
    case ExprKind::FieldRead:
      print_expr(os, *e.kids[0], 100);
      os << "." << e.name;
      break;
    case ExprKind::Unary:
      os << (e.un == UnOp::Neg ? "-" : "!");
      print_expr(os, *e.kids[0], 100);
      break;
    case ExprKind::Binary: {
      int p = precedence(e.bin);
      if (p < parent_prec) os << "(";
      print_expr(os, *e.kids[0], p);
      os << " " << binop_text(e.bin) << " ";
      print_expr(os, *e.kids[1], p + 1);
      if (p < parent_prec) os << ")";
      break;
    }
    case ExprKind::Builtin:
      os << builtin_text(e.builtin) << "(";
      for (size_t i = 0; i < e.kids.size(); ++i) {
        if (i) os << ", ";
        print_expr(os, *e.kids[i], 0);
      }
      os << ")";
      break;
    case ExprKind::MethodCall:
      print_expr(os, *e.kids[0], 100);
      os << "." << e.name << "(";
      for (size_t i = 1; i < e.kids.size(); ++i) {
        if (i > 1) os << ", ";
        print_expr(os, *e.kids[i], 0);
      }
      os << ")";
      break;
    case ExprKind::New:
      os << "new " << e.name << "(";
      for (size_t i = 0; i < e.kids.size(); ++i) {
        if (i) os << ", ";
        print_expr(os, *e.kids[i], 0);
      }
      os << ")";
      break;
  }
}

void print_block(std::ostream& os, const std::vector<StmtPtr>& body,
                 int indent);

void print_stmt(std::ostream& os, const Stmt& s, int indent) {
  std::string pad(indent * 2, ' ');
  os << pad;
  switch (s.kind) {
    case StmtKind::VarDecl:
      os << "var " << type_name(s.decl_type) << " " << s.name << " = ";
      print_expr(os, *s.expr, 0);
      os << ";\n";
      break;
    case StmtKind::Assign:
      os << s.name << " = ";
      print_expr(os, *s.expr, 0);
      os << ";\n";
      break;
    case StmtKind::If:
      os << "if (";
      print_expr(os, *s.expr, 0);
      os << ") {\n";
      print_block(os, s.then_body, indent + 1);
      os << pad << "}";
      if (!s.else_body.empty()) {
        os << " else {\n";
        print_block(os, s.else_body, indent + 1);
        os << pad << "}";
      }
      os << "\n";
      break;
    case StmtKind::While:
      os << "while (";
      print_expr(os, *s.expr, 0);
      os << ") {\n";
      print_block(os, s.then_body, indent + 1);
      os << pad << "}\n";
      break;
    case StmtKind::Return:
      os << "return";
      if (s.expr) {
        os << " ";
        print_expr(os, *s.expr, 0);
      }
      os << ";\n";
      break;
    case StmtKind::Throw:
      os << "throw \"" << escape_string(s.throw_tag) << "\";\n";
      break;
    case StmtKind::ExprStmt:
      print_expr(os, *s.expr, 0);
      os << ";\n";
      break;
  }
}

void print_block(std::ostream& os, const std::vector<StmtPtr>& body,
                 int indent) {
  for (const auto& s : body) print_stmt(os, *s, indent);
}

void print_callable(std::ostream& os, const Callable& c) {
  if (c.is_ctor()) {
    os << "  ctor(";
  } else {
    os << "  method " << c.name << "(";
  }
  for (size_t i = 0; i < c.params.size(); ++i) {
    if (i) os << ", ";
    os << type_name(c.params[i].second) << " " << c.params[i].first;
  }
  os << ")";
  if (!c.is_ctor() && !c.ret.is_void()) os << " : " << type_name(c.ret);
  os << " {\n";
  print_block(os, c.body, 2);
  os << "  }\n";
}

}  // namespace

std::string pretty_print(const SubjectUnit& unit) {
  std::ostringstream os;
  os << "subject " << unit.name << " {\n";
  for (const auto& f : unit.fields)
    os << "  field " << type_name(f.second) << " " << f.first << ";\n";
  for (const auto& c : unit.ctors) print_callable(os, c);
  for (const auto& m : unit.methods) print_callable(os, m);
  os << "}\n";
  return os.str();
}

std::string pretty_print(const Corpus& corpus) {
  std::string out;
  for (const auto& [name, unit] : corpus.units) out += pretty_print(unit);
  return out;
}

// ---------------------------------------------------------------------------
// Structural equality (ignores spans, node ids, and typing annotations)

namespace {

bool eq_expr(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.name != b.name) return false;
  if (a.kind == ExprKind::Literal && a.literal != b.literal) return false;
  if (a.kind == ExprKind::Binary && a.bin != b.bin) return false;
  if (a.kind == ExprKind::Unary && a.un != b.un) return false;
  if (a.kind == ExprKind::Builtin && a.builtin != b.builtin) return false;
  if (a.kids.size() != b.kids.size()) return false;
  for (size_t i = 0; i < a.kids.size(); ++i)
    if (!eq_expr(*a.kids[i], *b.kids[i])) return false;
  return true;
}

bool eq_block(const std::vector<StmtPtr>& a, const std::vector<StmtPtr>& b);

bool eq_stmt(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind || a.name != b.name || a.throw_tag != b.throw_tag)
    return false;
  if (a.kind == StmtKind::VarDecl && a.decl_type != b.decl_type) return false;
  if (static_cast<bool>(a.expr) != static_cast<bool>(b.expr)) return false;
  if (a.expr && !eq_expr(*a.expr, *b.expr)) return false;
  return eq_block(a.then_body, b.then_body) && eq_block(a.else_body, b.else_body);
}

bool eq_block(const std::vector<StmtPtr>& a, const std::vector<StmtPtr>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!eq_stmt(*a[i], *b[i])) return false;
  return true;
}

bool eq_callable(const Callable& a, const Callable& b) {
  if (a.name != b.name || a.ret != b.ret || a.params != b.params) return false;
  return eq_block(a.body, b.body);
}

}  // namespace

bool structurally_equal(const SubjectUnit& a, const SubjectUnit& b) {
  if (a.name != b.name || a.fields != b.fields) return false;
  if (a.ctors.size() != b.ctors.size() || a.methods.size() != b.methods.size())
    return false;
  for (size_t i = 0; i < a.ctors.size(); ++i)
    if (!eq_callable(a.ctors[i], b.ctors[i])) return false;
  for (size_t i = 0; i < a.methods.size(); ++i)
    if (!eq_callable(a.methods[i], b.methods[i])) return false;
  return true;
}

}  // namespace hmx
