#include "hmx/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <set>

namespace hmx {

namespace {

[[noreturn]] void syntax_error(int line, int col, const std::string& msg) {
  throw CompileError("SyntaxError", line, col, msg);
}

bool is_ident_start(char c) { return std::isalpha((unsigned char)c) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum((unsigned char)c) || c == '_'; }

}  // namespace

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (src[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (is_ident_start(c)) {
      size_t j = i;
      while (j < src.size() && is_ident_char(src[j])) ++j;
      t.kind = Tok::Ident;
      t.text = src.substr(i, j - i);
      advance(j - i);
      if (t.text == "true" || t.text == "false") {
        // Boolean literals ride the Int token kind; the payload is a bool.
        t.kind = Tok::Int;
        t.literal = Value::of_bool(t.text == "true");
      }
      out.push_back(std::move(t));
      continue;
    }
    if (std::isdigit((unsigned char)c)) {
      size_t j = i;
      bool is_double = false;
      while (j < src.size() && std::isdigit((unsigned char)src[j])) ++j;
      if (j < src.size() && src[j] == '.' && j + 1 < src.size() &&
          std::isdigit((unsigned char)src[j + 1])) {
        is_double = true;
        ++j;
        while (j < src.size() && std::isdigit((unsigned char)src[j])) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit((unsigned char)src[k])) {
          is_double = true;
          j = k;
          while (j < src.size() && std::isdigit((unsigned char)src[j])) ++j;
        }
      }
      std::string text = src.substr(i, j - i);
      if (is_double) {
        t.kind = Tok::Double;
        t.literal = Value::of_double(std::strtod(text.c_str(), nullptr));
        advance(j - i);
      } else if (j < src.size() && (src[j] == 'L' || src[j] == 'l')) {
        t.kind = Tok::Long;
        t.literal = Value::of_long(std::strtoll(text.c_str(), nullptr, 10));
        advance(j - i + 1);
      } else {
        t.kind = Tok::Int;
        long long v = std::strtoll(text.c_str(), nullptr, 10);
        t.literal = Value::of_int(static_cast<int32_t>(v));
        advance(j - i);
      }
      out.push_back(std::move(t));
      continue;
    }
    if (c == '"') {
      std::string s;
      size_t j = i + 1;
      while (j < src.size() && src[j] != '"') {
        char d = src[j];
        if (d == '\\' && j + 1 < src.size()) {
          char e = src[j + 1];
          switch (e) {
            case 'n': s += '\n'; break;
            case 't': s += '\t'; break;
            case 'r': s += '\r'; break;
            case '"': s += '"'; break;
            case '\\': s += '\\'; break;
            default: s += e;
          }
          j += 2;
        } else if (d == '\n') {
          syntax_error(line, col, "unterminated string literal");
        } else {
          s += d;
          ++j;
        }
      }
      if (j >= src.size()) syntax_error(line, col, "unterminated string literal");
      t.kind = Tok::String;
      t.literal = Value::of_string(std::move(s));
      advance(j - i + 1);
      out.push_back(std::move(t));
      continue;
    }
    if (c == '\'') {
      size_t j = i + 1;
      uint32_t cp = 0;
      if (j < src.size() && src[j] == '\\') {
        if (j + 1 >= src.size()) syntax_error(line, col, "bad char literal");
        char e = src[j + 1];
        if (e == 'u') {
          if (j + 6 >= src.size()) syntax_error(line, col, "bad char literal");
          cp = static_cast<uint32_t>(
              std::strtoul(src.substr(j + 2, 4).c_str(), nullptr, 16));
          j += 6;
        } else {
          switch (e) {
            case 'n': cp = '\n'; break;
            case 't': cp = '\t'; break;
            case 'r': cp = '\r'; break;
            case '\'': cp = '\''; break;
            case '\\': cp = '\\'; break;
            default: cp = static_cast<uint32_t>(e);
          }
          j += 2;
        }
      } else if (j < src.size()) {
        cp = static_cast<uint32_t>(static_cast<unsigned char>(src[j]));
        ++j;
      }
      if (j >= src.size() || src[j] != '\'')
        syntax_error(line, col, "bad char literal");
      t.kind = Tok::Char;
      t.literal = Value::of_char(cp);
      advance(j - i + 1);
      out.push_back(std::move(t));
      continue;
    }
    // Punctuation, longest first.
    static const char* two[] = {"==", "!=", "<=", ">=", "&&", "||"};
    std::string p(1, c);
    for (const char* s2 : two) {
      if (src.compare(i, 2, s2) == 0) {
        p = s2;
        break;
      }
    }
    if (std::string("{}()[],;.:=<>!+-*/%&|").find(c) == std::string::npos)
      syntax_error(line, col, std::string("unexpected character '") + c + "'");
    t.kind = Tok::Punct;
    t.text = p;
    advance(p.size());
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(lex(src)) {}

  Corpus parse_corpus() {
    Corpus c;
    while (!at_end()) {
      SubjectUnit u = parse_subject();
      if (c.units.count(u.name))
        throw CompileError("DuplicateName", cur().line, cur().col,
                           "subject '" + u.name + "' defined twice");
      c.units.emplace(u.name, std::move(u));
    }
    return c;
  }

  SubjectUnit parse_subject() {
    expect_kw("subject");
    SubjectUnit u;
    u.name = expect_ident("subject name");
    expect_punct("{");
    std::set<std::string> member_names;
    while (!is_punct("}")) {
      if (is_kw("field")) {
        next();
        TypeTag t = parse_type();
        std::string name = expect_ident("field name");
        if (!member_names.insert("f:" + name).second)
          throw CompileError("DuplicateName", cur().line, cur().col,
                             "duplicate field '" + name + "'");
        expect_punct(";");
        u.fields.emplace_back(name, t);
      } else if (is_kw("ctor")) {
        int line = cur().line;
        next();
        Callable c;
        c.name = "<init>";
        c.line = line;
        parse_params(c);
        c.ret = TypeTag::subject_of(u.name);
        c.body = parse_block();
        u.ctors.push_back(std::move(c));
      } else if (is_kw("method")) {
        int line = cur().line;
        next();
        Callable m;
        m.line = line;
        m.name = expect_ident("method name");
        if (!member_names.insert("m:" + m.name).second)
          throw CompileError("DuplicateName", cur().line, cur().col,
                             "duplicate method '" + m.name + "'");
        parse_params(m);
        if (is_punct(":")) {
          next();
          m.ret = parse_type();
        } else {
          m.ret = TypeTag::of(Prim::Void);
        }
        m.body = parse_block();
        u.methods.push_back(std::move(m));
      } else {
        syntax_error(cur().line, cur().col,
                     "expected 'field', 'ctor', 'method', or '}'");
      }
    }
    expect_punct("}");
    return u;
  }

  bool at_end() const { return cur().kind == Tok::End; }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(size_t n = 1) const {
    size_t i = pos_ + n;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  void next() { if (pos_ + 1 < toks_.size()) ++pos_; }

  bool is_punct(const std::string& p) const {
    return cur().kind == Tok::Punct && cur().text == p;
  }
  bool is_kw(const std::string& k) const {
    return cur().kind == Tok::Ident && cur().text == k;
  }
  void expect_punct(const std::string& p) {
    if (!is_punct(p))
      syntax_error(cur().line, cur().col, "expected '" + p + "'");
    next();
  }
  void expect_kw(const std::string& k) {
    if (!is_kw(k)) syntax_error(cur().line, cur().col, "expected '" + k + "'");
    next();
  }
  std::string expect_ident(const std::string& what) {
    if (cur().kind != Tok::Ident)
      syntax_error(cur().line, cur().col, "expected " + what);
    std::string s = cur().text;
    next();
    return s;
  }

  bool is_type_name(const std::string& s) const {
    return s == "int" || s == "long" || s == "double" || s == "boolean" ||
           s == "char" || s == "string";
  }

  TypeTag parse_type() {
    if (cur().kind != Tok::Ident)
      syntax_error(cur().line, cur().col, "expected type name");
    std::string s = cur().text;
    next();
    if (s == "int") return TypeTag::of(Prim::Int);
    if (s == "long") return TypeTag::of(Prim::Long);
    if (s == "double") return TypeTag::of(Prim::Double);
    if (s == "boolean") return TypeTag::of(Prim::Boolean);
    if (s == "char") return TypeTag::of(Prim::Char);
    if (s == "string") return TypeTag::of(Prim::String);
    return TypeTag::subject_of(s);
  }

  void parse_params(Callable& c) {
    expect_punct("(");
    std::set<std::string> names;
    while (!is_punct(")")) {
      TypeTag t = parse_type();
      std::string name = expect_ident("parameter name");
      if (!names.insert(name).second)
        throw CompileError("DuplicateName", cur().line, cur().col,
                           "duplicate parameter '" + name + "'");
      c.params.emplace_back(name, t);
      if (is_punct(","))
        next();
      else if (!is_punct(")"))
        syntax_error(cur().line, cur().col, "expected ',' or ')'");
    }
    expect_punct(")");
  }

  std::vector<StmtPtr> parse_block() {
    expect_punct("{");
    std::vector<StmtPtr> body;
    while (!is_punct("}")) body.push_back(parse_stmt());
    expect_punct("}");
    return body;
  }

  StmtPtr parse_stmt() {
    auto s = std::make_unique<Stmt>();
    s->line = cur().line;
    if (is_kw("var")) {
      next();
      s->kind = StmtKind::VarDecl;
      s->decl_type = parse_type();
      s->name = expect_ident("variable name");
      expect_punct("=");
      s->expr = parse_expr();
      expect_punct(";");
      return s;
    }
    if (is_kw("if")) {
      next();
      s->kind = StmtKind::If;
      expect_punct("(");
      s->expr = parse_expr();
      expect_punct(")");
      s->then_body = parse_block();
      if (is_kw("else")) {
        next();
        s->else_body = parse_block();
      }
      return s;
    }
    if (is_kw("while")) {
      next();
      s->kind = StmtKind::While;
      expect_punct("(");
      s->expr = parse_expr();
      expect_punct(")");
      s->then_body = parse_block();
      return s;
    }
    if (is_kw("return")) {
      next();
      s->kind = StmtKind::Return;
      if (!is_punct(";")) s->expr = parse_expr();
      expect_punct(";");
      return s;
    }
    if (is_kw("throw")) {
      next();
      s->kind = StmtKind::Throw;
      if (cur().kind != Tok::String)
        syntax_error(cur().line, cur().col, "expected exception tag string");
      s->throw_tag = cur().literal.as_string();
      next();
      expect_punct(";");
      return s;
    }
    // Assignment: IDENT '=' ... (but not '==').
    if (cur().kind == Tok::Ident && peek().kind == Tok::Punct &&
        peek().text == "=") {
      s->kind = StmtKind::Assign;
      s->name = cur().text;
      next();
      next();
      s->expr = parse_expr();
      expect_punct(";");
      return s;
    }
    s->kind = StmtKind::ExprStmt;
    s->expr = parse_expr();
    expect_punct(";");
    return s;
  }

  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr make_bin(BinOp op, ExprPtr l, ExprPtr r) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::Binary;
    e->bin = op;
    e->line = l->line;
    e->col = l->col;
    e->kids.push_back(std::move(l));
    e->kids.push_back(std::move(r));
    return e;
  }

  ExprPtr parse_or() {
    auto l = parse_and();
    while (is_punct("||")) {
      next();
      l = make_bin(BinOp::Or, std::move(l), parse_and());
    }
    return l;
  }

  ExprPtr parse_and() {
    auto l = parse_cmp();
    while (is_punct("&&")) {
      next();
      l = make_bin(BinOp::And, std::move(l), parse_cmp());
    }
    return l;
  }

  ExprPtr parse_cmp() {
    auto l = parse_add();
    while (cur().kind == Tok::Punct) {
      BinOp op;
      if (cur().text == "==") op = BinOp::Eq;
      else if (cur().text == "!=") op = BinOp::Ne;
      else if (cur().text == "<") op = BinOp::Lt;
      else if (cur().text == "<=") op = BinOp::Le;
      else if (cur().text == ">") op = BinOp::Gt;
      else if (cur().text == ">=") op = BinOp::Ge;
      else break;
      next();
      l = make_bin(op, std::move(l), parse_add());
    }
    return l;
  }

  ExprPtr parse_add() {
    auto l = parse_mul();
    while (is_punct("+") || is_punct("-")) {
      BinOp op = cur().text == "+" ? BinOp::Add : BinOp::Sub;
      next();
      l = make_bin(op, std::move(l), parse_mul());
    }
    return l;
  }

  ExprPtr parse_mul() {
    auto l = parse_unary();
    while (is_punct("*") || is_punct("/") || is_punct("%")) {
      BinOp op = cur().text == "*" ? BinOp::Mul
                 : cur().text == "/" ? BinOp::Div
                                     : BinOp::Mod;
      next();
      l = make_bin(op, std::move(l), parse_unary());
    }
    return l;
  }

  ExprPtr parse_unary() {
    if (is_punct("-") || is_punct("!")) {
      auto e = std::make_unique<Expr>();
      e->kind = ExprKind::Unary;
      e->un = cur().text == "-" ? UnOp::Neg : UnOp::Not;
      e->line = cur().line;
      e->col = cur().col;
      next();
      e->kids.push_back(parse_unary());
      return e;
    }
    return parse_postfix();
  }

  ExprPtr parse_postfix() {
    auto e = parse_primary();
    while (is_punct(".")) {
      next();
      std::string name = expect_ident("member name");
      auto p = std::make_unique<Expr>();
      p->name = name;
      p->line = e->line;
      p->col = e->col;
      if (is_punct("(")) {
        p->kind = ExprKind::MethodCall;
        p->kids.push_back(std::move(e));
        parse_args(p->kids);
      } else {
        p->kind = ExprKind::FieldRead;
        p->kids.push_back(std::move(e));
      }
      e = std::move(p);
    }
    return e;
  }

  void parse_args(std::vector<ExprPtr>& out) {
    expect_punct("(");
    while (!is_punct(")")) {
      out.push_back(parse_expr());
      if (is_punct(","))
        next();
      else if (!is_punct(")"))
        syntax_error(cur().line, cur().col, "expected ',' or ')'");
    }
    expect_punct(")");
  }

  ExprPtr parse_primary() {
    auto e = std::make_unique<Expr>();
    e->line = cur().line;
    e->col = cur().col;
    switch (cur().kind) {
      case Tok::Int:
      case Tok::Long:
      case Tok::Double:
      case Tok::Char:
      case Tok::String:
        e->kind = ExprKind::Literal;
        e->literal = cur().literal;
        next();
        return e;
      case Tok::Ident: {
        std::string name = cur().text;
        if (name == "new") {
          next();
          e->kind = ExprKind::New;
          e->name = expect_ident("subject name");
          parse_args(e->kids);
          return e;
        }
        static const std::map<std::string, BuiltinFn> builtins = {
            {"len", BuiltinFn::Len},
            {"concat", BuiltinFn::Concat},
            {"substring", BuiltinFn::Substring},
            {"charAt", BuiltinFn::CharAt},
            {"indexOf", BuiltinFn::IndexOf}};
        auto it = builtins.find(name);
        if (it != builtins.end() && peek().kind == Tok::Punct &&
            peek().text == "(") {
          next();
          e->kind = ExprKind::Builtin;
          e->builtin = it->second;
          parse_args(e->kids);
          return e;
        }
        next();
        e->kind = ExprKind::VarRef;
        e->name = name;
        return e;
      }
      case Tok::Punct:
        if (cur().text == "(") {
          next();
          auto inner = parse_expr();
          expect_punct(")");
          return inner;
        }
        break;
      case Tok::End:
        break;
    }
    syntax_error(cur().line, cur().col, "expected expression");
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

}  // namespace

SubjectUnit parse_subject(const std::string& source) {
  Parser p(source);
  SubjectUnit u = p.parse_subject();
  if (!p.at_end())
    throw CompileError("SyntaxError", 0, 0, "trailing input after subject");
  u.source_span = {0, source.size()};
  return u;
}

Corpus parse_corpus(const std::string& source) {
  Parser p(source);
  return p.parse_corpus();
}

}  // namespace hmx
