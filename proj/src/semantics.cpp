#include "hmx/semantics.hpp"

#include <algorithm>

namespace hmx {

std::string target_name(const CoverageTarget& t) {
  if (t.kind == CoverageTarget::Kind::Line)
    return "L" + std::to_string(t.id);
  return "B" + std::to_string(t.id) + (t.outcome ? "T" : "F");
}

namespace {

bool can_widen(const TypeTag& from, const TypeTag& to) {
  if (from == to) return true;
  if (from.kind == Prim::Int && (to.kind == Prim::Long || to.kind == Prim::Double))
    return true;
  if (from.kind == Prim::Long && to.kind == Prim::Double) return true;
  return false;
}

TypeTag wider(const TypeTag& a, const TypeTag& b) {
  if (a.kind == Prim::Double || b.kind == Prim::Double)
    return TypeTag::of(Prim::Double);
  if (a.kind == Prim::Long || b.kind == Prim::Long)
    return TypeTag::of(Prim::Long);
  return TypeTag::of(Prim::Int);
}

bool is_number(const TypeTag& t) {
  return t.kind == Prim::Int || t.kind == Prim::Long || t.kind == Prim::Double;
}

[[noreturn]] void mismatch(const Expr& e, const std::string& expected,
                           const std::string& found) {
  throw CompileError("TypeMismatch", e.line, e.col,
                     "expected " + expected + ", found " + found);
}

class Checker {
 public:
  explicit Checker(Corpus& corpus) : corpus_(corpus) {}

  CorpusInfo run() {
    CorpusInfo info;
    for (auto& [name, unit] : corpus_.units) check_unit_signatures(unit);
    for (auto& [name, unit] : corpus_.units) {
      UnitInfo ui = check_unit(unit);
      for (size_t i = 0; i < unit.callable_count(); ++i) {
        const Callable& c = unit.callable(i);
        CallableRef ref;
        ref.unit = name;
        ref.name = c.name;
        ref.is_ctor = c.is_ctor();
        ref.index =
            static_cast<int>(c.is_ctor() ? i : i - unit.ctors.size());
        for (const auto& p : c.params) ref.params.push_back(p.second);
        ref.ret = c.is_ctor() ? TypeTag::subject_of(name) : c.ret;
        info.signatures[signature_key(c, name)] = ref;
      }
      info.units.emplace(name, std::move(ui));
    }
    return info;
  }

 private:
  void resolve_type(const TypeTag& t, int line) {
    if (t.kind == Prim::Subject && !corpus_.units.count(t.subject))
      throw CompileError("UnresolvedType", line, 0,
                         "unknown subject type '" + t.subject + "'");
  }

  void check_unit_signatures(SubjectUnit& unit) {
    if (unit.ctors.empty())
      throw CompileError("MissingConstructor", 1, 1,
                         "subject '" + unit.name + "' has no constructor");
    for (auto& f : unit.fields) resolve_type(f.second, 1);
    for (size_t i = 0; i < unit.callable_count(); ++i) {
      Callable& c = unit.callable(i);
      for (auto& p : c.params) resolve_type(p.second, c.line);
      if (!c.is_ctor()) resolve_type(c.ret, c.line);
    }
  }

  UnitInfo check_unit(SubjectUnit& unit) {
    UnitInfo ui;
    ui.name = unit.name;
    owner_ = &unit;
    for (size_t i = 0; i < unit.callable_count(); ++i) {
      Callable& c = unit.callable(i);
      check_callable(c);
      number_branches(c.body);
      number_nodes(c.body);
      ui.cdg.push_back(build_cdg(c));
      collect_lines(c.body, static_cast<int>(i), ControlDep{}, ui);
      for (int b : ui.cdg.back().branch_ids)
        ui.branch_callable[b] = static_cast<int>(i);
    }
    ui.branch_count = 0;
    for (const auto& g : ui.cdg)
      ui.branch_count += static_cast<int>(g.branch_ids.size());
    ui.targets = enumerate_targets(unit);
    ui.node_count = node_counter_;
    return ui;
  }

  // --- typing ---

  void check_callable(Callable& c) {
    scopes_.clear();
    scopes_.push_back({});
    for (auto& p : c.params) scopes_.back()[p.first] = p.second;
    ret_ = c.is_ctor() ? TypeTag::of(Prim::Void) : c.ret;
    bool returns = check_block(c.body);
    if (!ret_.is_void() && !returns)
      throw CompileError("MissingReturn", c.line, 0,
                         "'" + c.name + "' does not return on every path");
    scopes_.clear();
  }

  // Returns true when the block definitely returns or throws.
  bool check_block(std::vector<StmtPtr>& body) {
    scopes_.push_back({});
    bool returns = false;
    for (auto& s : body) {
      if (check_stmt(*s)) returns = true;
    }
    scopes_.pop_back();
    return returns;
  }

  bool check_stmt(Stmt& s) {
    switch (s.kind) {
      case StmtKind::VarDecl: {
        check_expr(*s.expr);
        if (!can_widen(s.expr->type, s.decl_type)) mismatch_stmt(s);
        if (scopes_.back().count(s.name))
          throw CompileError("DuplicateName", s.line, 0,
                             "redeclaration of '" + s.name + "'");
        scopes_.back()[s.name] = s.decl_type;
        return false;
      }
      case StmtKind::Assign: {
        check_expr(*s.expr);
        TypeTag target;
        if (lookup_local(s.name, &target)) {
          s.assign_to_field = false;
        } else if (lookup_field(s.name, &target)) {
          s.assign_to_field = true;
        } else {
          throw CompileError("UnresolvedName", s.line, 0,
                             "unknown variable '" + s.name + "'");
        }
        if (!can_widen(s.expr->type, target)) mismatch_stmt(s);
        return false;
      }
      case StmtKind::If: {
        check_expr(*s.expr);
        if (s.expr->type.kind != Prim::Boolean)
          mismatch(*s.expr, "boolean", type_name(s.expr->type));
        bool t = check_block(s.then_body);
        bool e = !s.else_body.empty() && check_block(s.else_body);
        return t && e && !s.else_body.empty();
      }
      case StmtKind::While: {
        check_expr(*s.expr);
        if (s.expr->type.kind != Prim::Boolean)
          mismatch(*s.expr, "boolean", type_name(s.expr->type));
        check_block(s.then_body);
        return false;
      }
      case StmtKind::Return: {
        if (ret_.is_void()) {
          if (s.expr)
            throw CompileError("TypeMismatch", s.line, 0,
                               "void callable returns a value");
        } else {
          if (!s.expr)
            throw CompileError("TypeMismatch", s.line, 0,
                               "missing return value");
          check_expr(*s.expr);
          if (!can_widen(s.expr->type, ret_)) mismatch_stmt(s);
        }
        return true;
      }
      case StmtKind::Throw:
        return true;
      case StmtKind::ExprStmt:
        check_expr(*s.expr);
        return false;
    }
    return false;
  }

  [[noreturn]] void mismatch_stmt(const Stmt& s) {
    throw CompileError("TypeMismatch", s.line, 0,
                       "incompatible types in statement");
  }

  bool lookup_local(const std::string& name, TypeTag* out) {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) {
        *out = f->second;
        return true;
      }
    }
    return false;
  }

  bool lookup_field(const std::string& name, TypeTag* out) {
    for (const auto& f : owner_->fields) {
      if (f.first == name) {
        *out = f.second;
        return true;
      }
    }
    return false;
  }

  void check_expr(Expr& e) {
    switch (e.kind) {
      case ExprKind::Literal:
        e.type = TypeTag::of(e.literal.prim());
        return;
      case ExprKind::VarRef: {
        TypeTag t;
        if (lookup_local(e.name, &t)) {
          e.var_is_field = false;
        } else if (lookup_field(e.name, &t)) {
          e.var_is_field = true;
        } else {
          throw CompileError("UnresolvedName", e.line, e.col,
                             "unknown variable '" + e.name + "'");
        }
        e.type = t;
        return;
      }
      case ExprKind::FieldRead: {
        check_expr(*e.kids[0]);
        const TypeTag& rt = e.kids[0]->type;
        if (rt.kind != Prim::Subject)
          mismatch(e, "subject value", type_name(rt));
        const SubjectUnit& u = corpus_.units.at(rt.subject);
        for (const auto& f : u.fields) {
          if (f.first == e.name) {
            e.type = f.second;
            return;
          }
        }
        throw CompileError("UnresolvedName", e.line, e.col,
                           "no field '" + e.name + "' in " + rt.subject);
      }
      case ExprKind::Unary: {
        check_expr(*e.kids[0]);
        const TypeTag& t = e.kids[0]->type;
        if (e.un == UnOp::Neg) {
          if (!is_number(t)) mismatch(e, "number", type_name(t));
          e.type = t;
        } else {
          if (t.kind != Prim::Boolean) mismatch(e, "boolean", type_name(t));
          e.type = t;
        }
        return;
      }
      case ExprKind::Binary:
        check_binary(e);
        return;
      case ExprKind::Builtin:
        check_builtin(e);
        return;
      case ExprKind::MethodCall: {
        check_expr(*e.kids[0]);
        const TypeTag& rt = e.kids[0]->type;
        if (rt.kind != Prim::Subject)
          mismatch(e, "subject value", type_name(rt));
        const SubjectUnit& u = corpus_.units.at(rt.subject);
        int idx = -1;
        for (size_t i = 0; i < u.methods.size(); ++i) {
          if (u.methods[i].name == e.name) {
            idx = static_cast<int>(i);
            break;
          }
        }
        if (idx < 0)
          throw CompileError("UnresolvedName", e.line, e.col,
                             "no method '" + e.name + "' in " + rt.subject);
        const Callable& m = u.methods[idx];
        check_args(e, m.params, 1);
        e.resolved = idx;
        e.type = m.ret;
        return;
      }
      case ExprKind::New: {
        auto it = corpus_.units.find(e.name);
        if (it == corpus_.units.end())
          throw CompileError("UnresolvedType", e.line, e.col,
                             "unknown subject '" + e.name + "'");
        const SubjectUnit& u = it->second;
        for (auto& k : e.kids) check_expr(*k);
        int idx = -1;
        for (size_t i = 0; i < u.ctors.size(); ++i) {
          if (args_match(e, u.ctors[i].params, 0)) {
            idx = static_cast<int>(i);
            break;
          }
        }
        if (idx < 0)
          throw CompileError("TypeMismatch", e.line, e.col,
                             "no matching constructor for " + e.name);
        e.resolved = idx;
        e.type = TypeTag::subject_of(e.name);
        return;
      }
    }
  }

  bool args_match(const Expr& e,
                  const std::vector<std::pair<std::string, TypeTag>>& params,
                  size_t first_kid) {
    if (e.kids.size() - first_kid != params.size()) return false;
    for (size_t i = 0; i < params.size(); ++i)
      if (!can_widen(e.kids[first_kid + i]->type, params[i].second))
        return false;
    return true;
  }

  void check_args(Expr& e,
                  const std::vector<std::pair<std::string, TypeTag>>& params,
                  size_t first_kid) {
    for (size_t i = first_kid; i < e.kids.size(); ++i) check_expr(*e.kids[i]);
    if (!args_match(e, params, first_kid))
      throw CompileError("TypeMismatch", e.line, e.col,
                         "argument types do not match '" + e.name + "'");
  }

  void check_binary(Expr& e) {
    check_expr(*e.kids[0]);
    check_expr(*e.kids[1]);
    const TypeTag& a = e.kids[0]->type;
    const TypeTag& b = e.kids[1]->type;
    BinOp op = e.bin;
    if (is_arith(op)) {
      if (!is_number(a)) mismatch(*e.kids[0], "number", type_name(a));
      if (!is_number(b)) mismatch(*e.kids[1], "number", type_name(b));
      TypeTag w = wider(a, b);
      if (op == BinOp::Mod && w.kind == Prim::Double)
        mismatch(e, "integral operands for %", "double");
      e.type = w;
      return;
    }
    if (is_relational(op)) {
      bool eq_only = (op == BinOp::Eq || op == BinOp::Ne);
      bool ok = (is_number(a) && is_number(b)) ||
                (a.kind == Prim::Char && b.kind == Prim::Char);
      if (eq_only)
        ok = ok || (a.kind == Prim::Boolean && b.kind == Prim::Boolean) ||
             (a.kind == Prim::String && b.kind == Prim::String);
      else
        ok = ok || (a.kind == Prim::String && b.kind == Prim::String);
      if (!ok) mismatch(e, "comparable operands", type_name(a) + " vs " + type_name(b));
      e.type = TypeTag::of(Prim::Boolean);
      return;
    }
    // And / Or
    if (a.kind != Prim::Boolean) mismatch(*e.kids[0], "boolean", type_name(a));
    if (b.kind != Prim::Boolean) mismatch(*e.kids[1], "boolean", type_name(b));
    e.type = TypeTag::of(Prim::Boolean);
  }

  void check_builtin(Expr& e) {
    for (auto& k : e.kids) check_expr(*k);
    auto want = [&](size_t n) {
      if (e.kids.size() != n)
        throw CompileError("TypeMismatch", e.line, e.col,
                           "wrong number of builtin arguments");
    };
    auto str_at = [&](size_t i) {
      if (e.kids[i]->type.kind != Prim::String)
        mismatch(*e.kids[i], "string", type_name(e.kids[i]->type));
    };
    auto int_at = [&](size_t i) {
      if (e.kids[i]->type.kind != Prim::Int)
        mismatch(*e.kids[i], "int", type_name(e.kids[i]->type));
    };
    switch (e.builtin) {
      case BuiltinFn::Len:
        want(1); str_at(0);
        e.type = TypeTag::of(Prim::Int);
        return;
      case BuiltinFn::Concat:
        want(2); str_at(0); str_at(1);
        e.type = TypeTag::of(Prim::String);
        return;
      case BuiltinFn::Substring:
        want(3); str_at(0); int_at(1); int_at(2);
        e.type = TypeTag::of(Prim::String);
        return;
      case BuiltinFn::CharAt:
        want(2); str_at(0); int_at(1);
        e.type = TypeTag::of(Prim::Char);
        return;
      case BuiltinFn::IndexOf:
        want(2); str_at(0); str_at(1);
        e.type = TypeTag::of(Prim::Int);
        return;
    }
  }

  // --- numbering ---

  void number_branches(std::vector<StmtPtr>& body) {
    for (auto& s : body) {
      if (s->kind == StmtKind::If || s->kind == StmtKind::While)
        s->branch_id = branch_counter_++;
      number_branches(s->then_body);
      number_branches(s->else_body);
    }
  }

  void number_expr(Expr& e) {
    e.node_id = node_counter_++;
    for (auto& k : e.kids) number_expr(*k);
  }

  void number_nodes(std::vector<StmtPtr>& body) {
    for (auto& s : body) {
      if (s->expr) number_expr(*s->expr);
      number_nodes(s->then_body);
      number_nodes(s->else_body);
    }
  }

  void collect_lines(const std::vector<StmtPtr>& body, int callable,
                     ControlDep ctrl, UnitInfo& ui) {
    for (const auto& s : body) {
      if (!ui.line_ctrl.count(s->line)) {
        ui.line_ctrl[s->line] = ctrl;
        ui.line_callable[s->line] = callable;
      }
      if (s->kind == StmtKind::If) {
        collect_lines(s->then_body, callable, {s->branch_id, true}, ui);
        collect_lines(s->else_body, callable, {s->branch_id, false}, ui);
      } else if (s->kind == StmtKind::While) {
        collect_lines(s->then_body, callable, {s->branch_id, true}, ui);
      }
    }
  }

  Corpus& corpus_;
  SubjectUnit* owner_ = nullptr;
  TypeTag ret_;
  std::vector<std::map<std::string, TypeTag>> scopes_;
  int branch_counter_ = 0;
  int node_counter_ = 0;
};

void cdg_walk(const std::vector<StmtPtr>& body, ControlDep ctrl, int depth,
              ControlDependencyGraph& g) {
  for (const auto& s : body) {
    if (s->kind == StmtKind::If || s->kind == StmtKind::While) {
      g.branch_ids.push_back(s->branch_id);
      g.parent_of[s->branch_id] = ctrl;
      g.depth_of[s->branch_id] = depth;
      cdg_walk(s->then_body, {s->branch_id, true}, depth + 1, g);
      if (s->kind == StmtKind::If)
        cdg_walk(s->else_body, {s->branch_id, false}, depth + 1, g);
    } else {
      cdg_walk(s->then_body, ctrl, depth, g);
      cdg_walk(s->else_body, ctrl, depth, g);
    }
  }
}

}  // namespace

ControlDependencyGraph build_cdg(const Callable& callable) {
  ControlDependencyGraph g;
  cdg_walk(callable.body, ControlDep{}, 0, g);
  return g;
}

namespace {

void target_lines(const std::vector<StmtPtr>& body, std::set<int>& lines) {
  for (const auto& s : body) {
    lines.insert(s->line);
    target_lines(s->then_body, lines);
    target_lines(s->else_body, lines);
  }
}

}  // namespace

std::vector<CoverageTarget> enumerate_targets(const SubjectUnit& unit) {
  std::vector<CoverageTarget> out;
  for (size_t i = 0; i < unit.callable_count(); ++i) {
    const Callable& c = unit.callable(i);
    std::set<int> lines;
    target_lines(c.body, lines);
    for (int ln : lines) out.push_back(CoverageTarget::line((int)i, ln));
    ControlDependencyGraph g = build_cdg(c);
    for (int b : g.branch_ids) {
      out.push_back(CoverageTarget::branch((int)i, b, true));
      out.push_back(CoverageTarget::branch((int)i, b, false));
    }
  }
  return out;
}

CorpusInfo typecheck(Corpus& corpus) {
  Checker checker(corpus);
  return checker.run();
}

}  // namespace hmx
