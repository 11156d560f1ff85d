#include "hmx/runtime.hpp"

#include <algorithm>
#include <cmath>

namespace hmx {

double normalize_distance(double d) { return d / (d + 1.0); }

namespace {

constexpr double kK = 1.0;  // unsatisfied-comparison offset

struct RuntimeFault {
  std::string tag;
};
struct AbortFault {
  std::string reason;
};

int levenshtein(const std::string& a, const std::string& b) {
  // Distances feed a search gradient; cap the DP size for long strings.
  size_t na = std::min<size_t>(a.size(), 256);
  size_t nb = std::min<size_t>(b.size(), 256);
  std::vector<int> prev(nb + 1), cur(nb + 1);
  for (size_t j = 0; j <= nb; ++j) prev[j] = static_cast<int>(j);
  for (size_t i = 1; i <= na; ++i) {
    cur[0] = static_cast<int>(i);
    for (size_t j = 1; j <= nb; ++j) {
      int cost = a[i - 1] == b[j - 1] ? 0 : 1;
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost});
    }
    std::swap(prev, cur);
  }
  int d = prev[nb] + static_cast<int>(std::max(a.size(), na) - na) +
          static_cast<int>(std::max(b.size(), nb) - nb);
  return d;
}

struct PredResult {
  bool value = false;
  double d_true = 0.0;
  double d_false = 0.0;
};

struct Instance {
  std::string subject;
  std::map<std::string, Value> fields;
};

Value default_value(const TypeTag& t) {
  switch (t.kind) {
    case Prim::Int: return Value::of_int(0);
    case Prim::Long: return Value::of_long(0);
    case Prim::Double: return Value::of_double(0.0);
    case Prim::Boolean: return Value::of_bool(false);
    case Prim::Char: return Value::of_char(0);
    case Prim::String: return Value::of_string("");
    default: return Value::null();
  }
}

Value coerce(const Value& v, const TypeTag& to) {
  switch (to.kind) {
    case Prim::Long:
      if (v.prim() == Prim::Int) return Value::of_long(v.as_int());
      return v;
    case Prim::Double:
      if (v.prim() == Prim::Int) return Value::of_double(v.as_int());
      if (v.prim() == Prim::Long)
        return Value::of_double(static_cast<double>(v.as_long()));
      return v;
    default:
      return v;
  }
}

class Interp {
 public:
  Interp(const Corpus& corpus, const CorpusInfo& info,
         const SandboxLimits& limits, int watch_node, ExecutionTrace& trace)
      : corpus_(corpus),
        info_(info),
        limits_(limits),
        watch_(watch_node),
        trace_(trace) {}

  Value call(const CallableRef& ref, int self_obj, std::vector<Value> args) {
    const SubjectUnit& unit = corpus_.units.at(ref.unit);
    const Callable& c =
        ref.is_ctor ? unit.ctors[ref.index] : unit.methods[ref.index];
    return run_callable(unit, c, self_obj, std::move(args));
  }

  // Creates the instance and runs the constructor body.
  Value construct(const CallableRef& ref, std::vector<Value> args) {
    const SubjectUnit& unit = corpus_.units.at(ref.unit);
    Instance inst;
    inst.subject = unit.name;
    for (const auto& f : unit.fields)
      inst.fields[f.first] = default_value(f.second);
    heap_.push_back(std::move(inst));
    int id = static_cast<int>(heap_.size()) - 1;
    run_callable(unit, unit.ctors[ref.index], id, std::move(args));
    return Value::of_obj(id);
  }

  // Distance of a typechecked predicate over a plain local environment.
  double pred_distance(const Expr& pred, const std::map<std::string, Value>& env,
                       bool desired) {
    Frame f;
    f.scopes.push_back(env);
    PredResult r = eval_pred(pred, f);
    return desired ? r.d_true : r.d_false;
  }

  std::string render_state(const Value& v, int depth = 0) {
    if (!v.is_obj()) return render_value(v);
    if (depth >= 3) return "<...>";
    const Instance& inst = heap_[v.as_obj().id];
    std::string s = inst.subject + "{";
    bool first = true;
    for (const auto& [name, fv] : inst.fields) {
      if (!first) s += ", ";
      first = false;
      s += name + "=" + render_state(fv, depth + 1);
    }
    return s + "}";
  }

 private:
  struct Frame {
    const SubjectUnit* unit = nullptr;
    int self = -1;
    std::vector<std::map<std::string, Value>> scopes;

    Value* find(const std::string& name) {
      for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
        auto f = it->find(name);
        if (f != it->end()) return &f->second;
      }
      return nullptr;
    }
  };

  void tick() {
    if (++trace_.statements_executed > limits_.max_interpreted_statements)
      throw AbortFault{"statement-budget"};
  }

  void check_string(const std::string& s) {
    if (static_cast<int64_t>(s.size()) > limits_.max_string_length)
      throw AbortFault{"string-limit"};
  }

  Value run_callable(const SubjectUnit& unit, const Callable& c, int self,
                     std::vector<Value> args) {
    Frame frame;
    frame.unit = &unit;
    frame.self = self;
    frame.scopes.push_back({});
    for (size_t i = 0; i < c.params.size(); ++i)
      frame.scopes.back()[c.params[i].first] =
          coerce(args[i], c.params[i].second);
    Value ret;
    exec_block(c.body, frame, &ret);
    return coerce(ret, c.ret);
  }

  // Returns true when the block returned.
  bool exec_block(const std::vector<StmtPtr>& body, Frame& f, Value* ret) {
    f.scopes.push_back({});
    bool returned = false;
    for (const auto& s : body) {
      if (exec_stmt(*s, f, ret)) {
        returned = true;
        break;
      }
    }
    f.scopes.pop_back();
    return returned;
  }

  bool exec_stmt(const Stmt& s, Frame& f, Value* ret) {
    tick();
    trace_.covered_lines.insert(s.line);
    switch (s.kind) {
      case StmtKind::VarDecl:
        f.scopes.back()[s.name] = coerce(eval(*s.expr, f), s.decl_type);
        return false;
      case StmtKind::Assign: {
        Value v = eval(*s.expr, f);
        if (s.assign_to_field) {
          TypeTag ft;
          for (const auto& fd : f.unit->fields)
            if (fd.first == s.name) ft = fd.second;
          heap_[f.self].fields[s.name] = coerce(v, ft);
        } else {
          Value* slot = f.find(s.name);
          *slot = coerce(v, slot_type(f, s.name));
        }
        return false;
      }
      case StmtKind::If: {
        bool taken = eval_branch(s, f);
        if (taken) return exec_block(s.then_body, f, ret);
        return exec_block(s.else_body, f, ret);
      }
      case StmtKind::While: {
        while (eval_branch(s, f)) {
          if (exec_block(s.then_body, f, ret)) return true;
          tick();
        }
        return false;
      }
      case StmtKind::Return:
        if (s.expr) *ret = eval(*s.expr, f);
        return true;
      case StmtKind::Throw:
        throw RuntimeFault{s.throw_tag};
      case StmtKind::ExprStmt:
        eval(*s.expr, f);
        return false;
    }
    return false;
  }

  // Static type of a local slot; needed to keep widened assignments stable.
  TypeTag slot_type(Frame& f, const std::string& name) {
    Value* v = f.find(name);
    return v ? TypeTag::of(v->prim()) : TypeTag::of(Prim::Void);
  }

  bool eval_branch(const Stmt& s, Frame& f) {
    PredResult r = eval_pred(*s.expr, f);
    trace_.branch_outcomes[s.branch_id].insert(r.value);
    auto upd = [&](bool outcome, double d) {
      auto key = std::make_pair(s.branch_id, outcome);
      auto it = trace_.branch_min_distance.find(key);
      if (it == trace_.branch_min_distance.end() || d < it->second)
        trace_.branch_min_distance[key] = d;
    };
    upd(true, r.d_true);
    upd(false, r.d_false);
    return r.value;
  }

  void watch_record(const Expr& e, const std::string& rendered) {
    if (e.node_id == watch_ && watch_ >= 0) trace_.watched.push_back(rendered);
  }

  PredResult eval_pred(const Expr& e, Frame& f) {
    PredResult r;
    switch (e.kind) {
      case ExprKind::Unary:
        if (e.un == UnOp::Not) {
          PredResult inner = eval_pred(*e.kids[0], f);
          r.value = !inner.value;
          r.d_true = inner.d_false;
          r.d_false = inner.d_true;
          watch_record(e, r.value ? "true" : "false");
          return r;
        }
        break;
      case ExprKind::Binary:
        switch (e.bin) {
          case BinOp::And: {
            PredResult l = eval_pred(*e.kids[0], f);
            if (!l.value) {
              r.value = false;
              r.d_true = l.d_true;  // unevaluated side contributes 0
              r.d_false = 0.0;
            } else {
              PredResult rr = eval_pred(*e.kids[1], f);
              r.value = rr.value;
              r.d_true = rr.d_true;
              r.d_false = rr.value ? std::min(l.d_false, rr.d_false) : 0.0;
            }
            watch_record(e, r.value ? "true" : "false");
            return r;
          }
          case BinOp::Or: {
            PredResult l = eval_pred(*e.kids[0], f);
            if (l.value) {
              r.value = true;
              r.d_true = 0.0;
              r.d_false = l.d_false;
            } else {
              PredResult rr = eval_pred(*e.kids[1], f);
              r.value = rr.value;
              r.d_true = rr.value ? 0.0 : std::min(l.d_true, rr.d_true);
              r.d_false = rr.value ? rr.d_false : 0.0;
            }
            watch_record(e, r.value ? "true" : "false");
            return r;
          }
          case BinOp::Eq:
          case BinOp::Ne:
          case BinOp::Lt:
          case BinOp::Le:
          case BinOp::Gt:
          case BinOp::Ge:
            return eval_comparison(e, f);
          default:
            break;
        }
        break;
      default:
        break;
    }
    // Plain boolean expression.
    Value v = eval(e, f);
    r.value = v.as_bool();
    r.d_true = r.value ? 0.0 : kK;
    r.d_false = r.value ? kK : 0.0;
    return r;
  }

  PredResult eval_comparison(const Expr& e, Frame& f) {
    Value a = eval(*e.kids[0], f);
    Value b = eval(*e.kids[1], f);
    PredResult r;
    BinOp op = e.bin;
    if (a.is_string()) {
      const std::string& sa = a.as_string();
      const std::string& sb = b.as_string();
      bool eq = sa == sb;
      double lev = eq ? 0.0 : std::max(1, levenshtein(sa, sb));
      double d_eq = lev;           // distance toward equality
      double d_ne = eq ? 1.0 : 0;  // distance toward inequality
      switch (op) {
        case BinOp::Eq: r.value = eq; r.d_true = d_eq; r.d_false = d_ne; break;
        case BinOp::Ne: r.value = !eq; r.d_true = d_ne; r.d_false = d_eq; break;
        default: {
          // Ordered string comparisons: lexicographic, flat distances.
          int c = sa.compare(sb);
          bool val = op == BinOp::Lt   ? c < 0
                     : op == BinOp::Le ? c <= 0
                     : op == BinOp::Gt ? c > 0
                                       : c >= 0;
          r.value = val;
          r.d_true = val ? 0.0 : kK;
          r.d_false = val ? kK : 0.0;
          break;
        }
      }
    } else if (a.prim() == Prim::Boolean) {
      bool eq = a.as_bool() == b.as_bool();
      bool val = (op == BinOp::Eq) ? eq : !eq;
      r.value = val;
      r.d_true = val ? 0.0 : kK;
      r.d_false = val ? kK : 0.0;
    } else {
      double x = a.numeric();
      double y = b.numeric();
      double diff = x - y;
      switch (op) {
        case BinOp::Eq:
          r.value = diff == 0.0;
          r.d_true = std::fabs(diff);
          r.d_false = r.value ? kK : 0.0;
          break;
        case BinOp::Ne:
          r.value = diff != 0.0;
          r.d_true = r.value ? 0.0 : kK;
          r.d_false = std::fabs(diff);
          break;
        case BinOp::Lt:
          r.value = x < y;
          r.d_true = r.value ? 0.0 : diff + kK;
          r.d_false = r.value ? (y - x) + kK : 0.0;
          break;
        case BinOp::Le:
          r.value = x <= y;
          r.d_true = r.value ? 0.0 : diff + kK;
          r.d_false = r.value ? (y - x) + kK : 0.0;
          break;
        case BinOp::Gt:
          r.value = x > y;
          r.d_true = r.value ? 0.0 : (y - x) + kK;
          r.d_false = r.value ? diff + kK : 0.0;
          break;
        case BinOp::Ge:
          r.value = x >= y;
          r.d_true = r.value ? 0.0 : (y - x) + kK;
          r.d_false = r.value ? diff + kK : 0.0;
          break;
        default:
          break;
      }
    }
    watch_record(e, r.value ? "true" : "false");
    return r;
  }

  Value eval(const Expr& e, Frame& f) {
    if (e.node_id == watch_ && watch_ >= 0) {
      try {
        Value v = eval_inner(e, f);
        trace_.watched.push_back(v.is_obj() ? render_state(v)
                                            : render_value(v));
        return v;
      } catch (const RuntimeFault& rf) {
        trace_.watched.push_back("!" + rf.tag);
        throw;
      }
    }
    return eval_inner(e, f);
  }

  Value eval_inner(const Expr& e, Frame& f) {
    switch (e.kind) {
      case ExprKind::Literal:
        return e.literal;
      case ExprKind::VarRef: {
        if (e.var_is_field) return heap_[f.self].fields.at(e.name);
        Value* v = f.find(e.name);
        return *v;
      }
      case ExprKind::FieldRead: {
        Value recv = eval(*e.kids[0], f);
        if (!recv.is_obj()) throw RuntimeFault{"NullReference"};
        return heap_[recv.as_obj().id].fields.at(e.name);
      }
      case ExprKind::Unary: {
        if (e.un == UnOp::Not) {
          PredResult r = eval_pred(*e.kids[0], f);
          return Value::of_bool(!r.value);
        }
        Value v = eval(*e.kids[0], f);
        switch (v.prim()) {
          case Prim::Int:
            return Value::of_int(static_cast<int32_t>(
                0u - static_cast<uint32_t>(v.as_int())));
          case Prim::Long:
            return Value::of_long(static_cast<int64_t>(
                0ull - static_cast<uint64_t>(v.as_long())));
          default:
            return Value::of_double(-v.as_double());
        }
      }
      case ExprKind::Binary:
        return eval_binary(e, f);
      case ExprKind::Builtin:
        return eval_builtin(e, f);
      case ExprKind::MethodCall: {
        Value recv = eval(*e.kids[0], f);
        if (!recv.is_obj()) throw RuntimeFault{"NullReference"};
        const Instance& inst = heap_[recv.as_obj().id];
        const SubjectUnit& unit = corpus_.units.at(inst.subject);
        const Callable& m = unit.methods[e.resolved];
        std::vector<Value> args;
        for (size_t i = 1; i < e.kids.size(); ++i)
          args.push_back(eval(*e.kids[i], f));
        return run_callable(unit, m, recv.as_obj().id, std::move(args));
      }
      case ExprKind::New: {
        const SubjectUnit& unit = corpus_.units.at(e.name);
        std::vector<Value> args;
        for (const auto& k : e.kids) args.push_back(eval(*k, f));
        Instance inst;
        inst.subject = unit.name;
        for (const auto& fd : unit.fields)
          inst.fields[fd.first] = default_value(fd.second);
        heap_.push_back(std::move(inst));
        int id = static_cast<int>(heap_.size()) - 1;
        run_callable(unit, unit.ctors[e.resolved], id, std::move(args));
        return Value::of_obj(id);
      }
    }
    return Value::null();
  }

  Value eval_binary(const Expr& e, Frame& f) {
    if (e.bin == BinOp::And || e.bin == BinOp::Or || is_relational(e.bin)) {
      PredResult r = eval_pred(e, f);
      return Value::of_bool(r.value);
    }
    Value a = eval(*e.kids[0], f);
    Value b = eval(*e.kids[1], f);
    Prim pk = e.type.kind;
    if (pk == Prim::Double) {
      double x = a.numeric(), y = b.numeric();
      switch (e.bin) {
        case BinOp::Add: return Value::of_double(x + y);
        case BinOp::Sub: return Value::of_double(x - y);
        case BinOp::Mul: return Value::of_double(x * y);
        case BinOp::Div:
          if (y == 0.0) throw RuntimeFault{"DivideByZero"};
          return Value::of_double(x / y);
        default: break;
      }
    } else if (pk == Prim::Long) {
      int64_t x = a.prim() == Prim::Int ? a.as_int() : a.as_long();
      int64_t y = b.prim() == Prim::Int ? b.as_int() : b.as_long();
      uint64_t ux = static_cast<uint64_t>(x), uy = static_cast<uint64_t>(y);
      switch (e.bin) {
        case BinOp::Add: return Value::of_long(static_cast<int64_t>(ux + uy));
        case BinOp::Sub: return Value::of_long(static_cast<int64_t>(ux - uy));
        case BinOp::Mul: return Value::of_long(static_cast<int64_t>(ux * uy));
        case BinOp::Div:
          if (y == 0) throw RuntimeFault{"DivideByZero"};
          if (x == INT64_MIN && y == -1) return Value::of_long(INT64_MIN);
          return Value::of_long(x / y);
        case BinOp::Mod:
          if (y == 0) throw RuntimeFault{"DivideByZero"};
          if (x == INT64_MIN && y == -1) return Value::of_long(0);
          return Value::of_long(x % y);
        default: break;
      }
    } else {
      int32_t x = a.as_int(), y = b.as_int();
      uint32_t ux = static_cast<uint32_t>(x), uy = static_cast<uint32_t>(y);
      switch (e.bin) {
        case BinOp::Add: return Value::of_int(static_cast<int32_t>(ux + uy));
        case BinOp::Sub: return Value::of_int(static_cast<int32_t>(ux - uy));
        case BinOp::Mul: return Value::of_int(static_cast<int32_t>(ux * uy));
        case BinOp::Div:
          if (y == 0) throw RuntimeFault{"DivideByZero"};
          if (x == INT32_MIN && y == -1) return Value::of_int(INT32_MIN);
          return Value::of_int(x / y);
        case BinOp::Mod:
          if (y == 0) throw RuntimeFault{"DivideByZero"};
          if (x == INT32_MIN && y == -1) return Value::of_int(0);
          return Value::of_int(x % y);
        default: break;
      }
    }
    return Value::null();
  }

  Value eval_builtin(const Expr& e, Frame& f) {
    switch (e.builtin) {
      case BuiltinFn::Len: {
        Value s = eval(*e.kids[0], f);
        return Value::of_int(static_cast<int32_t>(s.as_string().size()));
      }
      case BuiltinFn::Concat: {
        Value a = eval(*e.kids[0], f);
        Value b = eval(*e.kids[1], f);
        std::string r = a.as_string() + b.as_string();
        check_string(r);
        return Value::of_string(std::move(r));
      }
      case BuiltinFn::Substring: {
        Value s = eval(*e.kids[0], f);
        Value i = eval(*e.kids[1], f);
        Value j = eval(*e.kids[2], f);
        const std::string& str = s.as_string();
        int32_t lo = i.as_int(), hi = j.as_int();
        if (lo < 0 || hi < lo || hi > static_cast<int32_t>(str.size()))
          throw RuntimeFault{"IndexOutOfBounds"};
        return Value::of_string(str.substr(lo, hi - lo));
      }
      case BuiltinFn::CharAt: {
        Value s = eval(*e.kids[0], f);
        Value i = eval(*e.kids[1], f);
        const std::string& str = s.as_string();
        int32_t idx = i.as_int();
        if (idx < 0 || idx >= static_cast<int32_t>(str.size()))
          throw RuntimeFault{"IndexOutOfBounds"};
        return Value::of_char(static_cast<unsigned char>(str[idx]));
      }
      case BuiltinFn::IndexOf: {
        Value s = eval(*e.kids[0], f);
        Value t = eval(*e.kids[1], f);
        size_t pos = s.as_string().find(t.as_string());
        return Value::of_int(pos == std::string::npos
                                 ? -1
                                 : static_cast<int32_t>(pos));
      }
    }
    return Value::null();
  }

  const Corpus& corpus_;
  const CorpusInfo& info_;
  const SandboxLimits& limits_;
  int watch_;
  ExecutionTrace& trace_;
  std::vector<Instance> heap_;
};

}  // namespace

ExecutionTrace execute_test(const TestCase& test, const Corpus& corpus,
                            const CorpusInfo& info, const SandboxLimits& limits,
                            int watch_node) {
  ExecutionTrace trace;
  Interp interp(corpus, info, limits, watch_node, trace);
  std::vector<bool> slot_ok(test.stmts.size(), false);
  std::vector<Value> slots(test.stmts.size());
  for (size_t i = 0; i < test.stmts.size(); ++i) {
    const Statement& s = test.stmts[i];
    StmtObs obs;
    auto dep_ok = [&](int idx) {
      return idx >= 0 && idx < static_cast<int>(i) && slot_ok[idx];
    };
    bool deps_fine = true;
    if (s.kind != Statement::Kind::PrimitiveDef) {
      if (s.kind == Statement::Kind::MethodCall && !dep_ok(s.receiver))
        deps_fine = false;
      for (const Arg& a : s.args)
        if (a.is_ref && !dep_ok(a.ref)) deps_fine = false;
    }
    if (!deps_fine) {
      obs.kind = StmtObs::Kind::Skipped;
      trace.observations.push_back(obs);
      continue;
    }
    try {
      if (s.kind == Statement::Kind::PrimitiveDef) {
        slots[i] = s.prim_value;
        slot_ok[i] = true;
        obs.kind = StmtObs::Kind::Value;
        obs.rendered = render_value(s.prim_value);
      } else {
        const CallableRef& ref = info.signatures.at(s.sig);
        std::vector<Value> args;
        for (size_t a = 0; a < s.args.size(); ++a) {
          const Arg& arg = s.args[a];
          Value v = arg.is_ref ? slots[arg.ref] : arg.literal;
          args.push_back(coerce(v, ref.params[a]));
        }
        if (s.kind == Statement::Kind::ConstructorCall) {
          Value obj = interp.construct(ref, std::move(args));
          slots[i] = obj;
          slot_ok[i] = true;
          obs.kind = StmtObs::Kind::Value;
          obs.rendered = interp.render_state(obj);
        } else {
          Value recv = slots[s.receiver];
          Value r = interp.call(ref, recv.as_obj().id, std::move(args));
          if (ref.ret.is_void()) {
            obs.kind = StmtObs::Kind::Void;
          } else {
            slots[i] = r;
            slot_ok[i] = true;
            obs.kind = StmtObs::Kind::Value;
            obs.rendered = interp.render_state(r);
          }
        }
      }
    } catch (const RuntimeFault& rf) {
      obs.kind = StmtObs::Kind::Exception;
      obs.exception_tag = rf.tag;
    } catch (const AbortFault& af) {
      trace.aborted = af.reason;
      obs.kind = StmtObs::Kind::Exception;
      obs.exception_tag = af.reason;
      trace.observations.push_back(obs);
      break;
    }
    trace.observations.push_back(obs);
  }
  return trace;
}

double branch_distance(const Expr& predicate,
                       const std::map<std::string, Value>& env, bool desired) {
  static const Corpus empty_corpus;
  static const CorpusInfo empty_info;
  SandboxLimits limits;
  ExecutionTrace trace;
  Interp interp(empty_corpus, empty_info, limits, -1, trace);
  return interp.pred_distance(predicate, env, desired);
}

double target_fitness(const CoverageTarget& target, const ExecutionTrace& trace,
                      const UnitInfo& ui) {
  if (target.kind == CoverageTarget::Kind::Line) {
    if (trace.covered_lines.count(target.id)) return 0.0;
    ControlDep ctrl = ui.line_ctrl.count(target.id)
                          ? ui.line_ctrl.at(target.id)
                          : ControlDep{};
    if (ctrl.branch < 0) {
      // Entry-controlled line: method either never entered or exited early.
      return 2.0;
    }
    double f = target_fitness(
        CoverageTarget::branch(target.callable, ctrl.branch, ctrl.outcome),
        trace, ui);
    // Outcome covered but the line was not (early return/exception).
    if (f == 0.0) return 0.5;
    return f;
  }
  if (trace.branch_covered(target.id, target.outcome)) return 0.0;
  const ControlDependencyGraph& g = ui.cdg_of_branch(target.id);
  int branch = target.id;
  bool outcome = target.outcome;
  int level = 0;
  while (true) {
    if (trace.branch_outcomes.count(branch)) {
      double d = trace.branch_min_distance.at({branch, outcome});
      return level + normalize_distance(d);
    }
    ControlDep parent = g.parent_of.at(branch);
    if (parent.branch < 0) {
      // Method never reached this chain at all.
      return level + 1 + normalize_distance(1.0);
    }
    branch = parent.branch;
    outcome = parent.outcome;
    ++level;
  }
}

}  // namespace hmx
