#include "hmx/encoding.hpp"

#include <algorithm>
#include <set>

namespace hmx {

namespace {

bool is_primitive(const TypeTag& t) {
  return t.kind != Prim::Subject && t.kind != Prim::Void;
}

std::vector<std::string> ctor_sigs_of(const std::string& unit,
                                      const CorpusInfo& info) {
  std::vector<std::string> out;
  for (const auto& [sig, ref] : info.signatures)
    if (ref.unit == unit && ref.is_ctor) out.push_back(sig);
  return out;
}

std::vector<std::string> method_sigs_of(const std::string& unit,
                                        const CorpusInfo& info) {
  std::vector<std::string> out;
  for (const auto& [sig, ref] : info.signatures)
    if (ref.unit == unit && !ref.is_ctor) out.push_back(sig);
  return out;
}

// Constructor with the fewest subject parameters (then fewest parameters,
// then signature order) -- the termination-friendly choice for chains.
std::string minimal_ctor(const std::string& unit, const CorpusInfo& info) {
  std::string best;
  int best_subj = -1, best_total = -1;
  for (const auto& [sig, ref] : info.signatures) {
    if (ref.unit != unit || !ref.is_ctor) continue;
    int subj = 0;
    for (const auto& p : ref.params)
      if (p.kind == Prim::Subject) ++subj;
    int total = static_cast<int>(ref.params.size());
    if (best_subj < 0 || subj < best_subj ||
        (subj == best_subj && total < best_total)) {
      best = sig;
      best_subj = subj;
      best_total = total;
    }
  }
  return best;
}

}  // namespace

std::optional<TypeTag> defined_type(const Statement& s,
                                    const CorpusInfo& info) {
  switch (s.kind) {
    case Statement::Kind::PrimitiveDef:
      return s.prim_type;
    case Statement::Kind::ConstructorCall:
    case Statement::Kind::MethodCall: {
      auto it = info.signatures.find(s.sig);
      if (it == info.signatures.end()) return std::nullopt;
      if (it->second.ret.is_void()) return std::nullopt;
      return it->second.ret;
    }
  }
  return std::nullopt;
}

bool is_valid(const TestCase& test, const CorpusInfo& info) {
  if (test.stmts.empty()) return false;
  std::vector<std::optional<TypeTag>> types;
  for (size_t i = 0; i < test.stmts.size(); ++i) {
    const Statement& s = test.stmts[i];
    if (s.kind == Statement::Kind::PrimitiveDef) {
      if (!is_primitive(s.prim_type)) return false;
      if (s.prim_value.prim() != s.prim_type.kind) return false;
    } else {
      auto it = info.signatures.find(s.sig);
      if (it == info.signatures.end()) return false;
      const CallableRef& ref = it->second;
      if ((s.kind == Statement::Kind::ConstructorCall) != ref.is_ctor)
        return false;
      if (s.args.size() != ref.params.size()) return false;
      if (s.kind == Statement::Kind::MethodCall) {
        if (s.receiver < 0 || s.receiver >= static_cast<int>(i)) return false;
        if (!types[s.receiver] ||
            *types[s.receiver] != TypeTag::subject_of(ref.unit))
          return false;
      }
      for (size_t a = 0; a < s.args.size(); ++a) {
        const Arg& arg = s.args[a];
        const TypeTag& want = ref.params[a];
        if (arg.is_ref) {
          if (arg.ref < 0 || arg.ref >= static_cast<int>(i)) return false;
          if (!types[arg.ref] || *types[arg.ref] != want) return false;
        } else {
          if (!is_primitive(want)) return false;
          if (arg.literal.prim() != want.kind) return false;
        }
      }
    }
    types.push_back(defined_type(s, info));
  }
  return true;
}

Value random_literal(const TypeTag& t, Rng& rng) {
  switch (t.kind) {
    case Prim::Int:
      return Value::of_int(static_cast<int32_t>(rng.uniform_int(-100, 100)));
    case Prim::Long:
      return Value::of_long(rng.uniform_int(-100, 100));
    case Prim::Double:
      return Value::of_double(rng.uniform_real() * 200.0 - 100.0);
    case Prim::Boolean:
      return Value::of_bool(rng.coin());
    case Prim::Char:
      return Value::of_char(static_cast<uint32_t>(rng.uniform_int(0x20, 0x7e)));
    case Prim::String: {
      int64_t n = rng.geometric_len(8.0);
      std::string s;
      for (int64_t i = 0; i < n; ++i)
        s += static_cast<char>(rng.uniform_int(0x20, 0x7e));
      return Value::of_string(std::move(s));
    }
    default:
      return Value::null();
  }
}

namespace {

// Emits a constructor chain producing `subject`; returns the index of the
// statement that defines the value.
int emit_ctor_chain(const std::string& subject, const CorpusInfo& info,
                    Rng& rng, std::vector<Statement>& out,
                    std::set<std::string>& in_progress) {
  if (in_progress.count(subject))
    throw RepairImpossible("cyclic constructor dependency on " + subject);
  std::string sig = minimal_ctor(subject, info);
  if (sig.empty())
    throw RepairImpossible("no constructor produces " + subject);
  in_progress.insert(subject);
  const CallableRef& ref = info.signatures.at(sig);
  Statement s;
  s.kind = Statement::Kind::ConstructorCall;
  s.sig = sig;
  for (const TypeTag& p : ref.params) {
    if (p.kind == Prim::Subject)
      s.args.push_back(
          Arg::of_ref(emit_ctor_chain(p.subject, info, rng, out, in_progress)));
    else
      s.args.push_back(Arg::lit(random_literal(p, rng)));
  }
  in_progress.erase(subject);
  out.push_back(std::move(s));
  return static_cast<int>(out.size()) - 1;
}

int last_var_of(const std::vector<Statement>& stmts, const TypeTag& t,
                const CorpusInfo& info, int before) {
  for (int i = before - 1; i >= 0; --i) {
    auto dt = defined_type(stmts[i], info);
    if (dt && *dt == t) return i;
  }
  return -1;
}

}  // namespace

TestCase random_test(const std::string& unit, const CorpusInfo& info, Rng& rng,
                     int max_length) {
  TestCase t;
  auto ctors = ctor_sigs_of(unit, info);
  auto methods = method_sigs_of(unit, info);
  int target_len = static_cast<int>(rng.uniform_int(1, std::max(1, max_length)));

  auto emit_call = [&](const std::string& sig, bool is_ctor) {
    const CallableRef& ref = info.signatures.at(sig);
    Statement s;
    s.kind = is_ctor ? Statement::Kind::ConstructorCall
                     : Statement::Kind::MethodCall;
    s.sig = sig;
    if (!is_ctor) {
      TypeTag owner = TypeTag::subject_of(ref.unit);
      int r = last_var_of(t.stmts, owner, info, (int)t.stmts.size());
      if (r < 0) {
        std::set<std::string> guard;
        r = emit_ctor_chain(ref.unit, info, rng, t.stmts, guard);
      }
      s.receiver = r;
    }
    for (const TypeTag& p : ref.params) {
      if (p.kind == Prim::Subject) {
        int r = -1;
        // Reuse an existing value half the time.
        if (!rng.coin())
          r = last_var_of(t.stmts, p, info, (int)t.stmts.size());
        if (r < 0) {
          std::set<std::string> guard;
          r = emit_ctor_chain(p.subject, info, rng, t.stmts, guard);
        }
        s.args.push_back(Arg::of_ref(r));
      } else {
        s.args.push_back(Arg::lit(random_literal(p, rng)));
      }
    }
    t.stmts.push_back(std::move(s));
  };

  emit_call(ctors[rng.uniform_int(0, (int)ctors.size() - 1)], true);
  while (static_cast<int>(t.stmts.size()) < target_len && !methods.empty()) {
    // Chained constructor arguments can add several statements at once;
    // commit only while the hard cap holds.
    TestCase snapshot = t;
    emit_call(methods[rng.uniform_int(0, (int)methods.size() - 1)], false);
    if (static_cast<int>(t.stmts.size()) > max_length) {
      t = std::move(snapshot);
      break;
    }
  }
  return t;
}

TestCase repair(const TestCase& test, const std::string& unit,
                const CorpusInfo& info, Rng& rng) {
  TestCase out;
  if (test.stmts.empty()) {
    std::set<std::string> guard;
    emit_ctor_chain(unit, info, rng, out.stmts, guard);
    return out;
  }
  auto type_at = [&](int idx) -> std::optional<TypeTag> {
    if (idx < 0 || idx >= static_cast<int>(out.stmts.size()))
      return std::nullopt;
    return defined_type(out.stmts[idx], info);
  };
  std::vector<int> remap(test.stmts.size(), -1);
  for (size_t i = 0; i < test.stmts.size(); ++i) {
    Statement s = test.stmts[i];
    bool drop = false;
    if (s.kind == Statement::Kind::PrimitiveDef) {
      if (!is_primitive(s.prim_type) ||
          s.prim_value.prim() != s.prim_type.kind)
        drop = true;
    } else {
      auto it = info.signatures.find(s.sig);
      if (it == info.signatures.end() ||
          (s.kind == Statement::Kind::ConstructorCall) != it->second.is_ctor ||
          s.args.size() != it->second.params.size()) {
        drop = true;
      } else {
        const CallableRef& ref = it->second;
        auto fix_ref = [&](int old_ref, const TypeTag& want) -> int {
          int mapped = (old_ref >= 0 && old_ref < static_cast<int>(i))
                           ? remap[old_ref]
                           : -1;
          auto dt = type_at(mapped);
          if (dt && *dt == want) return mapped;
          // Broken reference: introduce a new definition before first use.
          if (want.kind == Prim::Subject) {
            std::set<std::string> guard;
            return emit_ctor_chain(want.subject, info, rng, out.stmts, guard);
          }
          Statement def;
          def.kind = Statement::Kind::PrimitiveDef;
          def.prim_type = want;
          def.prim_value = random_literal(want, rng);
          out.stmts.push_back(std::move(def));
          return static_cast<int>(out.stmts.size()) - 1;
        };
        if (s.kind == Statement::Kind::MethodCall)
          s.receiver = fix_ref(s.receiver, TypeTag::subject_of(ref.unit));
        for (size_t a = 0; a < s.args.size(); ++a) {
          const TypeTag& want = ref.params[a];
          if (s.args[a].is_ref) {
            s.args[a].ref = fix_ref(s.args[a].ref, want);
          } else if (!is_primitive(want)) {
            s.args[a] = Arg::of_ref(fix_ref(-1, want));
          } else if (s.args[a].literal.prim() != want.kind) {
            s.args[a] = Arg::lit(random_literal(want, rng));
          }
        }
      }
    }
    if (drop) {
      remap[i] = -1;
      continue;
    }
    out.stmts.push_back(std::move(s));
    remap[i] = static_cast<int>(out.stmts.size()) - 1;
  }
  if (out.stmts.empty()) {
    std::set<std::string> guard;
    emit_ctor_chain(unit, info, rng, out.stmts, guard);
  }
  return out;
}

std::string render(const TestCase& test, const CorpusInfo& info) {
  std::string out;
  auto var = [](int i) { return "v" + std::to_string(i); };
  for (size_t i = 0; i < test.stmts.size(); ++i) {
    const Statement& s = test.stmts[i];
    if (s.kind == Statement::Kind::PrimitiveDef) {
      out += type_name(s.prim_type) + " " + var((int)i) + " = " +
             render_value(s.prim_value) + ";\n";
      continue;
    }
    const CallableRef& ref = info.signatures.at(s.sig);
    std::string args;
    for (size_t a = 0; a < s.args.size(); ++a) {
      if (a) args += ", ";
      args += s.args[a].is_ref ? var(s.args[a].ref)
                               : render_value(s.args[a].literal);
    }
    if (s.kind == Statement::Kind::ConstructorCall) {
      out += ref.unit + " " + var((int)i) + " = new " + ref.unit + "(" + args +
             ");\n";
    } else if (ref.ret.is_void()) {
      out += var(s.receiver) + "." + ref.name + "(" + args + ");\n";
    } else {
      out += type_name(ref.ret) + " " + var((int)i) + " = " + var(s.receiver) +
             "." + ref.name + "(" + args + ");\n";
    }
  }
  return out;
}

TestCase parse_rendered(const std::string& text, const CorpusInfo& info) {
  TestCase t;
  std::vector<Token> toks = lex(text);
  size_t p = 0;
  auto cur = [&]() -> const Token& { return toks[p]; };
  auto is_punct = [&](const char* s) {
    return cur().kind == Tok::Punct && cur().text == s;
  };
  auto expect_punct = [&](const char* s) {
    if (!is_punct(s))
      throw CompileError("SyntaxError", cur().line, cur().col,
                         std::string("expected '") + s + "'");
    ++p;
  };
  auto var_index = [&](const std::string& name) -> int {
    if (name.size() < 2 || name[0] != 'v') return -1;
    return std::atoi(name.c_str() + 1);
  };
  auto parse_args = [&]() {
    std::vector<std::pair<Arg, std::optional<TypeTag>>> args;
    expect_punct("(");
    while (!is_punct(")")) {
      bool neg = false;
      if (is_punct("-")) {
        neg = true;
        ++p;
      }
      if (cur().kind == Tok::Ident) {
        int idx = var_index(cur().text);
        args.emplace_back(Arg::of_ref(idx),
                          idx >= 0 && idx < (int)t.stmts.size()
                              ? defined_type(t.stmts[idx], info)
                              : std::nullopt);
        ++p;
      } else {
        Value v = cur().literal;
        if (neg) {
          if (v.prim() == Prim::Int) v = Value::of_int(-v.as_int());
          else if (v.prim() == Prim::Long) v = Value::of_long(-v.as_long());
          else if (v.prim() == Prim::Double) v = Value::of_double(-v.as_double());
        }
        args.emplace_back(Arg::lit(v), TypeTag::of(v.prim()));
        ++p;
      }
      if (is_punct(",")) ++p;
    }
    expect_punct(")");
    return args;
  };
  auto find_sig = [&](const std::string& owner, const std::string& name,
                      const std::vector<std::pair<Arg, std::optional<TypeTag>>>&
                          args) -> std::string {
    for (const auto& [sig, ref] : info.signatures) {
      if (ref.unit != owner || ref.name != name) continue;
      if (ref.params.size() != args.size()) continue;
      bool ok = true;
      for (size_t a = 0; a < args.size(); ++a)
        if (!args[a].second || *args[a].second != ref.params[a]) ok = false;
      if (ok) return sig;
    }
    throw CompileError("UnresolvedName", cur().line, cur().col,
                       "no matching callable " + owner + "." + name);
  };

  while (cur().kind != Tok::End) {
    if (cur().kind != Tok::Ident)
      throw CompileError("SyntaxError", cur().line, cur().col,
                         "expected statement");
    std::string first = cur().text;
    ++p;
    if (is_punct(".")) {
      // vM.name(args);  (void call)
      ++p;
      std::string mname = cur().text;
      ++p;
      auto args = parse_args();
      expect_punct(";");
      int recv = var_index(first);
      auto rt = recv >= 0 && recv < (int)t.stmts.size()
                    ? defined_type(t.stmts[recv], info)
                    : std::nullopt;
      if (!rt || rt->kind != Prim::Subject)
        throw CompileError("SyntaxError", cur().line, cur().col,
                           "bad receiver " + first);
      Statement s;
      s.kind = Statement::Kind::MethodCall;
      s.receiver = recv;
      s.sig = find_sig(rt->subject, mname, args);
      for (auto& a : args) s.args.push_back(a.first);
      t.stmts.push_back(std::move(s));
      continue;
    }
    // TYPE vN = ...
    std::string type_text = first;
    ++p;  // variable name
    expect_punct("=");
    if (cur().kind == Tok::Ident && cur().text == "new") {
      ++p;
      std::string owner = cur().text;
      ++p;
      auto args = parse_args();
      expect_punct(";");
      Statement s;
      s.kind = Statement::Kind::ConstructorCall;
      s.sig = find_sig(owner, "<init>", args);
      for (auto& a : args) s.args.push_back(a.first);
      t.stmts.push_back(std::move(s));
    } else if (cur().kind == Tok::Ident) {
      // TYPE vN = vM.name(args);
      int recv = var_index(cur().text);
      ++p;
      expect_punct(".");
      std::string mname = cur().text;
      ++p;
      auto args = parse_args();
      expect_punct(";");
      auto rt = recv >= 0 && recv < (int)t.stmts.size()
                    ? defined_type(t.stmts[recv], info)
                    : std::nullopt;
      if (!rt || rt->kind != Prim::Subject)
        throw CompileError("SyntaxError", cur().line, cur().col,
                           "bad receiver");
      Statement s;
      s.kind = Statement::Kind::MethodCall;
      s.receiver = recv;
      s.sig = find_sig(rt->subject, mname, args);
      for (auto& a : args) s.args.push_back(a.first);
      t.stmts.push_back(std::move(s));
    } else {
      bool neg = false;
      if (is_punct("-")) {
        neg = true;
        ++p;
      }
      Value v = cur().literal;
      ++p;
      if (neg) {
        if (v.prim() == Prim::Int) v = Value::of_int(-v.as_int());
        else if (v.prim() == Prim::Long) v = Value::of_long(-v.as_long());
        else if (v.prim() == Prim::Double) v = Value::of_double(-v.as_double());
      }
      expect_punct(";");
      Statement s;
      s.kind = Statement::Kind::PrimitiveDef;
      s.prim_value = v;
      s.prim_type = TypeTag::of(v.prim());
      (void)type_text;
      t.stmts.push_back(std::move(s));
    }
  }
  return t;
}

std::pair<CompatibilityIndex, CompatibilityIndex> build_compat_index(
    const TestCase& o1, const TestCase& o2, const CorpusInfo& info) {
  auto collect = [&](const TestCase& t) {
    std::map<std::string, std::vector<int>> m;
    for (size_t i = 0; i < t.stmts.size(); ++i) {
      const Statement& s = t.stmts[i];
      if (s.kind == Statement::Kind::PrimitiveDef) continue;
      if (!info.signatures.count(s.sig)) continue;
      m[s.sig].push_back(static_cast<int>(i));
    }
    return m;
  };
  auto m1 = collect(o1);
  auto m2 = collect(o2);
  CompatibilityIndex i1, i2;
  for (const auto& [sig, pos1] : m1) {
    auto it = m2.find(sig);
    if (it == m2.end()) continue;
    bool is_ctor = info.signatures.at(sig).is_ctor;
    if (is_ctor) {
      i1.ctor_map[sig] = pos1;
      i2.ctor_map[sig] = it->second;
    } else {
      i1.method_map[sig] = pos1;
      i2.method_map[sig] = it->second;
    }
  }
  return {i1, i2};
}

}  // namespace hmx
