#include "hmx/operators.hpp"

#include <algorithm>
#include <cmath>

namespace hmx {

SbxDraw SbxDraw::make(double u, bool b, double eta_c) {
  SbxDraw d;
  d.u = u;
  d.b = b;
  d.eta_c = eta_c;
  if (u < 0.5)
    d.beta = std::pow(2.0 * u, 1.0 / (eta_c + 1.0));
  else if (u == 0.5)
    d.beta = 1.0;
  else
    d.beta = std::pow(0.5 / (1.0 - u), 1.0 / (eta_c + 1.0));
  return d;
}

SbxDraw SbxDraw::sample(Rng& rng, double eta_c) {
  double u = rng.uniform_real();
  bool b = rng.coin();
  return make(u, b, eta_c);
}

std::pair<double, double> sbx_pair(double v1, double v2, const SbxDraw& draw,
                                   bool literal_mode) {
  if (literal_mode) {
    // The difference-centered formula, kept verbatim for auditability.
    double d1 = (v1 - v2) * 0.5;
    double d2 = (v2 - v1) * 0.5;
    double off = draw.beta * 0.5 * std::fabs(v1 - v2);
    double sign = draw.b ? -1.0 : 1.0;
    return {d1 + sign * off, d2 + sign * off};
  }
  double mean = (v1 + v2) * 0.5;
  double spread = draw.beta * 0.5 * std::fabs(v1 - v2);
  double lo = mean - spread;
  double hi = mean + spread;
  return draw.b ? std::make_pair(hi, lo) : std::make_pair(lo, hi);
}

namespace {

double clamp_round(double x, double lo, double hi) {
  double r = std::round(x);  // half away from zero
  return std::min(hi, std::max(lo, r));
}

uint32_t project_char(double x) {
  double r = clamp_round(x, 0.0, 0x10FFFF);
  uint32_t cp = static_cast<uint32_t>(r);
  if (cp >= 0xD800 && cp <= 0xDFFF) cp = 0xE000;  // snap past surrogates
  return cp;
}

}  // namespace

std::pair<Value, Value> sbx_typed(const Value& a, const Value& b,
                                  const SbxDraw& draw, const TypeTag& type,
                                  bool literal_mode) {
  auto [c1, c2] = sbx_pair(a.numeric(), b.numeric(), draw, literal_mode);
  switch (type.kind) {
    case Prim::Double:
      return {Value::of_double(c1), Value::of_double(c2)};
    case Prim::Int:
      return {Value::of_int(static_cast<int32_t>(
                  clamp_round(c1, INT32_MIN, INT32_MAX))),
              Value::of_int(static_cast<int32_t>(
                  clamp_round(c2, INT32_MIN, INT32_MAX)))};
    case Prim::Long:
      return {Value::of_long(static_cast<int64_t>(clamp_round(
                  c1, static_cast<double>(INT64_MIN),
                  static_cast<double>(INT64_MAX)))),
              Value::of_long(static_cast<int64_t>(clamp_round(
                  c2, static_cast<double>(INT64_MIN),
                  static_cast<double>(INT64_MAX))))};
    case Prim::Char:
      return {Value::of_char(project_char(c1)), Value::of_char(project_char(c2))};
    case Prim::Boolean: {
      auto project = [](double c, bool own) {
        if (c == 0.5) return own;  // tie keeps the slot's parent value
        return c > 0.5;
      };
      return {Value::of_bool(project(c1, a.as_bool())),
              Value::of_bool(project(c2, b.as_bool()))};
    }
    default:
      return {a, b};
  }
}

std::pair<std::string, std::string> string_splice(const std::string& x,
                                                  const std::string& y,
                                                  const SpliceDraw& draw) {
  if (x.empty() || y.empty()) return {x, y};
  size_t xi = static_cast<size_t>(draw.x_i);
  size_t yi = static_cast<size_t>(draw.y_i);
  std::string nx = x.substr(0, xi + 1) + y.substr(yi + 1);
  std::string ny = y.substr(0, yi + 1) + x.substr(xi + 1);
  return {nx, ny};
}

std::pair<TestCase, TestCase> spx_splice(const TestCase& p1, const TestCase& p2,
                                         int alpha, int beta) {
  auto splice = [](const TestCase& head, int cut_h, const TestCase& tail,
                   int cut_t) {
    TestCase o;
    for (int i = 0; i < cut_h; ++i) o.stmts.push_back(head.stmts[i]);
    for (size_t j = cut_t; j < tail.stmts.size(); ++j) {
      Statement s = tail.stmts[j];
      // Positions at or past the cut follow the statement into the
      // offspring; earlier positions re-resolve against the new prefix.
      auto remap = [&](int r) {
        if (r >= cut_t) return cut_h + (r - cut_t);
        return r;
      };
      if (s.receiver >= 0) s.receiver = remap(s.receiver);
      for (Arg& a : s.args)
        if (a.is_ref) a.ref = remap(a.ref);
      o.stmts.push_back(std::move(s));
    }
    return o;
  };
  return {splice(p1, alpha, p2, beta), splice(p2, beta, p1, alpha)};
}

std::pair<TestCase, TestCase> spx(const TestCase& p1, const TestCase& p2,
                                  const std::string& unit,
                                  const CorpusInfo& info, Rng& rng) {
  int n1 = static_cast<int>(p1.size());
  int n2 = static_cast<int>(p2.size());
  if (n1 < 2 || n2 < 2) return {p1, p2};
  int alpha = static_cast<int>(rng.uniform_int(1, n1 - 1));
  int beta = static_cast<int>(rng.uniform_int(1, n2 - 1));
  auto [o1, o2] = spx_splice(p1, p2, alpha, beta);
  return {repair(o1, unit, info, rng), repair(o2, unit, info, rng)};
}

std::pair<TestCase, TestCase> hmx_crossover(const TestCase& p1,
                                            const TestCase& p2,
                                            const std::string& unit,
                                            const CorpusInfo& info, Rng& rng,
                                            const OperatorConfig& cfg) {
  auto [o1, o2] = spx(p1, p2, unit, info, rng);
  auto [i1, i2] = build_compat_index(o1, o2, info);

  auto data_crossover = [&](const std::string& sig,
                            const std::vector<int>& pos1,
                            const std::vector<int>& pos2) {
    if (!rng.bernoulli(cfg.data_crossover_rate)) return;
    int s1 = pos1[rng.uniform_int(0, (int)pos1.size() - 1)];
    int s2 = pos2[rng.uniform_int(0, (int)pos2.size() - 1)];
    const CallableRef& ref = info.signatures.at(sig);
    Statement& a = o1.stmts[s1];
    Statement& b = o2.stmts[s2];
    for (size_t k = 0; k < ref.params.size(); ++k) {
      Arg& x = a.args[k];
      Arg& y = b.args[k];
      if (x.is_ref || y.is_ref) continue;
      const TypeTag& t = ref.params[k];
      if (t.is_numeric()) {
        SbxDraw draw = SbxDraw::sample(rng, cfg.eta_c);
        auto [nx, ny] =
            sbx_typed(x.literal, y.literal, draw, t, cfg.sbx_literal_mode);
        x.literal = nx;
        y.literal = ny;
      } else if (t.kind == Prim::String) {
        const std::string& sx = x.literal.as_string();
        const std::string& sy = y.literal.as_string();
        if (sx.empty() || sy.empty()) continue;
        SpliceDraw draw;
        draw.x_i = static_cast<int>(rng.uniform_int(0, (int)sx.size() - 1));
        draw.y_i = static_cast<int>(rng.uniform_int(0, (int)sy.size() - 1));
        auto [nx, ny] = string_splice(sx, sy, draw);
        x.literal = Value::of_string(nx);
        y.literal = Value::of_string(ny);
      }
    }
  };

  for (const auto& [sig, pos1] : i1.ctor_map)
    data_crossover(sig, pos1, i2.ctor_map.at(sig));
  for (const auto& [sig, pos1] : i1.method_map)
    data_crossover(sig, pos1, i2.method_map.at(sig));

  if (!is_valid(o1, info)) o1 = repair(o1, unit, info, rng);
  if (!is_valid(o2, info)) o2 = repair(o2, unit, info, rng);
  return {o1, o2};
}

namespace {

Value perturb_numeric(const Value& v, const TypeTag& t, Rng& rng) {
  switch (t.kind) {
    case Prim::Boolean:
      return Value::of_bool(!v.as_bool());
    case Prim::Char: {
      double x = v.numeric() + rng.gaussian(0.0, 4.0);
      return Value::of_char(project_char(x));
    }
    case Prim::Int: {
      double sigma = std::max(1.0, std::fabs(v.numeric()) * 0.1);
      return Value::of_int(static_cast<int32_t>(
          clamp_round(v.numeric() + rng.gaussian(0.0, sigma), INT32_MIN,
                      INT32_MAX)));
    }
    case Prim::Long: {
      double sigma = std::max(1.0, std::fabs(v.numeric()) * 0.1);
      return Value::of_long(static_cast<int64_t>(clamp_round(
          v.numeric() + rng.gaussian(0.0, sigma),
          static_cast<double>(INT64_MIN), static_cast<double>(INT64_MAX))));
    }
    default: {
      double sigma = std::max(1.0, std::fabs(v.as_double()) * 0.1);
      return Value::of_double(v.as_double() + rng.gaussian(0.0, sigma));
    }
  }
}

std::string perturb_string(const std::string& s, Rng& rng) {
  std::string out = s;
  int choice = static_cast<int>(rng.uniform_int(0, 2));
  char c = static_cast<char>(rng.uniform_int(0x20, 0x7e));
  if (out.empty() || choice == 0) {
    size_t pos = out.empty() ? 0 : (size_t)rng.uniform_int(0, (int)out.size());
    out.insert(out.begin() + pos, c);
  } else if (choice == 1) {
    out.erase(out.begin() + rng.uniform_int(0, (int)out.size() - 1));
  } else {
    out[(size_t)rng.uniform_int(0, (int)out.size() - 1)] = c;
  }
  return out;
}

}  // namespace

TestCase mutate(const TestCase& test, const std::string& unit,
                const CorpusInfo& info, Rng& rng, int* mutated_count) {
  TestCase out = test;
  int n = static_cast<int>(out.size());
  if (n == 0) return repair(out, unit, info, rng);
  double p = 1.0 / n;
  int events = 0;
  std::vector<size_t> to_delete;
  for (size_t i = 0; i < out.stmts.size(); ++i) {
    if (!rng.bernoulli(p)) continue;
    ++events;
    Statement& s = out.stmts[i];
    int op = static_cast<int>(rng.uniform_int(0, 2));
    if (op == 0) {
      // Perturb a literal.
      if (s.kind == Statement::Kind::PrimitiveDef) {
        if (s.prim_type.kind == Prim::String)
          s.prim_value = Value::of_string(perturb_string(
              s.prim_value.as_string(), rng));
        else
          s.prim_value = perturb_numeric(s.prim_value, s.prim_type, rng);
      } else {
        std::vector<size_t> lits;
        for (size_t k = 0; k < s.args.size(); ++k)
          if (!s.args[k].is_ref) lits.push_back(k);
        if (!lits.empty()) {
          size_t k = lits[(size_t)rng.uniform_int(0, (int)lits.size() - 1)];
          const TypeTag& t = info.signatures.at(s.sig).params[k];
          if (t.kind == Prim::String)
            s.args[k].literal = Value::of_string(
                perturb_string(s.args[k].literal.as_string(), rng));
          else
            s.args[k].literal = perturb_numeric(s.args[k].literal, t, rng);
        }
      }
    } else if (op == 1) {
      // Replace the call with a compatible (same parameter list) callable.
      if (s.kind != Statement::Kind::PrimitiveDef) {
        const CallableRef& ref = info.signatures.at(s.sig);
        std::vector<std::string> candidates;
        for (const auto& [sig, other] : info.signatures) {
          if (sig == s.sig) continue;
          if (other.is_ctor != ref.is_ctor) continue;
          if (other.params != ref.params) continue;
          candidates.push_back(sig);
        }
        if (!candidates.empty()) {
          s.sig = candidates[(size_t)rng.uniform_int(
              0, (int)candidates.size() - 1)];
          if (s.kind == Statement::Kind::MethodCall &&
              info.signatures.at(s.sig).unit != ref.unit)
            s.receiver = -1;  // repair re-binds or inserts a receiver
        }
      }
    } else {
      to_delete.push_back(i);
    }
  }
  for (auto it = to_delete.rbegin(); it != to_delete.rend(); ++it)
    out.stmts.erase(out.stmts.begin() + *it);
  if (rng.bernoulli(p)) {
    // Insert one random statement; repair completes its inputs.
    std::vector<std::string> methods;
    for (const auto& [sig, ref] : info.signatures)
      if (ref.unit == unit && !ref.is_ctor) methods.push_back(sig);
    if (!methods.empty()) {
      Statement s;
      s.kind = Statement::Kind::MethodCall;
      s.sig = methods[(size_t)rng.uniform_int(0, (int)methods.size() - 1)];
      s.receiver = -1;
      for (const TypeTag& t : info.signatures.at(s.sig).params)
        s.args.push_back(t.kind == Prim::Subject
                             ? Arg::of_ref(-1)
                             : Arg::lit(random_literal(t, rng)));
      size_t pos = (size_t)rng.uniform_int(0, (int)out.stmts.size());
      out.stmts.insert(out.stmts.begin() + pos, std::move(s));
    }
  }
  if (mutated_count) *mutated_count = events;
  return repair(out, unit, info, rng);
}

}  // namespace hmx
