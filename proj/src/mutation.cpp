#include "hmx/mutation.hpp"

#include <functional>
#include <memory>
#include <set>

namespace hmx {

namespace {

Expr* find_expr_in(Expr* e, int node_id) {
  if (e->node_id == node_id) return e;
  for (auto& k : e->kids)
    if (Expr* r = find_expr_in(k.get(), node_id)) return r;
  return nullptr;
}

Expr* find_expr(std::vector<StmtPtr>& body, int node_id) {
  for (auto& s : body) {
    if (s->expr)
      if (Expr* r = find_expr_in(s->expr.get(), node_id)) return r;
    if (Expr* r = find_expr(s->then_body, node_id)) return r;
    if (Expr* r = find_expr(s->else_body, node_id)) return r;
  }
  return nullptr;
}

Expr* find_expr(SubjectUnit& u, int node_id) {
  for (size_t i = 0; i < u.callable_count(); ++i)
    if (Expr* r = find_expr(u.callable(i).body, node_id)) return r;
  return nullptr;
}

Stmt* find_branch(std::vector<StmtPtr>& body, int branch_id) {
  for (auto& s : body) {
    if (s->branch_id == branch_id) return s.get();
    if (Stmt* r = find_branch(s->then_body, branch_id)) return r;
    if (Stmt* r = find_branch(s->else_body, branch_id)) return r;
  }
  return nullptr;
}

Stmt* find_branch(SubjectUnit& u, int branch_id) {
  for (size_t i = 0; i < u.callable_count(); ++i)
    if (Stmt* r = find_branch(u.callable(i).body, branch_id)) return r;
  return nullptr;
}

const BinOp kArith[] = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div,
                        BinOp::Mod};
const BinOp kRelational[] = {BinOp::Eq, BinOp::Ne, BinOp::Lt,
                             BinOp::Le, BinOp::Gt, BinOp::Ge};

class MutantBuilder {
 public:
  explicit MutantBuilder(const SubjectUnit& unit) : unit_(unit) {}

  std::vector<Mutant> run() {
    for (size_t i = 0; i < unit_.callable_count(); ++i)
      walk_block(unit_.callable(i).body);
    return std::move(out_);
  }

 private:
  void add(const char* op, int node_id, std::string desc,
           const std::function<void(SubjectUnit&)>& apply) {
    Mutant m;
    m.id = static_cast<int>(out_.size());
    m.op = op;
    m.node_id = node_id;
    m.description = std::move(desc);
    m.unit = unit_.clone();
    apply(m.unit);
    out_.push_back(std::move(m));
  }

  void walk_block(const std::vector<StmtPtr>& body) {
    for (const auto& s : body) {
      if ((s->kind == StmtKind::If || s->kind == StmtKind::While) &&
          s->branch_id >= 0) {
        int bid = s->branch_id;
        int pred_id = s->expr->node_id;
        add("NC", pred_id,
            "negate condition @ line " + std::to_string(s->line),
            [bid](SubjectUnit& u) {
              Stmt* st = find_branch(u, bid);
              auto wrapper = std::make_unique<Expr>();
              wrapper->kind = ExprKind::Unary;
              wrapper->un = UnOp::Not;
              wrapper->type = TypeTag::of(Prim::Boolean);
              wrapper->line = st->expr->line;
              wrapper->node_id = st->expr->node_id;
              st->expr->node_id = -2;
              wrapper->kids.push_back(std::move(st->expr));
              st->expr = std::move(wrapper);
            });
      }
      if (s->expr) walk_expr(*s->expr);
      walk_block(s->then_body);
      walk_block(s->else_body);
    }
  }

  void walk_expr(const Expr& e) {
    if (e.kind == ExprKind::Binary && is_arith(e.bin)) {
      for (BinOp rep : kArith) {
        if (rep == e.bin) continue;
        if (rep == BinOp::Mod && e.type.kind == Prim::Double) continue;
        emit_binop_swap("AOR", e, rep);
      }
    } else if (e.kind == ExprKind::Binary && is_relational(e.bin)) {
      bool ordered = e.kids[0]->type.kind != Prim::Boolean;
      for (BinOp rep : kRelational) {
        if (rep == e.bin) continue;
        if (!ordered && rep != BinOp::Eq && rep != BinOp::Ne) continue;
        emit_binop_swap("ROR", e, rep);
      }
    } else if (e.kind == ExprKind::Literal) {
      emit_literal_mutants(e);
    }
    for (const auto& k : e.kids) walk_expr(*k);
  }

  void emit_binop_swap(const char* op, const Expr& e, BinOp rep) {
    int id = e.node_id;
    add(op, id,
        std::string(binop_text(e.bin)) + " -> " + binop_text(rep) +
            " @ line " + std::to_string(e.line),
        [id, rep](SubjectUnit& u) { find_expr(u, id)->bin = rep; });
  }

  void emit_literal_swap(const Expr& e, Value replacement) {
    int id = e.node_id;
    add("CR", id,
        render_value(e.literal) + " -> " + render_value(replacement) +
            " @ line " + std::to_string(e.line),
        [id, replacement](SubjectUnit& u) {
          find_expr(u, id)->literal = replacement;
        });
  }

  void emit_literal_mutants(const Expr& e) {
    switch (e.literal.prim()) {
      case Prim::Int: {
        int32_t c = e.literal.as_int();
        std::set<int64_t> reps{0, 1, -1, int64_t{c} + 1, int64_t{c} - 1};
        for (int64_t r : reps)
          if (r != c && r >= INT32_MIN && r <= INT32_MAX)
            emit_literal_swap(e, Value::of_int(static_cast<int32_t>(r)));
        break;
      }
      case Prim::Long: {
        int64_t c = e.literal.as_long();
        std::set<int64_t> reps{0, 1, -1};
        if (c != INT64_MAX) reps.insert(c + 1);
        if (c != INT64_MIN) reps.insert(c - 1);
        for (int64_t r : reps)
          if (r != c) emit_literal_swap(e, Value::of_long(r));
        break;
      }
      case Prim::Double: {
        double c = e.literal.as_double();
        std::set<double> reps{0.0, 1.0, -1.0, c + 1.0, c - 1.0};
        for (double r : reps)
          if (r != c) emit_literal_swap(e, Value::of_double(r));
        break;
      }
      case Prim::Boolean:
        emit_literal_swap(e, Value::of_bool(!e.literal.as_bool()));
        break;
      case Prim::Char: {
        uint32_t c = e.literal.as_char();
        if (c + 1 <= 0x10FFFF) emit_literal_swap(e, Value::of_char(c + 1));
        if (c > 0) emit_literal_swap(e, Value::of_char(c - 1));
        break;
      }
      case Prim::String:
        if (!e.literal.as_string().empty())
          emit_literal_swap(e, Value::of_string(""));
        break;
      default:
        break;
    }
  }

  const SubjectUnit& unit_;
  std::vector<Mutant> out_;
};

}  // namespace

std::vector<Mutant> generate_mutants(const SubjectUnit& unit) {
  return MutantBuilder(unit).run();
}

MutationResult score_suite(const std::vector<TestCase>& suite,
                           const std::string& unit_name, const Corpus& corpus,
                           const CorpusInfo& info,
                           const SandboxLimits& limits) {
  const SubjectUnit& original = corpus.units.at(unit_name);
  std::vector<Mutant> mutants = generate_mutants(original);
  MutationResult result;
  result.total = static_cast<int>(mutants.size());

  std::vector<ExecutionTrace> baseline;
  baseline.reserve(suite.size());
  for (const TestCase& t : suite)
    baseline.push_back(execute_test(t, corpus, info, limits));

  // Baseline value sequences at watched nodes, computed lazily per node.
  std::map<int, std::vector<std::vector<std::string>>> baseline_watch;
  auto watch_of = [&](int node) -> const std::vector<std::vector<std::string>>& {
    auto it = baseline_watch.find(node);
    if (it == baseline_watch.end()) {
      std::vector<std::vector<std::string>> seqs;
      for (const TestCase& t : suite)
        seqs.push_back(execute_test(t, corpus, info, limits, node).watched);
      it = baseline_watch.emplace(node, std::move(seqs)).first;
    }
    return it->second;
  };

  for (const Mutant& m : mutants) {
    Corpus mutated;
    for (const auto& [name, u] : corpus.units)
      mutated.units.emplace(name, name == unit_name ? m.unit.clone()
                                                    : u.clone());
    const auto& base_seqs = watch_of(m.node_id);
    bool weak = false, strong = false;
    for (size_t i = 0; i < suite.size() && !strong; ++i) {
      ExecutionTrace tr = execute_test(suite[i], mutated, info, limits,
                                       m.node_id);
      if (tr.watched != base_seqs[i]) weak = true;
      if (tr.observations != baseline[i].observations) strong = true;
    }
    if (strong) result.strong_killed.insert(m.id);
    // An observable output difference implies an infected state, so strong
    // kills count as weak kills even when the watched sequence matches.
    if (weak || strong) result.weak_killed.insert(m.id);
  }
  return result;
}

}  // namespace hmx
