#include <cstdio>
#include <cmath>
#include <sstream>

#include "multippl/parser.hpp"

namespace multippl {
namespace {

std::string real_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

const char* binary_op(ExprKind k) {
  switch (k) {
    case ExprKind::And: return "&&";
    case ExprKind::Or: return "||";
    case ExprKind::Eq: return "==";
    case ExprKind::Add: return "+";
    case ExprKind::Sub: return "-";
    case ExprKind::Mul: return "*";
    case ExprKind::Le: return "<=";
    case ExprKind::Lt: return "<";
    default: return nullptr;
  }
}

class Renderer {
 public:
  std::string program(const Program& p) {
    for (const auto& f : p.functions) {
      out_ << to_string(f.lang) << " fn " << f.name << "(";
      for (std::size_t i = 0; i < f.params.size(); ++i) {
        if (i) out_ << ", ";
        out_ << f.params[i].name << " : " << to_string(f.params[i].type);
      }
      out_ << ") -> " << to_string(f.ret) << " ";
      block(*f.body, f.lang);
      out_ << "\n\n";
    }
    out_ << to_string(p.main_lang) << " ";
    block(*p.main, p.main_lang);
    return out_.str();
  }

  std::string expression(const Expr& e, Lang lang) {
    body(e, lang);
    return out_.str();
  }

 private:
  std::ostringstream out_;
  int depth_ = 0;

  void newline() { out_ << "\n" << std::string(static_cast<std::size_t>(depth_) * 2, ' '); }

  // Short single-line bodies stay on the brace line.
  void block(const Expr& e, Lang lang) {
    Renderer inner;
    inner.depth_ = depth_ + 1;
    const std::string text = inner.expression(e, lang);
    if (text.find('\n') == std::string::npos && text.size() <= 60) {
      out_ << "{ " << text << " }";
      return;
    }
    out_ << "{";
    ++depth_;
    newline();
    out_ << text;
    --depth_;
    newline();
    out_ << "}";
  }

  // Contents of a block: a Disc expression or a Cont statement sequence.
  void body(const Expr& e, Lang lang) {
    if (lang == Lang::Cont) {
      seq(e);
    } else {
      expr(e, lang);
    }
  }

  void seq(const Expr& e) {
    const Expr* cur = &e;
    while (cur->kind == ExprKind::Let) {
      const Expr& value = cur->kid(0);
      if (cur->name != "_" && value.kind == ExprKind::Ret) {
        out_ << cur->name << " <- ";
        stmt_value(value.kid(0));
      } else if (cur->name != "_") {
        out_ << cur->name << " ~ ";
        stmt_value(value);
      } else {
        stmt_value(value);
      }
      out_ << ";";
      newline();
      cur = &cur->kid(1);
    }
    expr(*cur, Lang::Cont);
  }

  void stmt_value(const Expr& e) {
    if (e.kind == ExprKind::Let) {
      block(e, Lang::Cont);
    } else {
      expr(e, Lang::Cont);
    }
  }

  static bool is_atomic(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Var:
      case ExprKind::True:
      case ExprKind::False:
      case ExprKind::Unit:
      case ExprKind::Pair:
      case ExprKind::Index:
      case ExprKind::Discrete:
      case ExprKind::Unif:
      case ExprKind::Obs:
      case ExprKind::Sample:
      case ExprKind::Exact:
      case ExprKind::Nil:
      case ExprKind::Push:
      case ExprKind::Head:
      case ExprKind::Tail:
      case ExprKind::Call:
        return true;
      case ExprKind::RealLit:
        return e.real >= 0.0 && !std::signbit(e.real);
      case ExprKind::IntLit:
        return e.integer >= 0;
      default:
        return false;
    }
  }

  static bool is_operator(const Expr& e) {
    return binary_op(e.kind) != nullptr || e.kind == ExprKind::Not || e.kind == ExprKind::Neg ||
           e.kind == ExprKind::RealLit || e.kind == ExprKind::IntLit;
  }

  void operand(const Expr& e, Lang lang) {
    if (is_atomic(e)) {
      expr(e, lang);
    } else if (e.kind == ExprKind::Let) {
      block(e, lang);
    } else {
      out_ << "(";
      expr(e, lang);
      out_ << ")";
    }
  }

  // Expression in a position parsed at the `||` level.
  void op_expr(const Expr& e, Lang lang) {
    if (is_atomic(e) || is_operator(e)) {
      expr(e, lang);
    } else {
      operand(e, lang);
    }
  }

  void args(const std::vector<ExprPtr>& kids, Lang lang) {
    out_ << "(";
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (i) out_ << ", ";
      expr(*kids[i], lang);
    }
    out_ << ")";
  }

  void expr(const Expr& e, Lang lang) {
    if (const char* op = binary_op(e.kind)) {
      operand(e.kid(0), lang);
      out_ << " " << op << " ";
      operand(e.kid(1), lang);
      return;
    }
    switch (e.kind) {
      case ExprKind::Var: out_ << e.name; return;
      case ExprKind::True: out_ << "true"; return;
      case ExprKind::False: out_ << "false"; return;
      case ExprKind::Unit: out_ << "()"; return;
      case ExprKind::RealLit: out_ << real_text(e.real); return;
      case ExprKind::IntLit: out_ << e.integer; return;
      case ExprKind::Not:
        out_ << "!";
        operand(e.kid(0), lang);
        return;
      case ExprKind::Neg:
        out_ << "-";
        operand(e.kid(0), lang);
        return;
      case ExprKind::Pair:
        out_ << "(";
        expr(e.kid(0), lang);
        out_ << ", ";
        expr(e.kid(1), lang);
        out_ << ")";
        return;
      case ExprKind::Fst:
      case ExprKind::Snd:
        out_ << (e.kind == ExprKind::Fst ? "fst(" : "snd(");
        expr(e.kid(0), lang);
        out_ << ")";
        return;
      case ExprKind::Index:
        operand(e.kid(0), lang);
        out_ << "[" << e.integer << "]";
        return;
      case ExprKind::Ret:
        out_ << "ret ";
        op_expr(e.kid(0), lang);
        return;
      case ExprKind::Let:
        if (lang == Lang::Cont) {
          seq(e);
        } else if (e.name == "_" && e.kid(0).kind == ExprKind::Observe) {
          out_ << "observe ";
          op_expr(e.kid(0).kid(0), lang);
          out_ << " in";
          newline();
          expr(e.kid(1), lang);
        } else {
          out_ << "let " << e.name << " = ";
          expr(e.kid(0), lang);
          out_ << " in";
          newline();
          expr(e.kid(1), lang);
        }
        return;
      case ExprKind::Ite:
        out_ << "if ";
        op_expr(e.kid(0), lang);
        out_ << " ";
        block(e.kid(1), lang);
        out_ << " else ";
        block(e.kid(2), lang);
        return;
      case ExprKind::Flip:
        out_ << "flip(";
        expr(e.kid(0), Lang::Cont);
        out_ << ")";
        return;
      case ExprKind::Pois:
        out_ << "pois(";
        expr(e.kid(0), Lang::Cont);
        out_ << ")";
        return;
      case ExprKind::Unif:
        out_ << "unif";
        args(e.kids, Lang::Cont);
        return;
      case ExprKind::Discrete:
        out_ << "discrete";
        args(e.kids, Lang::Cont);
        return;
      case ExprKind::Observe:
        out_ << "observe ";
        op_expr(e.kid(0), lang);
        return;
      case ExprKind::Obs:
        out_ << "observe(";
        expr(e.kid(0), Lang::Cont);
        out_ << ", ";
        expr(e.kid(1), Lang::Cont);
        out_ << ")";
        return;
      case ExprKind::Sample:
        out_ << "sample ";
        block(e.kid(0), Lang::Cont);
        return;
      case ExprKind::Exact:
        out_ << "exact ";
        block(e.kid(0), Lang::Disc);
        return;
      case ExprKind::While:
        out_ << "while ";
        op_expr(e.kid(0), Lang::Cont);
        out_ << " ";
        block(e.kid(1), Lang::Cont);
        return;
      case ExprKind::Nil: out_ << "[]"; return;
      case ExprKind::Push:
        out_ << "push";
        args(e.kids, lang);
        return;
      case ExprKind::Head:
        out_ << "head";
        args(e.kids, lang);
        return;
      case ExprKind::Tail:
        out_ << "tail";
        args(e.kids, lang);
        return;
      case ExprKind::Call:
        out_ << e.name;
        args(e.kids, lang);
        return;
      default:
        out_ << "<?>";
        return;
    }
  }
};

}  // namespace

std::string render(const Program& p) { return Renderer().program(p); }

std::string render(const Expr& e, Lang lang) { return Renderer().expression(e, lang); }

}  // namespace multippl
