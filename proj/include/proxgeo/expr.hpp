#pragma once

#include <Eigen/Dense>
#include <cctype>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "proxgeo/dual.hpp"

namespace proxgeo {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
  std::size_t position;
};

/// A parsed C^2 scalar expression over named chart coordinates.
///
/// Grammar: identifiers, real literals, + - * /, unary -, parentheses and the
/// functions sin, cos, tan, exp, ln, sqrt, pow(a,b). Evaluation is generic
/// over the scalar type; gradients and Hessians come from (nested) dual
/// numbers, one seeded pass per direction.
class PsiExpr {
  enum class Op : uint8_t {
    Const, Var, Add, Sub, Mul, Div, Neg,
    Sin, Cos, Tan, Exp, Ln, Sqrt, Pow,
  };
  struct Instr {
    Op op;
    double cval = 0.0;
    int var = -1;
  };

 public:
  PsiExpr() = default;

  /// Parse `source` with `vars` mapping coordinate names (and aliases) to
  /// coordinate indices 0..n-1.
  static PsiExpr parse(const std::string& source, const std::map<std::string, int>& vars, int nvars) {
    Parser p{source, vars};
    auto tape = std::make_shared<std::vector<Instr>>();
    p.expr(*tape);
    p.skip_ws();
    if (p.pos != source.size()) throw ParseError("unexpected trailing input", p.pos);
    PsiExpr e;
    e.tape_ = std::move(tape);
    e.source_ = source;
    e.nvars_ = nvars;
    return e;
  }

  const std::string& source() const { return source_; }
  int nvars() const { return nvars_; }
  bool negated() const { return negated_; }

  /// Same expression with flipped sign (used to pin the psi <= 0 convention
  /// and to build the closed complement).
  PsiExpr with_flipped_sign() const {
    PsiExpr e = *this;
    auto tape = std::make_shared<std::vector<Instr>>(*tape_);
    tape->push_back({Op::Neg});
    e.tape_ = std::move(tape);
    e.negated_ = !negated_;
    return e;
  }

  double value(const Eigen::VectorXd& x) const { return eval<double>(x.data(), x.size()); }

  /// Coordinate partials (the differential, not the metric gradient).
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
    const int n = static_cast<int>(x.size());
    Eigen::VectorXd g(n);
    std::vector<Dual<double>> vars(n);
    for (int k = 0; k < n; ++k) vars[k] = Dual<double>(x[k], 0.0);
    for (int i = 0; i < n; ++i) {
      vars[i].d = 1.0;
      g[i] = eval_vars<Dual<double>>(vars).d;
      vars[i].d = 0.0;
    }
    return g;
  }

  /// Coordinate second partials.
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const {
    using DD = Dual<Dual<double>>;
    const int n = static_cast<int>(x.size());
    Eigen::MatrixXd h(n, n);
    std::vector<DD> vars(n);
    for (int k = 0; k < n; ++k) vars[k] = DD(Dual<double>(x[k], 0.0), Dual<double>(0.0, 0.0));
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        vars[i].v.d = 1.0;
        vars[j].d.v = 1.0;
        h(i, j) = h(j, i) = eval_vars<DD>(vars).d.d;
        vars[i].v.d = 0.0;
        vars[j].d.v = 0.0;
      }
    }
    return h;
  }

  template <class T>
  T eval(const double* x, Eigen::Index n) const {
    std::vector<T> vars(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) vars[static_cast<std::size_t>(k)] = T(x[k]);
    return eval_vars<T>(vars);
  }

  template <class T>
  T eval_vars(const std::vector<T>& vars) const {
    std::vector<T> st;
    st.reserve(16);
    for (const Instr& in : *tape_) {
      switch (in.op) {
        case Op::Const: st.push_back(T(in.cval)); break;
        case Op::Var: st.push_back(vars.at(static_cast<std::size_t>(in.var))); break;
        case Op::Neg: st.back() = -st.back(); break;
        case Op::Sin: st.back() = sin(st.back()); break;
        case Op::Cos: st.back() = cos(st.back()); break;
        case Op::Tan: st.back() = tan(st.back()); break;
        case Op::Exp: st.back() = exp(st.back()); break;
        case Op::Ln: st.back() = log(st.back()); break;
        case Op::Sqrt: st.back() = sqrt(st.back()); break;
        default: {
          T b = st.back();
          st.pop_back();
          T a = st.back();
          switch (in.op) {
            case Op::Add: st.back() = a + b; break;
            case Op::Sub: st.back() = a - b; break;
            case Op::Mul: st.back() = a * b; break;
            case Op::Div: st.back() = a / b; break;
            case Op::Pow: st.back() = pow(a, b); break;
            default: throw std::logic_error("bad instruction");
          }
        }
      }
    }
    if (st.size() != 1) throw std::logic_error("unbalanced expression tape");
    return st.back();
  }

 private:
  struct Parser {
    const std::string& src;
    const std::map<std::string, int>& vars;
    std::size_t pos = 0;

    void skip_ws() {
      while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    bool eat(char c) {
      skip_ws();
      if (pos < src.size() && src[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }
    char peek() {
      skip_ws();
      return pos < src.size() ? src[pos] : '\0';
    }

    void expr(std::vector<Instr>& out) {
      term(out);
      while (true) {
        if (eat('+')) {
          term(out);
          out.push_back({Op::Add});
        } else if (eat('-')) {
          term(out);
          out.push_back({Op::Sub});
        } else {
          return;
        }
      }
    }

    void term(std::vector<Instr>& out) {
      unary(out);
      while (true) {
        if (eat('*')) {
          unary(out);
          out.push_back({Op::Mul});
        } else if (eat('/')) {
          unary(out);
          out.push_back({Op::Div});
        } else {
          return;
        }
      }
    }

    void unary(std::vector<Instr>& out) {
      if (eat('-')) {
        unary(out);
        out.push_back({Op::Neg});
        return;
      }
      if (eat('+')) {
        unary(out);
        return;
      }
      primary(out);
    }

    void primary(std::vector<Instr>& out) {
      skip_ws();
      if (pos >= src.size()) throw ParseError("unexpected end of expression", pos);
      char c = src[pos];
      if (c == '(') {
        ++pos;
        expr(out);
        if (!eat(')')) throw ParseError("expected ')'", pos);
        return;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        number(out);
        return;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        identifier(out);
        return;
      }
      throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }

    void number(std::vector<Instr>& out) {
      std::size_t start = pos;
      while (pos < src.size() &&
             (std::isdigit(static_cast<unsigned char>(src[pos])) || src[pos] == '.')) ++pos;
      if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
        std::size_t save = pos++;
        if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
        if (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
          while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        } else {
          pos = save;
        }
      }
      try {
        out.push_back({Op::Const, std::stod(src.substr(start, pos - start)), -1});
      } catch (const std::exception&) {
        throw ParseError("malformed number", start);
      }
    }

    void identifier(std::vector<Instr>& out) {
      std::size_t start = pos;
      while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) ++pos;
      std::string name = src.substr(start, pos - start);
      if (peek() == '(') {
        Op op;
        int arity = 1;
        if (name == "sin") op = Op::Sin;
        else if (name == "cos") op = Op::Cos;
        else if (name == "tan") op = Op::Tan;
        else if (name == "exp") op = Op::Exp;
        else if (name == "ln") op = Op::Ln;
        else if (name == "sqrt") op = Op::Sqrt;
        else if (name == "pow") { op = Op::Pow; arity = 2; }
        else throw ParseError("unknown function '" + name + "'", start);
        eat('(');
        expr(out);
        if (arity == 2) {
          if (!eat(',')) throw ParseError("pow expects two arguments", pos);
          expr(out);
        }
        if (!eat(')')) throw ParseError("expected ')'", pos);
        out.push_back({op});
        return;
      }
      auto it = vars.find(name);
      if (it == vars.end()) throw ParseError("unknown variable '" + name + "'", start);
      out.push_back({Op::Var, 0.0, it->second});
    }
  };

  std::shared_ptr<const std::vector<Instr>> tape_;
  std::string source_;
  int nvars_ = 0;
  bool negated_ = false;
};

}  // namespace proxgeo
