#pragma once

#include "pinncert/common.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <utility>

namespace pinncert {

/// A small expression language for config-defined problems:
///
///   expr    = term { ("+" | "-") term } ;
///   term    = factor { ("*" | "/") factor } ;
///   factor  = unary [ "^" factor ] ;
///   unary   = "-" unary | primary ;
///   primary = number | name | name "(" expr ")" | "(" expr ")" ;
///   name    = variable | "pi" | "e" | "sin" | "cos" | "exp" | "abs" ;
///
/// Variables are free identifiers (x, y, t, u, ...). Expressions support
/// symbolic differentiation with respect to one variable; the derivative of
/// abs uses sign and the exponent of "^" must be constant.
class Expression {
 public:
  using Env = std::map<std::string, double>;

  static Expression parse(const std::string& text) {
    Parser parser(text);
    Expression e;
    e.root_ = parser.parse_expr();
    parser.expect_end();
    return e;
  }

  double eval(const Env& env) const { return eval_node(*root_, env); }

  Expression derivative(const std::string& var) const {
    Expression e;
    e.root_ = diff_node(*root_, var);
    return e;
  }

  bool depends_on(const std::string& var) const { return depends(*root_, var); }

 private:
  struct Node {
    enum class Kind { Const, Var, Unary, Binary, Call } kind;
    double value = 0.0;       // Const
    std::string name;         // Var / Call function name
    char op = 0;              // Binary operator
    std::shared_ptr<Node> a, b;
  };
  using NodePtr = std::shared_ptr<Node>;

  static NodePtr constant(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Const;
    n->value = v;
    return n;
  }
  static NodePtr variable(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Var;
    n->name = std::move(name);
    return n;
  }
  static NodePtr unary(NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Unary;
    n->a = std::move(a);
    return n;
  }
  static NodePtr binary(char op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Binary;
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }
  static NodePtr call(std::string fn, NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Call;
    n->name = std::move(fn);
    n->a = std::move(a);
    return n;
  }

  class Parser {
   public:
    explicit Parser(const std::string& text) : text_(text) {}

    NodePtr parse_expr() {
      NodePtr lhs = parse_term();
      while (true) {
        skip_ws();
        if (peek() == '+' || peek() == '-') {
          const char op = get();
          lhs = binary(op, lhs, parse_term());
        } else {
          return lhs;
        }
      }
    }

    void expect_end() {
      skip_ws();
      if (pos_ != text_.size())
        throw ConfigError("expression: unexpected trailing input at '" + text_.substr(pos_) + "'");
    }

   private:
    NodePtr parse_term() {
      NodePtr lhs = parse_factor();
      while (true) {
        skip_ws();
        if (peek() == '*' || peek() == '/') {
          const char op = get();
          lhs = binary(op, lhs, parse_factor());
        } else {
          return lhs;
        }
      }
    }

    NodePtr parse_factor() { return parse_unary(); }

    // '^' binds tighter than unary minus: -x^2 = -(x^2)
    NodePtr parse_unary() {
      skip_ws();
      if (peek() == '-') {
        get();
        return unary(parse_unary());
      }
      return parse_power();
    }

    NodePtr parse_power() {
      NodePtr base = parse_primary();
      skip_ws();
      if (peek() == '^') {
        get();
        return binary('^', base, parse_unary());  // right associative
      }
      return base;
    }

    NodePtr parse_primary() {
      skip_ws();
      const char c = peek();
      if (c == '(') {
        get();
        NodePtr inner = parse_expr();
        skip_ws();
        if (get() != ')') throw ConfigError("expression: missing ')'");
        return inner;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        size_t consumed = 0;
        const double v = std::stod(text_.substr(pos_), &consumed);
        pos_ += consumed;
        return constant(v);
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string name;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
          name.push_back(text_[pos_++]);
        if (name == "pi") return constant(M_PI);
        if (name == "e") return constant(M_E);
        skip_ws();
        if (peek() == '(') {
          if (name != "sin" && name != "cos" && name != "exp" && name != "abs")
            throw ConfigError("expression: unknown function '" + name + "'");
          get();
          NodePtr arg = parse_expr();
          skip_ws();
          if (get() != ')') throw ConfigError("expression: missing ')' after " + name);
          return call(name, arg);
        }
        return variable(name);
      }
      throw ConfigError(std::string("expression: unexpected character '") + c + "'");
    }

    void skip_ws() {
      while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    char get() { return pos_ < text_.size() ? text_[pos_++] : '\0'; }

    const std::string& text_;
    size_t pos_ = 0;
  };

  static double eval_node(const Node& n, const Env& env) {
    switch (n.kind) {
      case Node::Kind::Const: return n.value;
      case Node::Kind::Var: {
        auto it = env.find(n.name);
        if (it == env.end()) throw ConfigError("expression: unbound variable '" + n.name + "'");
        return it->second;
      }
      case Node::Kind::Unary: return -eval_node(*n.a, env);
      case Node::Kind::Binary: {
        const double a = eval_node(*n.a, env);
        const double b = eval_node(*n.b, env);
        switch (n.op) {
          case '+': return a + b;
          case '-': return a - b;
          case '*': return a * b;
          case '/': return a / b;
          default: return std::pow(a, b);
        }
      }
      default: {
        const double a = eval_node(*n.a, env);
        if (n.name == "sin") return std::sin(a);
        if (n.name == "cos") return std::cos(a);
        if (n.name == "exp") return std::exp(a);
        if (n.name == "abs") return std::abs(a);
        return a >= 0.0 ? 1.0 : -1.0;  // sign (internal, from d|x|)
      }
    }
  }

  static bool depends(const Node& n, const std::string& var) {
    switch (n.kind) {
      case Node::Kind::Const: return false;
      case Node::Kind::Var: return n.name == var;
      case Node::Kind::Unary: return depends(*n.a, var);
      case Node::Kind::Binary: return depends(*n.a, var) || depends(*n.b, var);
      default: return depends(*n.a, var);
    }
  }

  static NodePtr diff_node(const Node& n, const std::string& var) {
    switch (n.kind) {
      case Node::Kind::Const: return constant(0.0);
      case Node::Kind::Var: return constant(n.name == var ? 1.0 : 0.0);
      case Node::Kind::Unary: return unary(diff_node(*n.a, var));
      case Node::Kind::Binary: {
        NodePtr da = diff_node(*n.a, var);
        NodePtr db = diff_node(*n.b, var);
        switch (n.op) {
          case '+': return binary('+', da, db);
          case '-': return binary('-', da, db);
          case '*':
            return binary('+', binary('*', da, n.b), binary('*', n.a, db));
          case '/':
            return binary('/', binary('-', binary('*', da, n.b), binary('*', n.a, db)),
                          binary('*', n.b, n.b));
          default: {
            if (depends(*n.b, var))
              throw ConfigError("expression: d/d" + var + " of a^b needs a constant exponent");
            // c * a^(b-1) * da
            return binary('*', binary('*', n.b, binary('^', n.a, binary('-', n.b, constant(1.0)))),
                          da);
          }
        }
      }
      default: {
        NodePtr da = diff_node(*n.a, var);
        if (n.name == "sin") return binary('*', call("cos", n.a), da);
        if (n.name == "cos") return unary(binary('*', call("sin", n.a), da));
        if (n.name == "exp") return binary('*', call("exp", n.a), da);
        if (n.name == "abs") return binary('*', call("sign", n.a), da);
        return constant(0.0);  // derivative of sign (a.e.)
      }
    }
  }

  NodePtr root_;
};

}  // namespace pinncert
