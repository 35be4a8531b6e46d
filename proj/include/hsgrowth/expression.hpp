#pragma once

// Closed-form expressions over (x, y) used for custom initial data.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?
//   primary := number | x | y | pi | e | func '(' expr ')' | '(' expr ')'
//   func    := exp | sin | cos | sqrt | abs | log | tanh

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>

#include "hsgrowth/errors.hpp"

namespace hsgrowth {

class ExpressionError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class Expression {
 public:
  static Expression parse(std::string_view text) {
    Parser parser{text};
    auto root = parser.expression();
    parser.skip_space();
    if (parser.pos != text.size()) {
      parser.fail("unexpected trailing input");
    }
    return Expression(std::string(text), std::move(root));
  }

  double operator()(double x, double y) const { return root_->eval(x, y); }

  const std::string& text() const { return text_; }

 private:
  struct Node {
    enum class Kind { Constant, X, Y, Add, Sub, Mul, Div, Pow, Neg, Call };
    Kind kind = Kind::Constant;
    double value = 0.0;
    double (*func)(double) = nullptr;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;

    double eval(double x, double y) const {
      switch (kind) {
        case Kind::Constant: return value;
        case Kind::X: return x;
        case Kind::Y: return y;
        case Kind::Add: return lhs->eval(x, y) + rhs->eval(x, y);
        case Kind::Sub: return lhs->eval(x, y) - rhs->eval(x, y);
        case Kind::Mul: return lhs->eval(x, y) * rhs->eval(x, y);
        case Kind::Div: return lhs->eval(x, y) / rhs->eval(x, y);
        case Kind::Pow: return std::pow(lhs->eval(x, y), rhs->eval(x, y));
        case Kind::Neg: return -lhs->eval(x, y);
        case Kind::Call: return func(lhs->eval(x, y));
      }
      return 0.0;
    }
  };
  using NodePtr = std::shared_ptr<const Node>;

  static NodePtr leaf(Node::Kind kind, double value = 0.0) {
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->value = value;
    return node;
  }

  static NodePtr binary(Node::Kind kind, NodePtr lhs, NodePtr rhs) {
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->lhs = std::move(lhs);
    node->rhs = std::move(rhs);
    return node;
  }

  struct Parser {
    std::string_view text;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
      throw ExpressionError("expression '" + std::string(text) + "': " + what +
                            " at position " + std::to_string(pos));
    }

    void skip_space() {
      while (pos < text.size() &&
             std::isspace(static_cast<unsigned char>(text[pos]))) {
        ++pos;
      }
    }

    bool accept(char c) {
      skip_space();
      if (pos < text.size() && text[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }

    NodePtr expression() {
      NodePtr lhs = term();
      for (;;) {
        if (accept('+')) {
          lhs = binary(Node::Kind::Add, lhs, term());
        } else if (accept('-')) {
          lhs = binary(Node::Kind::Sub, lhs, term());
        } else {
          return lhs;
        }
      }
    }

    NodePtr term() {
      NodePtr lhs = unary();
      for (;;) {
        if (accept('*')) {
          lhs = binary(Node::Kind::Mul, lhs, unary());
        } else if (accept('/')) {
          lhs = binary(Node::Kind::Div, lhs, unary());
        } else {
          return lhs;
        }
      }
    }

    NodePtr unary() {
      if (accept('-')) return binary(Node::Kind::Neg, unary(), nullptr);
      if (accept('+')) return unary();
      return power();
    }

    NodePtr power() {
      NodePtr base = primary();
      if (accept('^')) return binary(Node::Kind::Pow, base, unary());
      return base;
    }

    NodePtr primary() {
      skip_space();
      if (pos >= text.size()) fail("unexpected end of input");
      const char c = text[pos];
      if (accept('(')) {
        NodePtr inner = expression();
        if (!accept(')')) fail("expected ')'");
        return inner;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        const std::string rest(text.substr(pos));
        char* end = nullptr;
        const double value = std::strtod(rest.c_str(), &end);
        if (end == rest.c_str()) fail("malformed number");
        pos += static_cast<std::size_t>(end - rest.c_str());
        return leaf(Node::Kind::Constant, value);
      }
      if (std::isalpha(static_cast<unsigned char>(c))) {
        const std::size_t start = pos;
        while (pos < text.size() &&
               std::isalnum(static_cast<unsigned char>(text[pos]))) {
          ++pos;
        }
        const std::string_view name = text.substr(start, pos - start);
        if (name == "x") return leaf(Node::Kind::X);
        if (name == "y") return leaf(Node::Kind::Y);
        if (name == "pi") return leaf(Node::Kind::Constant, std::numbers::pi);
        if (name == "e") return leaf(Node::Kind::Constant, std::numbers::e);
        double (*func)(double) = lookup(name);
        if (func == nullptr) {
          pos = start;
          fail("unknown identifier '" + std::string(name) + "'");
        }
        if (!accept('(')) fail("expected '(' after function name");
        auto node = std::make_shared<Node>();
        node->kind = Node::Kind::Call;
        node->func = func;
        node->lhs = expression();
        if (!accept(')')) fail("expected ')'");
        return node;
      }
      fail(std::string("unexpected character '") + c + "'");
    }

    static double (*lookup(std::string_view name))(double) {
      if (name == "exp") return [](double v) { return std::exp(v); };
      if (name == "sin") return [](double v) { return std::sin(v); };
      if (name == "cos") return [](double v) { return std::cos(v); };
      if (name == "sqrt") return [](double v) { return std::sqrt(v); };
      if (name == "abs") return [](double v) { return std::abs(v); };
      if (name == "log") return [](double v) { return std::log(v); };
      if (name == "tanh") return [](double v) { return std::tanh(v); };
      return nullptr;
    }
  };

  Expression(std::string text, NodePtr root)
      : text_(std::move(text)), root_(std::move(root)) {}

  std::string text_;
  NodePtr root_;
};

}  // namespace hsgrowth
