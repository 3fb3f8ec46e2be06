// SPDX-License-Identifier: Apache-2.0
#include "qnids/param_expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <utility>

namespace qnids {

struct ParamExpr::Node {
  Kind kind = Kind::Constant;
  double value = 0.0;
  std::string name;
  std::vector<ParamExpr> children;
};

namespace {

bool valid_symbol_name(const std::string& name) {
  if (name.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
  for (char c : name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

ParamExpr::ParamExpr() : ParamExpr(constant(0.0)) {}

ParamExpr::ParamExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

ParamExpr ParamExpr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = value;
  return ParamExpr(std::move(n));
}

ParamExpr ParamExpr::symbol(const std::string& name) {
  if (!valid_symbol_name(name)) {
    throw std::invalid_argument("ParamExpr: invalid symbol name '" + name + "'");
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Symbol;
  n->name = name;
  return ParamExpr(std::move(n));
}

ParamExpr ParamExpr::sum(std::vector<ParamExpr> terms) {
  return make_nary(Kind::Sum, std::move(terms));
}

ParamExpr ParamExpr::product(std::vector<ParamExpr> factors) {
  return make_nary(Kind::Product, std::move(factors));
}

ParamExpr ParamExpr::make_nary(Kind kind, std::vector<ParamExpr> items) {
  const bool is_sum = (kind == Kind::Sum);
  std::vector<ParamExpr> flat;
  flat.reserve(items.size());
  for (auto& e : items) {
    if (e.kind() == kind) {
      for (const auto& c : e.children()) flat.push_back(c);
    } else {
      flat.push_back(std::move(e));
    }
  }
  double acc = is_sum ? 0.0 : 1.0;
  std::vector<ParamExpr> rest;
  for (auto& e : flat) {
    if (e.is_constant()) {
      if (is_sum) {
        acc += e.constant_value();
      } else {
        acc *= e.constant_value();
      }
    } else {
      rest.push_back(std::move(e));
    }
  }
  if (!is_sum && acc == 0.0) return constant(0.0);
  const bool identity = is_sum ? (acc == 0.0) : (acc == 1.0);
  std::vector<ParamExpr> out;
  if (!identity || rest.empty()) out.push_back(constant(acc));
  for (auto& e : rest) out.push_back(std::move(e));
  if (out.size() == 1) return out.front();
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->children = std::move(out);
  return ParamExpr(std::move(n));
}

ParamExpr::Kind ParamExpr::kind() const { return node_->kind; }

bool ParamExpr::is_constant() const { return node_->kind == Kind::Constant; }

double ParamExpr::constant_value() const {
  if (!is_constant()) throw std::logic_error("ParamExpr: not a constant");
  return node_->value;
}

const std::string& ParamExpr::symbol_name() const {
  if (node_->kind != Kind::Symbol) throw std::logic_error("ParamExpr: not a symbol");
  return node_->name;
}

const std::vector<ParamExpr>& ParamExpr::children() const { return node_->children; }

double ParamExpr::evaluate(const std::map<std::string, double>& binding) const {
  switch (node_->kind) {
    case Kind::Constant:
      return node_->value;
    case Kind::Symbol: {
      auto it = binding.find(node_->name);
      if (it == binding.end()) {
        throw std::invalid_argument("ParamExpr: unbound symbol '" + node_->name + "'");
      }
      return it->second;
    }
    case Kind::Sum: {
      double acc = 0.0;
      for (const auto& c : node_->children) acc += c.evaluate(binding);
      return acc;
    }
    case Kind::Product: {
      double acc = 1.0;
      for (const auto& c : node_->children) acc *= c.evaluate(binding);
      return acc;
    }
  }
  throw std::logic_error("ParamExpr: corrupt node kind");
}

ParamExpr ParamExpr::substitute(const std::map<std::string, double>& binding) const {
  switch (node_->kind) {
    case Kind::Constant:
      return *this;
    case Kind::Symbol: {
      auto it = binding.find(node_->name);
      if (it == binding.end()) return *this;
      if (!std::isfinite(it->second)) {
        throw std::invalid_argument("ParamExpr: non-finite value bound to symbol '" +
                                    node_->name + "'");
      }
      return constant(it->second);
    }
    case Kind::Sum:
    case Kind::Product: {
      std::vector<ParamExpr> items;
      items.reserve(node_->children.size());
      for (const auto& c : node_->children) items.push_back(c.substitute(binding));
      return node_->kind == Kind::Sum ? sum(std::move(items)) : product(std::move(items));
    }
  }
  throw std::logic_error("ParamExpr: corrupt node kind");
}

void ParamExpr::collect_symbols(std::set<std::string>& out) const {
  switch (node_->kind) {
    case Kind::Constant:
      return;
    case Kind::Symbol:
      out.insert(node_->name);
      return;
    case Kind::Sum:
    case Kind::Product:
      for (const auto& c : node_->children) c.collect_symbols(out);
      return;
  }
}

std::set<std::string> ParamExpr::symbols() const {
  std::set<std::string> out;
  collect_symbols(out);
  return out;
}

bool ParamExpr::has_symbols() const { return !symbols().empty(); }

bool ParamExpr::operator==(const ParamExpr& other) const {
  if (node_ == other.node_) return true;
  if (node_->kind != other.node_->kind) return false;
  switch (node_->kind) {
    case Kind::Constant:
      return node_->value == other.node_->value;
    case Kind::Symbol:
      return node_->name == other.node_->name;
    case Kind::Sum:
    case Kind::Product: {
      if (node_->children.size() != other.node_->children.size()) return false;
      for (std::size_t i = 0; i < node_->children.size(); ++i) {
        if (!(node_->children[i] == other.node_->children[i])) return false;
      }
      return true;
    }
  }
  return false;
}

std::string ParamExpr::to_text() const {
  switch (node_->kind) {
    case Kind::Constant:
      return format_double(node_->value);
    case Kind::Symbol:
      return node_->name;
    case Kind::Sum:
    case Kind::Product: {
      std::string out = node_->kind == Kind::Sum ? "(+" : "(*";
      for (const auto& c : node_->children) {
        out += ' ';
        out += c.to_text();
      }
      out += ')';
      return out;
    }
  }
  throw std::logic_error("ParamExpr: corrupt node kind");
}

namespace {

struct Tokenizer {
  explicit Tokenizer(const std::string& text) : text_(text) {}

  // Returns "", "(", ")" or an atom.
  std::string next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ >= text_.size()) return "";
    const char c = text_[pos_];
    if (c == '(' || c == ')') {
      ++pos_;
      return std::string(1, c);
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')') {
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  std::string peek() {
    const std::size_t save = pos_;
    std::string tok = next();
    pos_ = save;
    return tok;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

ParamExpr parse_atom(const std::string& tok) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != nullptr && *end == '\0' && end != tok.c_str()) {
    return ParamExpr::constant(v);
  }
  return ParamExpr::symbol(tok);
}

ParamExpr parse_expr(Tokenizer& tz) {
  const std::string tok = tz.next();
  if (tok.empty()) throw std::invalid_argument("ParamExpr: unexpected end of expression");
  if (tok == ")") throw std::invalid_argument("ParamExpr: unexpected ')'");
  if (tok != "(") return parse_atom(tok);
  const std::string op = tz.next();
  if (op != "+" && op != "*") {
    throw std::invalid_argument("ParamExpr: expected '+' or '*' after '(', got '" + op + "'");
  }
  std::vector<ParamExpr> items;
  while (true) {
    const std::string peeked = tz.peek();
    if (peeked.empty()) throw std::invalid_argument("ParamExpr: missing ')'");
    if (peeked == ")") {
      tz.next();
      break;
    }
    items.push_back(parse_expr(tz));
  }
  if (items.empty()) throw std::invalid_argument("ParamExpr: empty operator application");
  return op == "+" ? ParamExpr::sum(std::move(items)) : ParamExpr::product(std::move(items));
}

}  // namespace

ParamExpr ParamExpr::parse(const std::string& text) {
  Tokenizer tz(text);
  ParamExpr e = parse_expr(tz);
  if (!tz.next().empty()) {
    throw std::invalid_argument("ParamExpr: trailing tokens in '" + text + "'");
  }
  return e;
}

ParamExpr operator+(const ParamExpr& a, const ParamExpr& b) { return ParamExpr::sum({a, b}); }

ParamExpr operator*(const ParamExpr& a, const ParamExpr& b) { return ParamExpr::product({a, b}); }

ParamExpr operator+(double a, const ParamExpr& b) { return ParamExpr::constant(a) + b; }

ParamExpr operator*(double a, const ParamExpr& b) { return ParamExpr::constant(a) * b; }

ParamExpr operator-(double a, const ParamExpr& b) {
  return ParamExpr::sum({ParamExpr::constant(a), ParamExpr::product({ParamExpr::constant(-1.0), b})});
}

ParamExpr operator-(const ParamExpr& a) {
  return ParamExpr::product({ParamExpr::constant(-1.0), a});
}

}  // namespace qnids
