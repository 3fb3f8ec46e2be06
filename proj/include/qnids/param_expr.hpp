// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace qnids {

/// Symbolic angle expression over constants, named symbols, sums and
/// products. Expressions are immutable; copies share subtrees.
///
/// The smart constructors keep every expression in a canonical form:
/// nested sums/products are flattened, constant terms are folded into a
/// single leading constant, identity elements are dropped and singleton
/// nodes collapse. Substituting the same bindings in one step or several
/// therefore yields structurally identical expressions.
class ParamExpr {
 public:
  enum class Kind { Constant, Symbol, Sum, Product };

  /// Default-constructs the constant 0.
  ParamExpr();

  static ParamExpr constant(double value);
  static ParamExpr symbol(const std::string& name);
  static ParamExpr sum(std::vector<ParamExpr> terms);
  static ParamExpr product(std::vector<ParamExpr> factors);

  Kind kind() const;
  bool is_constant() const;
  /// Value of a Constant node; throws std::logic_error otherwise.
  double constant_value() const;
  /// Symbol name of a Symbol node; throws std::logic_error otherwise.
  const std::string& symbol_name() const;
  const std::vector<ParamExpr>& children() const;

  /// Evaluate with a full binding; throws std::invalid_argument when a
  /// symbol has no value.
  double evaluate(const std::map<std::string, double>& binding) const;

  /// Substitute any bound symbols and fold constants; unbound symbols are
  /// kept. The result is canonical.
  ParamExpr substitute(const std::map<std::string, double>& binding) const;

  void collect_symbols(std::set<std::string>& out) const;
  std::set<std::string> symbols() const;
  bool has_symbols() const;

  /// Structural equality (exact constant comparison).
  bool operator==(const ParamExpr& other) const;
  bool operator!=(const ParamExpr& other) const { return !(*this == other); }

  /// Parenthesized prefix form, e.g. "(* 2 (+ 3.1400000000000001 x0))".
  /// Constants are printed with enough digits to round-trip exactly.
  std::string to_text() const;
  /// Inverse of to_text(); throws std::invalid_argument on malformed input.
  static ParamExpr parse(const std::string& text);

  friend ParamExpr operator+(const ParamExpr& a, const ParamExpr& b);
  friend ParamExpr operator*(const ParamExpr& a, const ParamExpr& b);
  friend ParamExpr operator+(double a, const ParamExpr& b);
  friend ParamExpr operator*(double a, const ParamExpr& b);
  friend ParamExpr operator-(double a, const ParamExpr& b);
  friend ParamExpr operator-(const ParamExpr& a);

 private:
  struct Node;
  explicit ParamExpr(std::shared_ptr<const Node> node);
  static ParamExpr make_nary(Kind kind, std::vector<ParamExpr> items);

  std::shared_ptr<const Node> node_;
};

/// Format a double with enough precision to parse back bit-identically.
std::string format_double(double value);

}  // namespace qnids
