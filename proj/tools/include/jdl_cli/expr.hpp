#pragma once

// Arithmetic expressions over chart coordinates, compiled to Fields.
// Grammar in docs/expr.md.

#include <string>
#include <string_view>
#include <vector>

#include "jdl/errors.hpp"
#include "jdl/jets.hpp"

namespace jdl::cli {

class ExpressionError : public ConfigError {
 public:
  ExpressionError(int column, const std::string& message)
      : ConfigError("column " + std::to_string(column) + ": " + message), column_(column), message_(message) {}
  int column() const { return column_; }  // 1-based, in characters
  const std::string& message() const { return message_; }

 private:
  int column_;
  std::string message_;
};

// vars[i] names coord(i). Throws ExpressionError.
Field parse_expression(std::string_view text, const std::vector<std::string>& vars);

// Same, for expressions that must not depend on any variable.
double parse_constant(std::string_view text);

}  // namespace jdl::cli
