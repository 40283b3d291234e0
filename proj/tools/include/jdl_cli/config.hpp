#pragma once

// User examples from a YAML config file (format in docs/expr.md).

#include <string>
#include <vector>

#include "jdl/catalog.hpp"

namespace jdl::cli {

// Throws ConfigError with "name:line:column: message".
std::vector<CatalogEntry> parse_config(const std::string& text, const std::string& name = "<config>");
std::vector<CatalogEntry> load_config(const std::string& path);

}  // namespace jdl::cli
