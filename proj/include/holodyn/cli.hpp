// Command-line driver: subcommands over every module plus the catalog of
// example maps.
#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "holodyn/fnkit.hpp"

namespace holodyn::cli {

struct CatalogEntry {
  std::string key;
  std::string expression;
  FnClass fn_class;
  std::string description;
  /// Subcommands that make sense for this map (used by the completeness test).
  std::vector<std::string> applicable;
};

const std::vector<CatalogEntry>& catalog();
/// nullptr when the key is unknown.
const CatalogEntry* find_catalog(std::string_view key);

/// Runs one command. Exit codes: 0 success, 1 configuration error,
/// 2 runtime error; errors are written to err as a JSON object.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace holodyn::cli
