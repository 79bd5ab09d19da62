// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace argsim::features {

/// Hierarchical word-category lexicon in the LIWC style. The file has a
/// category section delimited by lines containing only `%`:
///
///     %
///     1<TAB>affect
///     2<TAB>negemo<TAB>1
///     %
///     fear<TAB>2
///     deter*<TAB>4,5
///
/// A trailing `*` makes a pattern a prefix match. A lookup returns the
/// categories of the exact literal plus every matching prefix pattern,
/// closed under the category hierarchy (ancestors included).
class CategoryLexicon {
 public:
  struct Category {
    std::string name;
    std::optional<int> parent;
  };

  static CategoryLexicon load(std::istream& in, const std::string& what = "lexicon");
  static CategoryLexicon load_file(const std::string& path);

  /// Sorted unique category ids for a lowercase word; empty when nothing
  /// matches.
  std::vector<int> lookup(const std::string& lower_word) const;

  const std::map<int, Category>& categories() const { return categories_; }
  bool empty() const { return literals_.empty() && prefixes_.empty(); }

  /// For tests: build directly from parts.
  static CategoryLexicon from_parts(std::map<int, Category> categories,
                                    std::vector<std::pair<std::string, std::vector<int>>> entries);

 private:
  std::map<int, Category> categories_;
  std::unordered_map<std::string, std::vector<int>> literals_;
  std::unordered_map<std::string, std::vector<int>> prefixes_;  // key without '*'
  std::size_t max_prefix_len_ = 0;

  void add_entry(const std::string& pattern, std::vector<int> ids, const std::string& what);
  void check_forest(const std::string& what) const;
  void close_over_ancestors(std::vector<int>& ids) const;
};

}  // namespace argsim::features
