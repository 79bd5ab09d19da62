// SPDX-License-Identifier: Apache-2.0

#include "argsim/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>

#include "argsim/common.hpp"
#include "argsim/csv.hpp"
#include "argsim/text.hpp"

namespace argsim::features {

CategoryLexicon CategoryLexicon::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open lexicon: " + path);
  return load(in, path);
}

CategoryLexicon CategoryLexicon::load(std::istream& in, const std::string& what) {
  CategoryLexicon lex;
  std::string line;
  int percent_seen = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    if (stripped == "%") {
      ++percent_seen;
      continue;
    }
    const std::vector<std::string> fields = split(line, '\t');
    const std::string where = what + ":" + std::to_string(line_no);
    if (percent_seen == 1) {
      // category definition: id <TAB> name [<TAB> parent]
      if (fields.size() < 2 || fields.size() > 3) {
        throw Error(where + ": category line needs 2 or 3 tab-separated fields");
      }
      Category cat;
      const int id = static_cast<int>(parse_int(fields[0], where));
      cat.name = fields[1];
      if (fields.size() == 3 && !trim(fields[2]).empty()) {
        cat.parent = static_cast<int>(parse_int(fields[2], where));
      }
      if (!lex.categories_.emplace(id, std::move(cat)).second) {
        throw Error(where + ": duplicate category id " + fields[0]);
      }
    } else if (percent_seen >= 2) {
      if (fields.size() != 2) throw Error(where + ": entry line needs 2 tab-separated fields");
      std::vector<int> ids;
      for (const std::string& piece : split(fields[1], ',')) {
        ids.push_back(static_cast<int>(parse_int(trim(piece), where)));
      }
      lex.add_entry(to_lower_ascii(trim(fields[0])), std::move(ids), where);
    } else {
      throw Error(where + ": content before the category section ('%' line expected)");
    }
  }
  if (percent_seen < 2) throw Error(what + ": missing '%'-delimited category section");
  lex.check_forest(what);
  return lex;
}

CategoryLexicon CategoryLexicon::from_parts(
    std::map<int, Category> categories,
    std::vector<std::pair<std::string, std::vector<int>>> entries) {
  CategoryLexicon lex;
  lex.categories_ = std::move(categories);
  for (auto& [pattern, ids] : entries) {
    lex.add_entry(to_lower_ascii(pattern), std::move(ids), "lexicon");
  }
  lex.check_forest("lexicon");
  return lex;
}

void CategoryLexicon::add_entry(const std::string& pattern, std::vector<int> ids,
                                const std::string& what) {
  if (pattern.empty() || pattern == "*") throw Error(what + ": empty pattern");
  for (int id : ids) {
    if (!categories_.count(id)) {
      throw Error(what + ": entry references unknown category " + std::to_string(id));
    }
  }
  if (pattern.back() == '*') {
    const std::string prefix = pattern.substr(0, pattern.size() - 1);
    auto& slot = prefixes_[prefix];
    slot.insert(slot.end(), ids.begin(), ids.end());
    max_prefix_len_ = std::max(max_prefix_len_, prefix.size());
  } else {
    auto& slot = literals_[pattern];
    slot.insert(slot.end(), ids.begin(), ids.end());
  }
}

void CategoryLexicon::check_forest(const std::string& what) const {
  for (const auto& [id, cat] : categories_) {
    if (cat.parent && !categories_.count(*cat.parent)) {
      throw Error(what + ": category " + std::to_string(id) + " has unknown parent");
    }
    // walk to the root; revisiting the start or running too long means a cycle
    std::optional<int> cur = cat.parent;
    std::size_t steps = 0;
    while (cur) {
      if (*cur == id || ++steps > categories_.size()) {
        throw Error(what + ": category hierarchy contains a cycle at " + std::to_string(id));
      }
      cur = categories_.at(*cur).parent;
    }
  }
}

void CategoryLexicon::close_over_ancestors(std::vector<int>& ids) const {
  std::set<int> all(ids.begin(), ids.end());
  for (int id : ids) {
    auto it = categories_.find(id);
    while (it != categories_.end() && it->second.parent) {
      const int parent = *it->second.parent;
      if (!all.insert(parent).second) break;
      it = categories_.find(parent);
    }
  }
  ids.assign(all.begin(), all.end());
}

std::vector<int> CategoryLexicon::lookup(const std::string& lower_word) const {
  std::vector<int> ids;
  auto lit = literals_.find(lower_word);
  if (lit != literals_.end()) ids.insert(ids.end(), lit->second.begin(), lit->second.end());
  const std::size_t upto = std::min(max_prefix_len_, lower_word.size());
  for (std::size_t len = 1; len <= upto; ++len) {
    auto pre = prefixes_.find(lower_word.substr(0, len));
    if (pre != prefixes_.end()) ids.insert(ids.end(), pre->second.begin(), pre->second.end());
  }
  if (ids.empty()) return ids;
  close_over_ancestors(ids);
  return ids;
}

}  // namespace argsim::features
