// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace argsim {

// ASCII-only case folding: multibyte UTF-8 sequences pass through untouched.
std::string to_lower_ascii(std::string_view s);

std::string trim(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

/// Whitespace-delimited split; drops empty pieces.
std::vector<std::string> split_ws(std::string_view s);

/// Lowercase + collapse whitespace runs to single spaces + trim. This is the
/// text key used for duplicate detection.
std::string normalize_text(std::string_view s);

bool is_ascii_punct(char c);

/// True when every byte of the token is ASCII punctuation.
bool is_punctuation_token(std::string_view tok);

using StringSet = std::unordered_set<std::string>;

/// One lowercase word per line; '#' comments and blank lines skipped.
StringSet load_wordlist(const std::string& path);

std::string read_file(const std::string& path);

}  // namespace argsim
