// Copyright 2026 The feedsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Transcript-to-command matching that tolerates recognition misspellings.
//
// The whole normalized transcript is compared against every lexicon token
// and synonym. Safety tokens win over food whenever they are within one
// edit, and are never matched further out than that.

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "feedsim/command.hpp"

namespace feedsim {

struct Menu;

inline constexpr std::string_view kStopToken = "stop";
inline constexpr std::string_view kEmergencyToken = "emergency";
inline constexpr std::size_t kDefaultMaxEdit = 2;
inline constexpr std::size_t kSafetyMaxEdit = 1;
// Minimum distance between any food spelling and any safety spelling.
inline constexpr std::size_t kSafetyMargin = 2 * kSafetyMaxEdit + 1;

struct Lexicon {
  // canonical token -> synonyms
  std::map<std::string, std::vector<std::string>> entries;

  // Menu slot names and synonyms plus the built-in safety tokens.
  static Lexicon from_menu(const Menu& menu);

  // Throws std::invalid_argument on empty or non-lowercase tokens, when two
  // spellings normalize to the same text, or when a food spelling is closer
  // than kSafetyMargin to a safety spelling.
  void validate() const;
};

enum class NoMatchReason { Empty, TooFar, Ambiguous, SafetyConflict };

std::string_view to_string(NoMatchReason r);

struct NoMatch {
  NoMatchReason reason = NoMatchReason::Empty;
  std::string best_candidate;
  std::size_t distance = 0;
};

struct ParseResult {
  std::string normalized;
  std::variant<Command, NoMatch> outcome;
  std::string matched;     // spelling that matched, when a command was produced
  std::size_t distance = 0;

  bool matched_command() const { return std::holds_alternative<Command>(outcome); }
};

// Lowercase ASCII letters, drop punctuation, collapse whitespace, trim.
// Works on code points; invalid UTF-8 bytes are kept as U+FFFD.
std::u32string normalize(std::string_view text);
std::string to_utf8(std::u32string_view s);

std::size_t levenshtein(std::u32string_view a, std::u32string_view b);
std::size_t levenshtein(std::string_view a, std::string_view b);

ParseResult parse(std::string_view text, const Lexicon& lex, std::size_t max_edit = kDefaultMaxEdit);

}  // namespace feedsim
