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

#include "feedsim/parser.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "feedsim/menu.hpp"

namespace feedsim {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

bool is_space(char32_t c) { return c == ' ' || (c >= '\t' && c <= '\r'); }

bool is_ascii_punct(char32_t c) {
  return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') || (c >= '[' && c <= '`') ||
         (c >= '{' && c <= '~');
}

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    int extra = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      extra = 1;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      extra = 2;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      extra = 3;
      cp = b0 & 0x07;
    } else {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    if (i + static_cast<std::size_t>(extra) >= s.size()) {  // truncated sequence
      out.push_back(kReplacement);
      break;
    }
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      const auto b = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += static_cast<std::size_t>(extra) + 1;
  }
  return out;
}

struct Candidate {
  std::u32string spelling;
  std::string canonical;
  bool safety;
};

bool is_safety(std::string_view token) { return token == kStopToken || token == kEmergencyToken; }

Command command_for(const std::string& canonical) {
  if (canonical == kStopToken) return Stop{};
  if (canonical == kEmergencyToken) return EmergencyStop{};
  return Serve{canonical};
}

std::vector<Candidate> candidates(const Lexicon& lex) {
  std::vector<Candidate> out;
  for (const auto& [token, synonyms] : lex.entries) {
    out.push_back({normalize(token), token, is_safety(token)});
    for (const auto& syn : synonyms) out.push_back({normalize(syn), token, is_safety(token)});
  }
  return out;
}

// Best distance per canonical token within one group (safety or food).
struct GroupBest {
  std::size_t distance = std::numeric_limits<std::size_t>::max();
  std::vector<std::string> tokens;  // canonical tokens at that distance
  std::string spelling;             // first spelling at that distance
};

void consider(GroupBest& g, const Candidate& c, std::size_t d) {
  if (d < g.distance) {
    g.distance = d;
    g.tokens = {c.canonical};
    g.spelling = to_utf8(c.spelling);
  } else if (d == g.distance &&
             std::find(g.tokens.begin(), g.tokens.end(), c.canonical) == g.tokens.end()) {
    g.tokens.push_back(c.canonical);
  }
}

}  // namespace

std::string_view to_string(NoMatchReason r) {
  switch (r) {
    case NoMatchReason::Empty: return "empty";
    case NoMatchReason::TooFar: return "too_far";
    case NoMatchReason::Ambiguous: return "ambiguous";
    case NoMatchReason::SafetyConflict: return "safety_conflict";
  }
  return "?";
}

std::u32string normalize(std::string_view text) {
  std::u32string out;
  bool pending_space = false;
  for (char32_t c : decode_utf8(text)) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (is_ascii_punct(c)) continue;
    if (c >= 'A' && c <= 'Z') c = c - 'A' + 'a';
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string to_utf8(std::u32string_view s) {
  std::string out;
  for (char32_t c : s) {
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (c >> 6)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (c >> 12)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (c >> 18)));
      out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
  }
  return out;
}

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein(decode_utf8(a), decode_utf8(b));
}

Lexicon Lexicon::from_menu(const Menu& menu) {
  Lexicon lex;
  for (const auto& slot : menu.slots) lex.entries[slot.name] = slot.synonyms;
  lex.entries[std::string(kStopToken)] = {};
  lex.entries[std::string(kEmergencyToken)] = {};
  lex.validate();
  return lex;
}

void Lexicon::validate() const {
  std::set<std::u32string> seen;
  const auto all = candidates(*this);
  for (const auto& c : all) {
    if (c.spelling.empty()) throw std::invalid_argument("lexicon entry for '" + c.canonical + "' is empty");
    if (!seen.insert(c.spelling).second) {
      throw std::invalid_argument("lexicon spelling '" + to_utf8(c.spelling) + "' is not unique");
    }
  }
  for (const auto& [token, _] : entries) {
    if (to_utf8(normalize(token)) != token) {
      throw std::invalid_argument("lexicon token '" + token + "' must be lowercase and normalized");
    }
  }
  // One-edit neighborhoods of food and safety spellings must not overlap, so
  // a misheard food never stops the arm and a misheard safety word never
  // serves food.
  for (const auto& food : all) {
    if (food.safety) continue;
    for (const auto& safe : all) {
      if (safe.safety && levenshtein(food.spelling, safe.spelling) < kSafetyMargin) {
        throw std::invalid_argument("food spelling '" + to_utf8(food.spelling) +
                                    "' is within " + std::to_string(kSafetyMargin - 1) +
                                    " edits of safety word '" + to_utf8(safe.spelling) + "'");
      }
    }
  }
}

ParseResult parse(std::string_view text, const Lexicon& lex, std::size_t max_edit) {
  ParseResult res;
  const std::u32string norm = normalize(text);
  res.normalized = to_utf8(norm);
  if (norm.empty()) {
    res.outcome = NoMatch{NoMatchReason::Empty, {}, 0};
    return res;
  }

  GroupBest safety;
  GroupBest food;
  for (const auto& c : candidates(lex)) {
    const std::size_t d = levenshtein(norm, c.spelling);
    if (d == 0) {
      res.outcome = command_for(c.canonical);
      res.matched = to_utf8(c.spelling);
      return res;
    }
    consider(c.safety ? safety : food, c, d);
  }

  if (safety.distance <= kSafetyMaxEdit) {
    const std::size_t cap = std::min(max_edit, kSafetyMaxEdit);
    if (safety.distance > cap) {
      res.outcome = NoMatch{NoMatchReason::SafetyConflict, safety.tokens.front(), safety.distance};
      return res;
    }
    // Two safety words equally close: take the stronger one.
    const bool emergency = std::find(safety.tokens.begin(), safety.tokens.end(),
                                     std::string(kEmergencyToken)) != safety.tokens.end();
    res.outcome = emergency ? Command{EmergencyStop{}} : Command{Stop{}};
    res.matched = safety.spelling;
    res.distance = safety.distance;
    return res;
  }

  const GroupBest& best = food.distance <= safety.distance ? food : safety;
  if (food.tokens.empty() || food.distance > max_edit) {
    res.outcome = NoMatch{NoMatchReason::TooFar, best.tokens.empty() ? "" : best.tokens.front(),
                          best.distance};
    return res;
  }
  if (food.tokens.size() > 1) {
    res.outcome = NoMatch{NoMatchReason::Ambiguous, food.tokens.front(), food.distance};
    return res;
  }
  res.outcome = command_for(food.tokens.front());
  res.matched = food.spelling;
  res.distance = food.distance;
  return res;
}

}  // namespace feedsim
