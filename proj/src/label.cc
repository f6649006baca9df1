/*
 * Copyright 2026 The tncpt Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "tncpt/label.h"

#include <algorithm>
#include <cctype>

#include "tncpt/common.h"

namespace tncpt {

namespace {

// Multi-byte punctuation: apostrophes are dropped, the rest become spaces.
constexpr std::string_view kDroppedUtf8[] = {"\xE2\x80\x99", "\xE2\x80\x98"};
constexpr std::string_view kSpacedUtf8[] = {
    "\xE2\x80\x9C", "\xE2\x80\x9D", "\xEF\xBC\x8C", "\xE3\x80\x82",
    "\xE3\x80\x81", "\xEF\xBC\x88", "\xEF\xBC\x89", "\xC2\xB7",
    "\xE2\x80\x94", "\xE2\x80\x93", "\xE3\x80\x80", "\xC2\xA0"};

std::string Clean(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (size_t i = 0; i < raw.size();) {
    bool matched = false;
    for (auto seq : kDroppedUtf8) {
      if (raw.substr(i, seq.size()) == seq) {
        i += seq.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    for (auto seq : kSpacedUtf8) {
      if (raw.substr(i, seq.size()) == seq) {
        out += ' ';
        i += seq.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    const auto c = static_cast<unsigned char>(raw[i]);
    if (c == '\'' || c == '`') {
      // dropped
    } else if (c < 0x80 && (std::ispunct(c) || std::isspace(c))) {
      out += ' ';
    } else if (c < 0x80) {
      out += static_cast<char>(std::tolower(c));
    } else {
      out += static_cast<char>(c);
    }
    ++i;
  }
  return out;
}

bool IsCodeToken(std::string_view t) {
  if (t.empty() || t.size() > 3) return false;
  bool digit = false;
  for (char c : t) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digit = true;
    } else if (!std::isalpha(static_cast<unsigned char>(c))) {
      return false;
    }
  }
  return digit || t.size() == 1;
}

bool Contains(const std::vector<std::string>& set, std::string_view t) {
  return std::find(set.begin(), set.end(), t) != set.end();
}

}  // namespace

NormalizedLabel NormalizeLabel(std::string_view raw,
                               const LabelNormalizerConfig& config) {
  std::vector<std::string> tokens;
  for (auto& t : Split(Clean(raw), ' ')) {
    if (!t.empty()) tokens.push_back(std::move(t));
  }
  // Stripped suffix groups, outermost last.
  std::vector<std::string> stripped;
  bool changed = true;
  while (changed && tokens.size() > 1) {
    changed = false;
    const size_t n = tokens.size();
    // "<designator> <code>"
    if (n >= 3 && Contains(config.designators, tokens[n - 2]) &&
        IsCodeToken(tokens[n - 1])) {
      stripped.push_back(tokens[n - 2] + " " + tokens[n - 1]);
      tokens.resize(n - 2);
      changed = true;
      continue;
    }
    if (Contains(config.designators, tokens[n - 1])) {
      stripped.push_back(tokens[n - 1]);
      tokens.pop_back();
      changed = true;
      continue;
    }
    if (IsCodeToken(tokens[n - 1]) && Contains(config.station_words, tokens[n - 2])) {
      stripped.push_back(tokens[n - 1]);
      tokens.pop_back();
      changed = true;
      continue;
    }
    for (const auto& phrase : config.suffix_phrases) {
      std::vector<std::string> words;
      for (auto& w : Split(phrase, ' ')) {
        if (!w.empty()) words.push_back(std::move(w));
      }
      if (words.empty() || words.size() >= n) continue;
      if (std::equal(words.begin(), words.end(), tokens.end() - words.size())) {
        stripped.push_back(Join(words, " "));
        tokens.resize(n - words.size());
        changed = true;
        break;
      }
    }
  }
  std::reverse(stripped.begin(), stripped.end());
  return {Join(tokens, " "), Join(stripped, " ")};
}

void LabelLexicon::Add(std::string_view label, const std::string& station_id) {
  const auto norm = NormalizeLabel(label, config_);
  if (norm.key.empty()) return;
  auto& ids = entries_[norm.key];
  auto it = std::lower_bound(ids.begin(), ids.end(), station_id);
  if (it == ids.end() || *it != station_id) ids.insert(it, station_id);
}

std::optional<std::vector<std::string>> LabelLexicon::Match(
    std::string_view raw) const {
  const auto norm = NormalizeLabel(raw, config_);
  if (norm.key.empty()) return std::nullopt;
  auto it = entries_.find(norm.key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

}  // namespace tncpt
