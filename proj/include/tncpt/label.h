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

// Location-label normalization and the station lexicon built from it.
//
// A passenger-selected label such as "Anting Station Exit A" is reduced to a
// match key ("anting station") plus the stripped access-point designator
// ("exit a"). Station names and aliases go through the same pipeline, so
// matching is an exact lookup on keys.

#ifndef TNCPT_LABEL_H_
#define TNCPT_LABEL_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tncpt {

struct NormalizedLabel {
  std::string key;
  std::string suffix;
  friend bool operator==(const NormalizedLabel&, const NormalizedLabel&) = default;
};

struct LabelNormalizerConfig {
  // Access-point words; a trailing designator, optionally followed by a
  // short code ("exit a", "gate 3"), is stripped.
  std::vector<std::string> designators = {"exit", "gate", "entrance",
                                          "出口", "入口"};
  // Trailing phrases stripped as a whole.
  std::vector<std::string> suffix_phrases = {"bus stop", "bus station", "公交站"};
  // A bare code token ("b1") is stripped only right after one of these.
  std::vector<std::string> station_words = {"station", "terminal", "站"};
};

// Lowercases ASCII, drops apostrophes, turns other punctuation into spaces,
// collapses whitespace and strips trailing access-point suffixes.
NormalizedLabel NormalizeLabel(std::string_view raw,
                               const LabelNormalizerConfig& config = {});

// Normalized key -> candidate station ids (sorted, unique). Keys shared by
// distinct stations keep every candidate.
class LabelLexicon {
 public:
  explicit LabelLexicon(LabelNormalizerConfig config = {})
      : config_(std::move(config)) {}

  void Add(std::string_view label, const std::string& station_id);
  // All candidates for the label's key; nullopt for an empty key or no hit.
  std::optional<std::vector<std::string>> Match(std::string_view raw) const;

  const std::map<std::string, std::vector<std::string>>& entries() const {
    return entries_;
  }
  const LabelNormalizerConfig& config() const { return config_; }

 private:
  LabelNormalizerConfig config_;
  std::map<std::string, std::vector<std::string>> entries_;
};

}  // namespace tncpt

#endif  // TNCPT_LABEL_H_
