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

// Minimal RFC 4180 reader/writer. Fields may be double-quoted; embedded
// quotes are doubled. Records never span lines.

#ifndef TNCPT_CSV_H_
#define TNCPT_CSV_H_

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tncpt::csv {

// Splits one record. Returns nullopt on an unterminated quote.
std::optional<std::vector<std::string>> SplitRecord(std::string_view line);

std::string Escape(std::string_view field);

void WriteRecord(std::ostream& out, const std::vector<std::string>& fields);

// Reads a header row then data rows. Blank lines are skipped but still
// advance the line counter.
class Reader {
 public:
  explicit Reader(std::istream& in);

  const std::vector<std::string>& header() const { return header_; }
  bool has_header() const { return has_header_; }
  // Column index by (trimmed) name, or nullopt.
  std::optional<size_t> Column(std::string_view name) const;
  // Same, but throws InputError("missing required column ...").
  size_t RequireColumn(std::string_view name) const;

  // Next data record; `line_number` is 1-based in the source file.
  // Returns false at end of input. Unterminated quotes yield a record with
  // `malformed` set.
  bool Next(std::vector<std::string>& fields, size_t& line_number,
            bool& malformed);

 private:
  std::istream& in_;
  std::vector<std::string> header_;
  std::unordered_map<std::string, size_t> index_;
  bool has_header_ = false;
  size_t line_ = 0;
};

}  // namespace tncpt::csv

#endif  // TNCPT_CSV_H_
