/*
 * Copyright 2026 The GUF Authors. All rights reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sigma_set.hpp"

namespace guf {

/// `key = value` text with `#` comments. Keys are unique; every value keeps
/// its line number for error messages.
class KeyValueText {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  /// Throws ErrorCode::ParseError with "source:line: message".
  static KeyValueText parse(std::string_view text, std::string source);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const Entry& at(const std::string& key) const;
  const std::map<std::string, Entry>& entries() const { return entries_; }
  const std::string& source() const { return source_; }

  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  long long get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  /// Comma or whitespace separated numbers.
  std::vector<double> get_list(const std::string& key) const;
  /// Rows separated by ';', entries as in get_list.
  Matrix get_matrix(const std::string& key) const;

  /// Throws ErrorCode::ParseError naming the first key not in `known`.
  void reject_unknown(const std::vector<std::string>& known) const;

  [[noreturn]] void fail(const std::string& key, const std::string& message) const;

 private:
  std::string source_;
  std::map<std::string, Entry> entries_;
};

double parse_number(std::string_view token);
std::vector<double> parse_number_list(std::string_view text);
std::string trim(std::string_view text);
std::vector<std::string> split(std::string_view text, char separator);

std::string read_file(const std::string& path);

/// Belief file: `mean = ...` plus `cov = r1; r2; ...` or `cov_diag = ...`.
GaussianBelief parse_belief(std::string_view text, const std::string& source);
GaussianBelief load_belief(const std::string& path);

}  // namespace guf
