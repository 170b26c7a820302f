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

#include "text_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace guf {

std::string trim(std::string_view text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  const auto end = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(begin, end - begin + 1));
}

std::vector<std::string> split(std::string_view text, char separator) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(separator, start);
    parts.push_back(trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_number(std::string_view token) {
  const std::string t = trim(token);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw Error(ErrorCode::ParseError, "not a number: '" + t + "'");
  }
  return value;
}

std::vector<double> parse_number_list(std::string_view text) {
  std::string normalized(text);
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::istringstream stream(normalized);
  std::vector<double> values;
  std::string token;
  while (stream >> token) values.push_back(parse_number(token));
  return values;
}

KeyValueText KeyValueText::parse(std::string_view text, std::string source) {
  KeyValueText result;
  result.source_ = std::move(source);
  std::istringstream stream{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(stream, line)) {
    ++number;
    const auto hash = line.find('#');
    const std::string content = trim(std::string_view(line).substr(0, hash));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ParseError, result.source_ + ":" + std::to_string(number) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    if (key.empty()) {
      throw Error(ErrorCode::ParseError, result.source_ + ":" + std::to_string(number) + ": empty key");
    }
    if (result.entries_.count(key)) {
      throw Error(ErrorCode::ParseError,
                  result.source_ + ":" + std::to_string(number) + ": duplicate key '" + key + "'");
    }
    result.entries_[key] = Entry{value, number};
  }
  return result;
}

const KeyValueText::Entry& KeyValueText::at(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw Error(ErrorCode::ParseError, source_ + ": missing key '" + key + "'");
  return it->second;
}

void KeyValueText::fail(const std::string& key, const std::string& message) const {
  const auto it = entries_.find(key);
  const std::string where = it == entries_.end() ? source_ : source_ + ":" + std::to_string(it->second.line);
  throw Error(ErrorCode::ParseError, where + ": " + key + ": " + message);
}

std::string KeyValueText::get_string(const std::string& key) const { return at(key).value; }

double KeyValueText::get_double(const std::string& key) const {
  try {
    return parse_number(at(key).value);
  } catch (const Error& e) {
    if (!has(key)) throw;
    fail(key, e.what());
  }
}

long long KeyValueText::get_int(const std::string& key) const {
  const std::string& value = at(key).value;
  long long result = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), result);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) fail(key, "expected an integer");
  return result;
}

bool KeyValueText::get_bool(const std::string& key) const {
  std::string value = at(key).value;
  std::transform(value.begin(), value.end(), value.begin(), [](unsigned char c) { return std::tolower(c); });
  if (value == "true" || value == "yes" || value == "1") return true;
  if (value == "false" || value == "no" || value == "0") return false;
  fail(key, "expected true or false");
}

std::vector<double> KeyValueText::get_list(const std::string& key) const {
  try {
    return parse_number_list(at(key).value);
  } catch (const Error& e) {
    if (!has(key)) throw;
    fail(key, e.what());
  }
}

Matrix KeyValueText::get_matrix(const std::string& key) const {
  std::vector<std::vector<double>> rows;
  try {
    for (const auto& row : split(at(key).value, ';')) rows.push_back(parse_number_list(row));
  } catch (const Error& e) {
    if (!has(key)) throw;
    fail(key, e.what());
  }
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  for (const auto& row : rows) {
    if (row.size() != cols || cols == 0) fail(key, "rows must be nonempty and equally long");
  }
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

void KeyValueText::reject_unknown(const std::vector<std::string>& known) const {
  for (const auto& [key, entry] : entries_) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw Error(ErrorCode::ParseError, source_ + ":" + std::to_string(entry.line) + ": unknown key '" + key + "'");
    }
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

GaussianBelief parse_belief(std::string_view text, const std::string& source) {
  const auto kv = KeyValueText::parse(text, source);
  kv.reject_unknown({"mean", "cov", "cov_diag"});
  GaussianBelief belief;
  const auto mean = kv.get_list("mean");
  if (mean.empty()) kv.fail("mean", "empty mean");
  belief.mean = Eigen::Map<const Vector>(mean.data(), static_cast<Eigen::Index>(mean.size()));
  const auto n = belief.mean.size();
  if (kv.has("cov") == kv.has("cov_diag")) {
    throw Error(ErrorCode::ParseError, source + ": give exactly one of 'cov' or 'cov_diag'");
  }
  if (kv.has("cov")) {
    belief.covariance = kv.get_matrix("cov");
    if (belief.covariance.rows() != n || belief.covariance.cols() != n) kv.fail("cov", "must be n x n for the mean");
  } else {
    const auto diag = kv.get_list("cov_diag");
    if (static_cast<Eigen::Index>(diag.size()) != n) kv.fail("cov_diag", "must have one entry per mean component");
    belief.covariance = Eigen::Map<const Vector>(diag.data(), n).asDiagonal();
  }
  return belief;
}

GaussianBelief load_belief(const std::string& path) { return parse_belief(read_file(path), path); }

}  // namespace guf
