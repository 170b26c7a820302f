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

#include "rule_spec.hpp"

#include <map>

#include "text_config.hpp"

namespace guf {

namespace {

[[noreturn]] void bad_rule(std::string_view token, const std::string& message) {
  throw Error(ErrorCode::ParseError, "rule '" + std::string(token) + "': " + message);
}

double option_number(std::string_view token, const std::map<std::string, std::string>& options, const std::string& key,
                     double fallback) {
  const auto it = options.find(key);
  if (it == options.end()) return fallback;
  try {
    return parse_number(it->second);
  } catch (const Error&) {
    bad_rule(token, key + " must be a number");
  }
}

int option_int(std::string_view token, const std::map<std::string, std::string>& options, const std::string& key,
               int fallback) {
  const double value = option_number(token, options, key, fallback);
  if (value != static_cast<double>(static_cast<int>(value))) bad_rule(token, key + " must be an integer");
  return static_cast<int>(value);
}

}  // namespace

ReferenceSampling parse_design(std::string_view text, int dimension) {
  const std::string spec = trim(text);
  if (spec.size() > 2 && spec.rfind("rs", 0) == 0) {
    int order = 0;
    try {
      order = static_cast<int>(parse_number(spec.substr(2)));
    } catch (const Error&) {
      throw Error(ErrorCode::ParseError, "design '" + spec + "': expected rsK");
    }
    return scenario_design(dimension, order);
  }
  std::vector<Generator> basis;
  for (const auto& generator : split(spec, '+')) {
    std::vector<double> coords;
    for (const auto& c : split(generator, '/')) coords.push_back(parse_number(c));
    if (static_cast<int>(coords.size()) != dimension) {
      throw Error(ErrorCode::ParseError, "design '" + spec + "': generator '" + generator + "' needs " +
                                             std::to_string(dimension) + " coordinates");
    }
    basis.push_back(canonicalize(coords));
  }
  return ReferenceSampling(std::move(basis));
}

SamplingRule parse_rule(std::string_view token_view, int dimension) {
  const std::string token = trim(token_view);
  const auto parts = split(token, ':');
  const std::string& kind = parts.front();
  std::map<std::string, std::string> options;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string::npos) bad_rule(token, "option '" + parts[i] + "' is not key=value");
    options[trim(parts[i].substr(0, eq))] = trim(parts[i].substr(eq + 1));
  }
  auto allow = [&](std::initializer_list<const char*> keys) {
    for (const auto& [key, value] : options) {
      bool known = false;
      for (const char* k : keys) known = known || key == k;
      if (!known) bad_rule(token, "unknown option '" + key + "'");
    }
  };

  SamplingRule rule = [&]() -> SamplingRule {
    if (kind == "ukf" || kind == "ut" || kind == "gukf") {
      allow({"kappa"});
      return SamplingRule::ut(option_number(token, options, "kappa", 0.0), kind == "gukf");
    }
    if (kind == "ckf3" || kind == "ckf") {
      allow({});
      return SamplingRule::ckf3();
    }
    if (kind == "ckf5") {
      allow({});
      return SamplingRule::ckf5();
    }
    if (kind == "ghqf" || kind == "gh") {
      allow({"m"});
      return SamplingRule::gauss_hermite(option_int(token, options, "m", 3));
    }
    if (kind == "guf" || kind == "gus") {
      allow({"n", "d", "levels", "seed", "design", "designs", "alloc"});
      GusConfig config;
      config.level_count = option_int(token, options, "n", 1);
      if (config.level_count < 1) bad_rule(token, "n must be >= 1");
      const std::string levels = options.count("levels") ? options.at("levels") : "grid";
      if (levels == "grid") {
        config.mode = LevelMode::Grid;
      } else if (levels == "closed") {
        config.mode = LevelMode::GridClosed;
      } else if (levels == "random") {
        config.mode = LevelMode::Random;
      } else {
        bad_rule(token, "levels must be grid, closed or random");
      }
      if (options.count("d")) {
        if (options.count("n") || options.count("levels")) bad_rule(token, "d replaces n and levels");
        for (const auto& d : split(options.at("d"), '/')) {
          try {
            config.explicit_levels.push_back(parse_number(d));
          } catch (const Error&) {
            bad_rule(token, "d must be numbers joined by '/'");
          }
        }
      }
      const double seed = option_number(token, options, "seed", 0.0);
      if (seed < 0.0) bad_rule(token, "seed must be nonnegative");
      config.seed = static_cast<std::uint64_t>(seed);
      if (options.count("design") && options.count("designs")) bad_rule(token, "give design or designs, not both");
      if (options.count("designs")) {
        for (const auto& d : split(options.at("designs"), ';')) config.catalogue.push_back(parse_design(d, dimension));
      } else {
        config.catalogue.push_back(parse_design(options.count("design") ? options.at("design") : "rs1", dimension));
      }
      if (options.count("alloc")) {
        const std::string& alloc = options.at("alloc");
        if (alloc == "equal") {
          config.allocation = Allocation::Equal;
        } else if (alloc == "density") {
          config.allocation = Allocation::DensityProportional;
        } else {
          bad_rule(token, "alloc must be equal or density");
        }
      }
      return SamplingRule::gus(config, dimension);
    }
    bad_rule(token, "unknown rule kind '" + kind + "'");
  }();
  rule.set_name(token);
  return rule;
}

std::vector<SamplingRule> parse_rule_list(std::string_view list, int dimension) {
  std::vector<SamplingRule> rules;
  for (const auto& token : split(list, ',')) {
    if (token.empty()) throw Error(ErrorCode::ParseError, "empty rule in list '" + std::string(list) + "'");
    rules.push_back(parse_rule(token, dimension));
  }
  return rules;
}

}  // namespace guf
