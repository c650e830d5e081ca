// Copyright 2026 The ovlift Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ovlift/vocabulary.hpp"

#include <cctype>
#include <unordered_set>

namespace ovlift {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

std::optional<Category> Category::canonicalize(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char c : raw) {
    if (c == '_' || is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (out.empty()) return std::nullopt;
  return Category(std::move(out));
}

std::size_t SceneVocabulary::insert(const Category& category) {
  const auto it = index_.find(category);
  if (it != index_.end()) return it->second;
  const std::size_t idx = categories_.size();
  categories_.push_back(category);
  index_.emplace(category, idx);
  return idx;
}

std::optional<std::size_t> SceneVocabulary::index_of(const Category& category) const {
  const auto it = index_.find(category);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Category> parse_vocab_response(std::string_view line, int max_names) {
  if (max_names <= 0) throw ConfigError("parse_vocab_response: max_names must be positive");
  std::vector<Category> names;
  std::unordered_set<Category, CategoryHash> seen;
  for (std::string_view part : split(line, ',')) {
    if (names.size() >= static_cast<std::size_t>(max_names)) break;
    const auto category = Category::canonicalize(part);
    if (!category || !seen.insert(*category).second) continue;
    names.push_back(*category);
  }
  return names;
}

SceneVocabulary aggregate_vocabulary(const std::vector<std::vector<Category>>& per_view) {
  SceneVocabulary vocabulary;
  for (const auto& names : per_view)
    for (const Category& category : names) vocabulary.insert(category);
  return vocabulary;
}

CompatibilityGroups CompatibilityGroups::singletons(const SceneVocabulary& vocabulary) {
  CompatibilityGroups groups;
  for (const Category& category : vocabulary.categories())
    groups.add_group(category.str(), {category}, false);
  return groups;
}

CompatibilityGroups CompatibilityGroups::universal(const SceneVocabulary& vocabulary) {
  CompatibilityGroups groups;
  if (!vocabulary.empty())
    groups.add_group("universal", vocabulary.categories(), false);
  return groups;
}

GroupId CompatibilityGroups::group_of(const Category& category) const {
  const auto it = assignment_.find(category);
  if (it == assignment_.end())
    throw ValidationError("group_of: category outside vocabulary: " + category.str());
  return it->second;
}

GroupId CompatibilityGroups::add_group(std::string name, std::vector<Category> members,
                                       bool from_provider) {
  if (members.empty()) throw ValidationError("add_group: empty member list");
  const GroupId id = static_cast<GroupId>(groups_.size());
  for (const Category& member : members) {
    if (!assignment_.emplace(member, id).second)
      throw ValidationError("add_group: category already grouped: " + member.str());
  }
  groups_.push_back(Group{std::move(name), std::move(members), from_provider});
  return id;
}

GroupId group_of(const Category& category, const CompatibilityGroups& groups) {
  return groups.group_of(category);
}

GroupParseResult parse_group_spec(std::string_view text, const SceneVocabulary& vocabulary) {
  GroupParseResult result;
  int line_no = 0;
  for (std::string_view raw_line : split(text, '\n')) {
    ++line_no;
    std::string_view line = trim(raw_line);
    if (line.empty() || line.front() == '#') continue;

    const std::size_t colon = line.find(':');
    const std::size_t open = line.find('[');
    const std::size_t close = line.rfind(']');
    if (colon == std::string_view::npos || open == std::string_view::npos ||
        close == std::string_view::npos || open < colon || close < open) {
      result.warnings.push_back("line " + std::to_string(line_no) + ": unparseable group line");
      continue;
    }
    std::string name(trim(line.substr(0, colon)));
    if (name.empty()) name = "group " + std::to_string(line_no);

    std::vector<Category> members;
    std::unordered_set<Category, CategoryHash> in_line;
    for (std::string_view part : split(line.substr(open + 1, close - open - 1), ',')) {
      const auto category = Category::canonicalize(part);
      if (!category) continue;
      if (!vocabulary.contains(*category)) continue;          // outside the scene vocabulary
      if (result.groups.is_claimed(*category)) continue;      // first group wins
      if (!in_line.insert(*category).second) continue;
      members.push_back(*category);
    }
    if (members.size() < 2) {
      result.warnings.push_back("line " + std::to_string(line_no) + ": group '" + name +
                                "' has fewer than two usable members; discarded");
      continue;
    }
    result.groups.add_group(std::move(name), std::move(members), true);
  }

  for (const Category& category : vocabulary.categories())
    if (!result.groups.is_claimed(category))
      result.groups.add_group(category.str(), {category}, false);
  return result;
}

}  // namespace ovlift
