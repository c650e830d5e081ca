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

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ovlift/error.hpp"

namespace ovlift {

// Canonical category name: lowercase, single-space separated, trimmed.
// Instances can only be produced through canonicalize(), so two equal
// categories always compare equal bytewise.
class Category {
 public:
  Category() = default;

  // Lowercases ASCII letters, maps underscores to spaces, collapses
  // whitespace runs, and trims. Returns nullopt when nothing remains.
  static std::optional<Category> canonicalize(std::string_view raw);

  const std::string& str() const { return name_; }
  bool empty() const { return name_.empty(); }

  friend bool operator==(const Category& a, const Category& b) { return a.name_ == b.name_; }
  friend bool operator!=(const Category& a, const Category& b) { return !(a == b); }
  friend bool operator<(const Category& a, const Category& b) { return a.name_ < b.name_; }

 private:
  explicit Category(std::string name) : name_(std::move(name)) {}
  std::string name_;
};

struct CategoryHash {
  std::size_t operator()(const Category& c) const {
    return std::hash<std::string>{}(c.str());
  }
};

// Per-scene open vocabulary: union of per-view proposals in first-appearance
// order (view order, then within-line order).
class SceneVocabulary {
 public:
  // Appends if absent; returns the category's index either way.
  std::size_t insert(const Category& category);

  bool contains(const Category& category) const { return index_.count(category) > 0; }
  std::optional<std::size_t> index_of(const Category& category) const;

  const std::vector<Category>& categories() const { return categories_; }
  std::size_t size() const { return categories_.size(); }
  bool empty() const { return categories_.empty(); }

 private:
  std::vector<Category> categories_;
  std::unordered_map<Category, std::size_t, CategoryHash> index_;
};

// Parses one per-view proposal line: comma-separated names, canonicalized,
// deduplicated within the line, truncated to the first max_names survivors.
// Empty or all-noise lines yield an empty list.
std::vector<Category> parse_vocab_response(std::string_view line, int max_names);

// Union of the per-view proposal lists in order.
SceneVocabulary aggregate_vocabulary(const std::vector<std::vector<Category>>& per_view);

// Index into CompatibilityGroups::groups().
using GroupId = int;

// Total map from scene categories to semantic-compatibility groups. Every
// vocabulary category belongs to exactly one group; categories never listed
// by the provider sit in their own singleton group.
class CompatibilityGroups {
 public:
  struct Group {
    std::string name;
    std::vector<Category> members;
    bool from_provider = false;
  };

  // One singleton group per vocabulary category (the strict same-category
  // policy).
  static CompatibilityGroups singletons(const SceneVocabulary& vocabulary);

  // A single group holding the whole vocabulary (grouping disabled).
  static CompatibilityGroups universal(const SceneVocabulary& vocabulary);

  // Throws ValidationError for categories outside the vocabulary.
  GroupId group_of(const Category& category) const;

  const std::vector<Group>& groups() const { return groups_; }
  bool is_claimed(const Category& category) const { return assignment_.count(category) > 0; }

  // Appends a group and claims its members; members must be distinct and
  // unclaimed (ValidationError otherwise).
  GroupId add_group(std::string name, std::vector<Category> members, bool from_provider);

 private:
  std::vector<Group> groups_;
  std::unordered_map<Category, GroupId, CategoryHash> assignment_;
};

// Free-function form of CompatibilityGroups::group_of.
GroupId group_of(const Category& category, const CompatibilityGroups& groups);

struct GroupParseResult {
  CompatibilityGroups groups;
  std::vector<std::string> warnings;  // one per skipped or degenerate line
};

// Parses a grouping response: one "name: [member, member, ...]" line per
// group; '#' starts a comment line. Members outside the vocabulary and
// members already claimed by an earlier group are dropped; groups left with
// fewer than two members are discarded. Unparseable lines are skipped with a
// warning. Vocabulary categories not claimed by any surviving group become
// singletons, in vocabulary order.
GroupParseResult parse_group_spec(std::string_view text, const SceneVocabulary& vocabulary);

}  // namespace ovlift
