#include <gtest/gtest.h>

#include <set>

#include "helpers.hpp"
#include "obsframe/dataset.hpp"

using namespace obsframe;

namespace {

ManifestEntry entry(const std::string& id, const std::string& task, int steps = 11, int cams = 20) {
  ManifestEntry e;
  e.episode_id = id;
  e.path = id + ".jsonl";
  e.task = task;
  e.steps = steps;
  for (int c = 0; c < cams; ++c) e.camera_ids.push_back("c" + std::to_string(c));
  return e;
}

DatasetManifest tasks(const std::vector<std::pair<std::string, int>>& counts) {
  DatasetManifest m;
  for (const auto& [task, n] : counts) {
    for (int i = 0; i < n; ++i) m.entries.push_back(entry(task + "_" + std::to_string(i), task));
  }
  return m;
}

std::pair<int, int> count_split(const DatasetManifest& m) {
  int train = 0, val = 0;
  for (const auto& e : m.entries) {
    if (e.split == Split::train) ++train;
    if (e.split == Split::val) ++val;
  }
  return {train, val};
}

std::string error_code(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST(ParseRatio, ValidAndInvalid) {
  const SplitRatio r = parse_ratio("19:1");
  EXPECT_EQ(r.train, 19);
  EXPECT_EQ(r.val, 1);
  for (const char* bad : {"19", "19:", ":1", "a:b", "19:0", "-1:2", "1.5:1", "19:1x"}) {
    EXPECT_EQ(error_code([&] { (void)parse_ratio(bad); }), "bad_ratio") << bad;
  }
}

TEST(SplitDataset, TwentyEpisodesNineteenToOne) {
  const DatasetManifest m = split_dataset(tasks({{"reach", 20}}), {19, 1}, 7);
  EXPECT_EQ(count_split(m), std::make_pair(19, 1));
  EXPECT_TRUE(validate_manifest(m).empty());
}

TEST(SplitDataset, SameSeedSameAssignment) {
  const DatasetManifest base = tasks({{"a", 13}, {"b", 9}});
  EXPECT_EQ(split_dataset(base, {3, 1}, 42), split_dataset(base, {3, 1}, 42));
  EXPECT_NE(split_dataset(base, {3, 1}, 42), split_dataset(base, {3, 1}, 43));
}

TEST(SplitDataset, StratifiedTasksAppearInBothSplits) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const DatasetManifest m = split_dataset(tasks({{"a", 10}, {"b", 10}}), {19, 1}, seed, true);
    std::set<std::pair<std::string, Split>> seen;
    for (const auto& e : m.entries) seen.insert({e.task, *e.split});
    ASSERT_EQ(seen.size(), 4u) << "seed " << seed;
  }
}

TEST(SplitDataset, TrainValDisjoint) {
  const DatasetManifest m = split_dataset(tasks({{"a", 30}, {"b", 7}}), {19, 1}, 3);
  std::set<std::string> train, val;
  for (const auto& e : m.entries) (*e.split == Split::train ? train : val).insert(e.episode_id);
  for (const auto& id : val) EXPECT_FALSE(train.contains(id));
  EXPECT_EQ(train.size() + val.size(), 37u);
}

TEST(SplitDataset, Unsatisfiable) {
  EXPECT_EQ(error_code([] { (void)split_dataset(tasks({{"a", 1}}), {19, 1}, 0); }), "ratio_unsatisfiable");
  // Every task has a single episode: nothing can go to val when stratified.
  EXPECT_EQ(error_code([] { (void)split_dataset(tasks({{"a", 1}, {"b", 1}}), {1, 1}, 0, true); }),
            "ratio_unsatisfiable");
}

TEST(SplitDataset, ViewGranularityAssignsEveryView) {
  const DatasetManifest m =
      split_dataset(tasks({{"a", 2}}), {3, 1}, 5, true, SplitGranularity::view);
  EXPECT_TRUE(validate_manifest(m).empty());
  int val = 0;
  for (const auto& e : m.entries) {
    EXPECT_FALSE(e.split.has_value());
    EXPECT_EQ(e.view_splits.size(), e.camera_ids.size());
    for (const auto& [cam, s] : e.view_splits) val += s == Split::val;
  }
  EXPECT_EQ(val, 10);  // round(40 * 1/4)
}

TEST(BalanceTasks, EqualTasksUnchanged) {
  const DatasetManifest m = balance_tasks(tasks({{"a", 4}, {"b", 4}}));
  for (const auto& e : m.entries) EXPECT_EQ(e.replication, 1);
}

TEST(BalanceTasks, MinorityReplicatedTwice) {
  const DatasetManifest m = balance_tasks(tasks({{"big", 10}, {"small", 5}}));
  for (const auto& e : m.entries) EXPECT_EQ(e.replication, e.task == "small" ? 2 : 1) << e.episode_id;
  const auto counts = task_sample_counts(m);
  EXPECT_EQ(counts.at("big"), counts.at("small"));
}

TEST(BalanceTasks, SingleTaskUnchanged) {
  const DatasetManifest m = balance_tasks(tasks({{"only", 3}}));
  for (const auto& e : m.entries) EXPECT_EQ(e.replication, 1);
}

TEST(BalanceTasks, WithinOneEpisodeOfLargest) {
  DatasetManifest m = tasks({{"a", 17}, {"b", 5}, {"c", 3}});
  m.entries.push_back(entry("odd", "c", 31, 4));
  m = balance_tasks(m);
  const auto counts = task_sample_counts(m);
  std::int64_t target = 0;
  for (const auto& [t, c] : counts) target = std::max(target, c);
  for (const auto& [task, c] : counts) {
    std::int64_t max_episode = 0;
    for (const auto& e : m.entries) {
      if (e.task == task) max_episode = std::max(max_episode, e.samples());
    }
    EXPECT_LE(c, target);
    EXPECT_GT(c + max_episode, target) << task;
  }
}

TEST(BalanceTasks, OnlyTrainEpisodesReplicatedAfterSplit) {
  DatasetManifest m = split_dataset(tasks({{"big", 20}, {"small", 10}}), {19, 1}, 1);
  m = balance_tasks(m);
  for (const auto& e : m.entries) {
    if (e.split == Split::val) {
      EXPECT_EQ(e.replication, 1);
    }
  }
  const auto counts = task_sample_counts(m);
  EXPECT_LE(std::abs(counts.at("big") - counts.at("small")), m.entries[0].samples());
}

TEST(ManifestJson, RoundTripAndValidation) {
  DatasetManifest m = balance_tasks(split_dataset(tasks({{"a", 5}, {"b", 3}}), {2, 1}, 9));
  EXPECT_EQ(manifest_from_json(nlohmann::json::parse(to_json(m).dump())), m);
  DatasetManifest v = split_dataset(tasks({{"a", 2}}), {1, 1}, 9, true, SplitGranularity::view);
  EXPECT_EQ(manifest_from_json(to_json(v)), v);

  DatasetManifest dup = tasks({{"a", 2}});
  dup.entries[1].episode_id = dup.entries[0].episode_id;
  const auto bad = validate_manifest(split_dataset(dup, {1, 1}, 0));
  ASSERT_EQ(bad.size(), 1u);
  EXPECT_EQ(bad.front().code, "duplicate_episode_id");
}

TEST(PortableShuffle, KnownPermutation) {
  std::vector<int> v{0, 1, 2, 3, 4};
  std::mt19937_64 rng(0);
  detail::portable_shuffle(v, rng);
  std::vector<int> again{0, 1, 2, 3, 4};
  std::mt19937_64 rng2(0);
  detail::portable_shuffle(again, rng2);
  EXPECT_EQ(v, again);
  std::sort(v.begin(), v.end());
  EXPECT_EQ(v, (std::vector<int>{0, 1, 2, 3, 4}));
}
