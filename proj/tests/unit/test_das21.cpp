#include <doctest.h>

#include "ldfs/das21.hpp"
#include "ldfs/rng.hpp"
#include "test_helpers.hpp"

using namespace ldfs;

namespace {

Das21Response fill(int value) {
  Das21Response r;
  r.items.fill(value);
  return r;
}

Das21Response with_items(const std::array<int, 7>& idx, int value) {
  Das21Response r;
  r.items.fill(0);
  for (int i : idx) r.items[i - 1] = value;
  return r;
}

}  // namespace

TEST_SUITE("das21") {

TEST_CASE("all zeros score to normal") {
  const DasScores s = score_subscales(fill(0));
  CHECK(s.depression_final == 0);
  CHECK(s.anxiety_final == 0);
  CHECK(s.stress_final == 0);
  CHECK(s.depression_level == Severity::normal);
  CHECK(s.anxiety_level == Severity::normal);
  CHECK(s.stress_level == Severity::normal);
}

TEST_CASE("all threes hit the top band of every subscale") {
  const DasScores s = score_subscales(fill(3));
  CHECK(s.depression_final == 42);
  CHECK(s.anxiety_final == 42);
  CHECK(s.stress_final == 42);
  CHECK(s.depression_level == Severity::extremely_severe);
  CHECK(s.anxiety_level == Severity::extremely_severe);
  CHECK(s.stress_level == Severity::extremely_severe);
}

TEST_CASE("stress items all 1 stay inside the normal band") {
  const DasScores s = score_subscales(with_items(stress_items(), 1));
  CHECK(s.stress_final == 14);
  CHECK(s.stress_level == Severity::normal);  // band is 0-14 inclusive
  CHECK(s.anxiety_final == 0);
  CHECK(s.depression_final == 0);
}

TEST_CASE("anxiety raw sum 4 doubles into the mild band") {
  Das21Response r;
  r.items.fill(0);
  r.items[2 - 1] = 2;
  r.items[4 - 1] = 1;
  r.items[7 - 1] = 1;
  const DasScores s = score_subscales(r);
  CHECK(s.anxiety_final == 8);
  CHECK(s.anxiety_level == Severity::mild);
}

TEST_CASE("item outside 0..3 is rejected") {
  Das21Response r = fill(0);
  r.items[4] = 4;
  CHECK(testutil::thrown_code([&] { score_subscales(r); }) ==
        errc::invalid_item_value);
  r.items[4] = -1;
  CHECK(testutil::thrown_code([&] { score_subscales(r); }) ==
        errc::invalid_item_value);
}

TEST_CASE("severity bands partition 0..42 with the published cutoffs") {
  // Depression 0-9/10-13/14-20/21-27/28+.
  for (int s = 0; s <= 42; ++s) {
    const Severity d = depression_severity(s);
    if (s <= 9) CHECK(d == Severity::normal);
    else if (s <= 13) CHECK(d == Severity::mild);
    else if (s <= 20) CHECK(d == Severity::moderate);
    else if (s <= 27) CHECK(d == Severity::severe);
    else CHECK(d == Severity::extremely_severe);
  }
  // Anxiety 0-7/8-9/10-14/15-19/20+.
  for (int s = 0; s <= 42; ++s) {
    const Severity a = anxiety_severity(s);
    if (s <= 7) CHECK(a == Severity::normal);
    else if (s <= 9) CHECK(a == Severity::mild);
    else if (s <= 14) CHECK(a == Severity::moderate);
    else if (s <= 19) CHECK(a == Severity::severe);
    else CHECK(a == Severity::extremely_severe);
  }
  // Stress 0-14/15-18/19-25/26-33/34+.
  for (int s = 0; s <= 42; ++s) {
    const Severity t = stress_severity(s);
    if (s <= 14) CHECK(t == Severity::normal);
    else if (s <= 18) CHECK(t == Severity::mild);
    else if (s <= 25) CHECK(t == Severity::moderate);
    else if (s <= 33) CHECK(t == Severity::severe);
    else CHECK(t == Severity::extremely_severe);
  }
}

TEST_CASE("raising any single item never lowers a score or level") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    Das21Response r;
    for (auto& v : r.items) v = int(rng.uniform_index(4));
    const int item = int(rng.uniform_index(21));
    if (r.items[item] == 3) continue;
    const DasScores before = score_subscales(r);
    Das21Response bumped = r;
    bumped.items[item] += 1;
    const DasScores after = score_subscales(bumped);
    CHECK(after.depression_final >= before.depression_final);
    CHECK(after.anxiety_final >= before.anxiety_final);
    CHECK(after.stress_final >= before.stress_final);
    CHECK(int(after.depression_level) >= int(before.depression_level));
    CHECK(int(after.anxiety_level) >= int(before.anxiety_level));
    CHECK(int(after.stress_level) >= int(before.stress_level));
  }
}

TEST_CASE("final scores are always even") {
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    Das21Response r;
    for (auto& v : r.items) v = int(rng.uniform_index(4));
    const DasScores s = score_subscales(r);
    CHECK(s.depression_final % 2 == 0);
    CHECK(s.anxiety_final % 2 == 0);
    CHECK(s.stress_final % 2 == 0);
  }
}

TEST_CASE("labels: all normal") {
  const MentalHealthLabel l =
      derive_labels(score_subscales(fill(0)), MulticlassPolicy::strict);
  CHECK(l.binary == BinaryLabel::normal);
  REQUIRE(l.multiclass.has_value());
  CHECK(*l.multiclass == MulticlassLabel::normal);
  CHECK(l.canonical);
}

TEST_CASE("labels: stress+anxiety+depression is the full canonical class") {
  // Mild depression, moderate anxiety, moderate stress.
  DasScores s;
  s.depression_final = 12;
  s.anxiety_final = 12;
  s.stress_final = 20;
  s.depression_level = depression_severity(12);
  s.anxiety_level = anxiety_severity(12);
  s.stress_level = stress_severity(20);
  REQUIRE(s.depression_level == Severity::mild);
  REQUIRE(s.anxiety_level == Severity::moderate);
  REQUIRE(s.stress_level == Severity::moderate);
  const MentalHealthLabel l = derive_labels(s, MulticlassPolicy::strict);
  CHECK(l.binary == BinaryLabel::abnormal);
  REQUIRE(l.multiclass.has_value());
  CHECK(*l.multiclass == MulticlassLabel::stress_anxiety_depression);
  CHECK(l.canonical);
}

TEST_CASE("labels: anxiety-only is non-canonical") {
  DasScores s;
  s.anxiety_final = 10;
  s.anxiety_level = anxiety_severity(10);
  REQUIRE(s.anxiety_level == Severity::moderate);

  const MentalHealthLabel strict = derive_labels(s, MulticlassPolicy::strict);
  CHECK(strict.binary == BinaryLabel::abnormal);
  CHECK_FALSE(strict.multiclass.has_value());
  CHECK_FALSE(strict.canonical);

  const MentalHealthLabel rank = derive_labels(s, MulticlassPolicy::rank);
  CHECK(rank.binary == BinaryLabel::abnormal);
  REQUIRE(rank.multiclass.has_value());
  CHECK(*rank.multiclass == MulticlassLabel::stress);  // one abnormal subscale
  CHECK_FALSE(rank.canonical);
}

TEST_CASE("binary label depends only on the three levels") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    Das21Response r;
    for (auto& v : r.items) v = int(rng.uniform_index(4));
    const DasScores s = score_subscales(r);
    const MentalHealthLabel l = derive_labels(s, MulticlassPolicy::rank);
    const bool any = s.stress_level != Severity::normal ||
                     s.anxiety_level != Severity::normal ||
                     s.depression_level != Severity::normal;
    CHECK((l.binary == BinaryLabel::abnormal) == any);
  }
}

TEST_CASE("response file reader validates columns and values") {
  testutil::TempFile f("responses.csv");
  std::string header = "patient_id";
  for (int q = 1; q <= 21; ++q) header += ",q" + std::to_string(q);
  f.write(header + "\np1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n"
                   "p2,3,3,3,3,3,3,3,3,3,3,3,3,3,3,3,3,3,3,3,3,3\n");
  const auto responses = read_responses(f.path());
  REQUIRE(responses.size() == 2);
  CHECK(responses[0].patient_id == "p1");
  CHECK(score_subscales(responses[1].response).stress_final == 42);

  testutil::TempFile bad("responses_bad.csv");
  bad.write("patient_id,q1\np1,0\n");
  CHECK(testutil::thrown_code([&] { read_responses(bad.path()); }) ==
        errc::missing_column);
}

}  // TEST_SUITE
