#include <algorithm>
#include <set>

#include <doctest.h>

#include "ldfs/rng.hpp"
#include "ldfs/splits.hpp"
#include "test_helpers.hpp"

using namespace ldfs;

namespace {

void check_partition(const SplitPlan& plan, std::size_t n) {
  for (const auto& fold : plan.folds) {
    std::vector<char> seen(n, 0);
    for (std::size_t r : fold.train) {
      REQUIRE(r < n);
      REQUIRE(seen[r] == 0);
      seen[r] = 1;
    }
    for (std::size_t r : fold.test) {
      REQUIRE(r < n);
      REQUIRE(seen[r] == 0);  // disjoint from train
      seen[r] = 1;
    }
    for (std::size_t r = 0; r < n; ++r) REQUIRE(seen[r] == 1);  // union = all
  }
}

void check_patient_disjoint(const SplitPlan& plan,
                            const std::vector<std::string>& ids) {
  for (const auto& fold : plan.folds) {
    std::set<std::string> train_patients, test_patients;
    for (std::size_t r : fold.train) train_patients.insert(ids[r]);
    for (std::size_t r : fold.test) test_patients.insert(ids[r]);
    for (const auto& p : test_patients) {
      REQUIRE(train_patients.count(p) == 0);
    }
  }
}

}  // namespace

TEST_SUITE("splits") {

TEST_CASE("80:20 split sizes, determinism and minimum rows") {
  const SplitPlan plan = split_8020(10, 1234);
  REQUIRE(plan.folds.size() == 1);
  CHECK(plan.folds[0].test.size() == 2);
  CHECK(plan.folds[0].train.size() == 8);
  check_partition(plan, 10);

  const SplitPlan again = split_8020(10, 1234);
  CHECK(plan.folds[0].test == again.folds[0].test);
  const SplitPlan other = split_8020(10, 1235);
  CHECK(plan.folds[0].test != other.folds[0].test);

  CHECK(testutil::thrown_code([&] { split_8020(3, 0); }) == errc::too_few_rows);
  CHECK(testutil::thrown_code([&] { split_8020(4, 0); }) == errc::too_few_rows);
}

TEST_CASE("kfold: five singleton patients, forced partition") {
  const std::vector<std::string> ids{"A", "B", "C", "D", "E"};
  const SplitPlan plan = kfold_patientwise(ids, 5, 7);
  REQUIRE(plan.folds.size() == 5);
  std::set<std::size_t> tested;
  for (const auto& fold : plan.folds) {
    REQUIRE(fold.test.size() == 1);
    tested.insert(fold.test[0]);
  }
  CHECK(tested.size() == 5);
  check_partition(plan, 5);
}

TEST_CASE("kfold keeps a patient's rows on one side") {
  const std::vector<std::string> ids{"A", "A", "B", "C"};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SplitPlan plan = kfold_patientwise(ids, 2, seed);
    check_partition(plan, 4);
    check_patient_disjoint(plan, ids);
    for (const auto& fold : plan.folds) {
      const bool a0_test =
          std::find(fold.test.begin(), fold.test.end(), 0u) != fold.test.end();
      const bool a1_test =
          std::find(fold.test.begin(), fold.test.end(), 1u) != fold.test.end();
      CHECK(a0_test == a1_test);
    }
  }
}

TEST_CASE("kfold needs at least k distinct patients") {
  const std::vector<std::string> ids{"A", "B", "C"};
  CHECK(testutil::thrown_code([&] { kfold_patientwise(ids, 5, 0); }) ==
        errc::too_few_patients);
}

TEST_CASE("kfold balances fold sizes within one patient") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const int p = 5 + int(rng.uniform_index(30));
    const int k = 2 + int(rng.uniform_index(5));
    if (p < k) continue;
    std::vector<std::string> ids;
    for (int i = 0; i < p; ++i) {
      const std::size_t reps = 1 + rng.uniform_index(3);
      for (std::size_t r = 0; r < reps; ++r) {
        ids.push_back("p" + std::to_string(i));
      }
    }
    const SplitPlan plan = kfold_patientwise(ids, k, trial);
    std::vector<std::size_t> patients_per_fold;
    for (const auto& fold : plan.folds) {
      std::set<std::string> s;
      for (std::size_t r : fold.test) s.insert(ids[r]);
      patients_per_fold.push_back(s.size());
    }
    const auto [lo, hi] =
        std::minmax_element(patients_per_fold.begin(), patients_per_fold.end());
    CHECK(*hi - *lo <= 1);
  }
}

TEST_CASE("lopo: one fold per patient, rows grouped, sorted order") {
  const std::vector<std::string> ids{"A", "A", "B", "C"};
  const SplitPlan plan = lopo(ids);
  REQUIRE(plan.folds.size() == 3);
  CHECK(plan.folds[0].test == std::vector<std::size_t>{0, 1});
  CHECK(plan.folds[0].train == std::vector<std::size_t>{2, 3});
  CHECK(plan.folds[1].test == std::vector<std::size_t>{2});
  CHECK(plan.folds[2].test == std::vector<std::size_t>{3});
  check_partition(plan, 4);
  check_patient_disjoint(plan, ids);
}

TEST_CASE("lopo edge cases") {
  const std::vector<std::string> two{"A", "B"};
  const SplitPlan plan = lopo(two);
  REQUIRE(plan.folds.size() == 2);
  CHECK(plan.folds[0].test.size() == 1);
  CHECK(plan.folds[1].test.size() == 1);

  const std::vector<std::string> one{"A", "A"};
  CHECK(testutil::thrown_code([&] { lopo(one); }) == errc::single_patient);
}

TEST_CASE("randomized partition + disjointness properties (1000 trials)") {
  Rng rng(8080);
  for (int trial = 0; trial < 1000; ++trial) {
    const int p = 2 + int(rng.uniform_index(20));
    std::vector<std::string> ids;
    for (int i = 0; i < p; ++i) {
      const std::size_t reps = 1 + rng.uniform_index(4);
      for (std::size_t r = 0; r < reps; ++r) {
        ids.push_back("p" + std::to_string(i));
      }
    }
    const std::size_t n = ids.size();
    const std::uint64_t seed = rng.next_u64();

    switch (trial % 3) {
      case 0: {
        if (n < 5) break;
        check_partition(split_8020(n, seed), n);
        break;
      }
      case 1: {
        const int k = 2 + int(rng.uniform_index(4));
        if (p < k) break;
        const SplitPlan plan = kfold_patientwise(ids, k, seed);
        check_partition(plan, n);
        check_patient_disjoint(plan, ids);
        break;
      }
      default: {
        if (p < 2) break;
        const SplitPlan plan = lopo(ids);
        CHECK(plan.folds.size() == std::size_t(p));
        check_partition(plan, n);
        check_patient_disjoint(plan, ids);
        break;
      }
    }
  }
}

TEST_CASE("plans serialize for audit and round-trip") {
  const std::vector<std::string> ids{"A", "A", "B", "C", "D"};
  const SplitPlan plan = kfold_patientwise(ids, 2, 99);
  const SplitPlan back = deserialize_plan(serialize_plan(plan));
  CHECK(back.scheme == plan.scheme);
  CHECK(back.seed == plan.seed);
  CHECK(back.k == plan.k);
  REQUIRE(back.folds.size() == plan.folds.size());
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    CHECK(back.folds[f].train == plan.folds[f].train);
    CHECK(back.folds[f].test == plan.folds[f].test);
  }
  CHECK(testutil::thrown_code([&] { deserialize_plan("{broken"); }) ==
        errc::corrupt_payload);
}

}  // TEST_SUITE
