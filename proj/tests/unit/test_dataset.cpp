#include <cmath>
#include <cstring>

#include <doctest.h>

#include "ldfs/dataset.hpp"
#include "ldfs/rng.hpp"
#include "ldfs/signal.hpp"
#include "test_helpers.hpp"

using namespace ldfs;

namespace {

// A table using the published header spellings.
const char* kPaperishHeader =
    "Patient_ID,Age,Gender,Race,Height,Weight,BMI_index,Heart Rate,"
    "Level of BP,Smoking routine,Type of skins,Hand,Sleep state,Type of data,"
    "M,\xcf\x83,Kv100,A365,A460,Anadn,POM,Ae,An,Am,Ar,Ac,F_Ae,F_An,F_Am,F_Ar,"
    "F_Ac,T";

std::string row_36f() {
  return "p036,36,female,asian,165,58,21.3,72,normal,never,III,right,awake,"
         "fingertip,22.54,3.96,21.09,86.82,59.3,1.01,8.74,1.49,1.46,1.17,0.7,"
         "0.93,0.012,0.04,0.1,0.3,1.0,31.4";
}

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("paper-style headers resolve through the alias map") {
  testutil::TempFile f("participants.csv");
  f.write(std::string(kPaperishHeader) + "\n" + row_36f() + "\n");
  const LoadResult r = load_participants(f.path());
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rejected.empty());
  const auto& rec = r.rows[0].participant;
  CHECK(rec.patient_id == "p036");
  CHECK(rec.age == 36);
  CHECK(rec.gender == Gender::female);
  CHECK(rec.hand == Hand::right);
  CHECK(rec.race == Race::asian);
  const auto& sf = r.rows[0].sensors;
  CHECK(sf.m == 22.54);
  CHECK(sf.sigma == 3.96);       // σ column
  CHECK(sf.anadh == 1.01);       // Anadn column
  CHECK(sf.band_frequency[0] == 0.012);  // F_Ae column
  CHECK(sf.temperature == 31.4);
}

TEST_CASE("empty file raises EmptyFile") {
  testutil::TempFile f("empty.csv");
  f.write("");
  CHECK(testutil::thrown_code([&] { load_participants(f.path()); }) ==
        errc::empty_file);
  f.write("Patient_ID,Age\n");
  CHECK(testutil::thrown_code([&] { load_participants(f.path()); }) ==
        errc::empty_file);
}

TEST_CASE("missing required column raises MissingColumn") {
  testutil::TempFile f("nocol.csv");
  f.write("Age,Gender\n36,female\n");
  CHECK(testutil::thrown_code([&] { load_participants(f.path()); }) ==
        errc::missing_column);
}

TEST_CASE("BMI inconsistency rejects the row with a diagnostic") {
  testutil::TempFile f("bmi.csv");
  f.write("Patient_ID,Height,Weight,BMI_index\n"
          "p1,170,68,40\n"    // 68/1.70^2 = 23.5, |23.5-40| > 0.5
          "p2,170,68,23.5\n"  // consistent
  );
  const LoadResult r = load_participants(f.path());
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].participant.patient_id == "p2");
  REQUIRE(r.rejected.size() == 1);
  CHECK(r.rejected[0].row == 0);
  CHECK(r.rejected[0].column == "bmi_index");
}

TEST_CASE("hard invariants reject rows") {
  testutil::TempFile f("inv.csv");
  f.write("Patient_ID,Age,Height,M\n"
          "p1,17,170,22\n"   // minor
          "p2,30,-5,22\n"    // height <= 0
          "p3,30,170,-1\n"   // negative perfusion
          "p4,30,170,22\n");
  const LoadResult r = load_participants(f.path());
  CHECK(r.rows.size() == 1);
  CHECK(r.rejected.size() == 3);
}

TEST_CASE("writer round-trips records bit-exactly") {
  testutil::TempFile f("orig.csv");
  f.write(std::string(kPaperishHeader) + ",Extra_Score\n" + row_36f() +
          ",0.123456789012345678\n");
  const LoadResult first = load_participants(f.path());
  REQUIRE(first.rows.size() == 1);

  testutil::TempFile g("rewritten.csv");
  write_participants(g.path(), first.rows);
  const LoadResult second = load_participants(g.path());
  REQUIRE(second.rows.size() == 1);

  const auto& a = first.rows[0];
  const auto& b = second.rows[0];
  CHECK(a.participant.patient_id == b.participant.patient_id);
  CHECK(a.participant.age == b.participant.age);
  CHECK(a.participant.gender == b.participant.gender);
  CHECK(a.participant.bmi_index == b.participant.bmi_index);
  CHECK(a.sensors.m == b.sensors.m);
  CHECK(a.sensors.sigma == b.sensors.sigma);
  CHECK(a.sensors.anadh == b.sensors.anadh);
  for (int i = 0; i < 5; ++i) {
    CHECK(a.sensors.band_amplitude[i] == b.sensors.band_amplitude[i]);
    CHECK(a.sensors.band_frequency[i] == b.sensors.band_frequency[i]);
  }
  REQUIRE(a.extras.size() == 1);
  REQUIRE(b.extras.size() == 1);
  CHECK(a.extras[0].first == b.extras[0].first);
  CHECK(a.extras[0].second == b.extras[0].second);  // bit-exact double
}

TEST_CASE("identical files produce identical encoders and column order") {
  testutil::TempFile f("enc.csv");
  f.write("Patient_ID,Gender,Type of skins\n"
          "p1,female,III\np2,male,II\np3,female,IV\n");
  const LoadResult r1 = load_participants(f.path());
  const LoadResult r2 = load_participants(f.path());
  const FeatureMatrix m1 =
      assemble_feature_matrix(r1.rows, FeatureSet::all, ImputePolicy::none);
  const FeatureMatrix m2 =
      assemble_feature_matrix(r2.rows, FeatureSet::all, ImputePolicy::none);
  REQUIRE(m1.columns.size() == m2.columns.size());
  for (std::size_t c = 0; c < m1.columns.size(); ++c) {
    CHECK(m1.columns[c].name == m2.columns[c].name);
    CHECK(m1.columns[c].categories == m2.columns[c].categories);
  }
  // Bitwise comparison: absent cells are NaN and NaN != NaN.
  REQUIRE(m1.values.size() == m2.values.size());
  CHECK(std::memcmp(m1.values.data(), m2.values.data(),
                    m1.values.size() * sizeof(double)) == 0);
}

TEST_CASE("top10 assembles exactly the published ten columns") {
  testutil::TempFile f("top10.csv");
  f.write(std::string(kPaperishHeader) + "\n" + row_36f() + "\n");
  const LoadResult r = load_participants(f.path());
  const FeatureMatrix m =
      assemble_feature_matrix(r.rows, FeatureSet::top10, ImputePolicy::none);
  const std::vector<std::string> expected = {
      "bmi_index", "heart_rate", "age",  "weight", "height",
      "m",         "temperature", "a460", "kv100",  "skin_type"};
  CHECK(m.column_names() == expected);
}

TEST_CASE("sensor_only excludes demographics") {
  testutil::TempFile f("sens.csv");
  f.write(std::string(kPaperishHeader) + "\n" + row_36f() + "\n");
  const LoadResult r = load_participants(f.path());
  const FeatureMatrix m = assemble_feature_matrix(r.rows, FeatureSet::sensor_only,
                                                  ImputePolicy::none);
  for (const char* absent : {"age", "gender", "height", "weight",
                             "smoking_routine", "bp_level"}) {
    CHECK(m.column_index(absent) == -1);
  }
  CHECK(m.column_index("m") >= 0);
  CHECK(m.column_index("temperature") >= 0);
  CHECK(m.n_cols == 18);  // 7 scalar params + 5 amplitudes + 5 freqs + T
}

TEST_CASE("assembling zero rows raises AllRowsDropped") {
  std::vector<ParticipantRow> none;
  CHECK(testutil::thrown_code([&] {
          assemble_feature_matrix(none, FeatureSet::all, ImputePolicy::none);
        }) == errc::all_rows_dropped);
}

TEST_CASE("unknown feature set name is rejected") {
  CHECK(parse_feature_set("top10") == FeatureSet::top10);
  CHECK(testutil::thrown_code([&] { parse_feature_set("everything"); }) ==
        errc::unknown_feature_set);
}

TEST_CASE("unknown numeric columns become extras, text columns are skipped") {
  testutil::TempFile f("extras.csv");
  f.write("Patient_ID,Mystery,Comment\np1,4.5,hello\np2,2.5,world\n");
  const LoadResult r = load_participants(f.path());
  REQUIRE(r.rows.size() == 2);
  REQUIRE(r.rows[0].extras.size() == 1);
  CHECK(r.rows[0].extras[0].first == "Mystery");
  CHECK(r.rows[0].extras[0].second == 4.5);
  bool warned = false;
  for (const auto& w : r.warnings) {
    if (w.find("Comment") != std::string::npos) warned = true;
  }
  CHECK(warned);
}

TEST_CASE("imputation fills only missing cells with the training median") {
  testutil::TempFile f("imp.csv");
  f.write("Patient_ID,Age,M\n"
          "p1,30,10\n"
          "p2,40,\n"
          "p3,50,30\n"
          "p4,,20\n");
  const LoadResult r = load_participants(f.path());
  FeatureMatrix m =
      assemble_feature_matrix(r.rows, FeatureSet::all, ImputePolicy::none);
  const int age_col = m.column_index("age");
  const int m_col = m.column_index("m");
  REQUIRE(age_col >= 0);
  REQUIRE(m_col >= 0);
  CHECK(std::isnan(m.at(1, m_col)));
  CHECK(std::isnan(m.at(3, age_col)));

  const std::vector<std::size_t> all{0, 1, 2, 3};
  const Imputer imputer = Imputer::fit(m, all);
  FeatureMatrix filled = m;
  imputer.apply(filled);
  CHECK(filled.at(0, m_col) == 10.0);  // untouched
  CHECK(filled.at(2, m_col) == 30.0);
  CHECK(filled.at(1, m_col) == 20.0);  // median of {10, 30, 20}
  CHECK(filled.at(3, age_col) == 40.0);  // median of {30, 40, 50}
  for (double v : filled.values) CHECK(std::isfinite(v));
}

TEST_CASE("ordinal encoding maps sorted categories with -1 for missing") {
  testutil::TempFile f("ord.csv");
  f.write("Patient_ID,Type of skins\np1,III\np2,\np3,II\np4,III\n");
  const LoadResult r = load_participants(f.path());
  const FeatureMatrix m =
      assemble_feature_matrix(r.rows, FeatureSet::all, ImputePolicy::none);
  const int c = m.column_index("skin_type");
  REQUIRE(c >= 0);
  CHECK(m.columns[c].kind == ColumnKind::ordinal);
  CHECK(m.columns[c].categories == std::vector<std::string>{"II", "III"});
  CHECK(m.at(0, c) == 1.0);
  CHECK(m.at(1, c) == -1.0);
  CHECK(m.at(2, c) == 0.0);
  CHECK(m.at(3, c) == 1.0);
}

TEST_CASE("schema encoder overrides fix category codes") {
  testutil::TempFile f("enc_override.csv");
  f.write("Patient_ID,Level of BP\np1,high\np2,low\np3,normal\np4,elevated\n");
  testutil::TempFile schema("schema.json");
  schema.write(R"({"encoders": {"bp_level":
      {"low": 0, "normal": 1, "elevated": 2, "high": 3}}})");
  const SchemaConfig cfg = SchemaConfig::load(schema.path());
  const LoadResult r = load_participants(f.path(), cfg);
  const FeatureMatrix m = assemble_feature_matrix(
      r.rows, FeatureSet::all, ImputePolicy::none, Encoding::ordinal,
      r.encoders);
  const int c = m.column_index("bp_level");
  REQUIRE(c >= 0);
  CHECK(m.at(0, c) == 3.0);  // high
  CHECK(m.at(1, c) == 0.0);  // low
  CHECK(m.at(2, c) == 1.0);  // normal
  CHECK(m.at(3, c) == 2.0);  // elevated
  CHECK(m.columns[c].categories ==
        std::vector<std::string>{"low", "normal", "elevated", "high"});

  // Non-bijective override maps are rejected.
  EncoderOverrides bad{{"bp_level", {{"low", 0}, {"high", 0}}}};
  CHECK(testutil::thrown_code([&] {
          assemble_feature_matrix(r.rows, FeatureSet::all, ImputePolicy::none,
                                  Encoding::ordinal, bad);
        }) == errc::config_error);
}

TEST_CASE("one-hot encoding expands categories into indicator columns") {
  testutil::TempFile f("onehot.csv");
  f.write("Patient_ID,Gender\np1,female\np2,male\n");
  const LoadResult r = load_participants(f.path());
  const FeatureMatrix m = assemble_feature_matrix(
      r.rows, FeatureSet::all, ImputePolicy::none, Encoding::onehot);
  const int cf = m.column_index("gender=female");
  const int cm = m.column_index("gender=male");
  REQUIRE(cf >= 0);
  REQUIRE(cm >= 0);
  CHECK(m.at(0, cf) == 1.0);
  CHECK(m.at(0, cm) == 0.0);
  CHECK(m.at(1, cm) == 1.0);
}

TEST_CASE("raw signal loader derives rate and flags problems") {
  SUBCASE("uniform 20 Hz recording") {
    testutil::TempFile f("sig.csv");
    std::string body = "t_s,perfusion_pu\n";
    for (int i = 0; i < 9600; ++i) {
      body += std::to_string(i * 0.05) + ",20\n";
    }
    f.write(body);
    const RawSignal s = load_raw_signal(f.path());
    CHECK(s.sample_rate == doctest::Approx(20.0).epsilon(1e-9));
    CHECK(s.duration == doctest::Approx(480.0).epsilon(1e-9));
    CHECK_FALSE(s.short_recording);
  }
  SUBCASE("single sample is too short") {
    CHECK(testutil::thrown_code([&] {
            make_raw_signal({0.0}, {20.0});
          }) == errc::too_short);
  }
  SUBCASE("non-monotonic timestamps") {
    CHECK(testutil::thrown_code([&] {
            make_raw_signal({0.0, 1.0, 0.5}, {1.0, 2.0, 3.0});
          }) == errc::non_monotonic_time);
  }
  SUBCASE("jitter above 1% is rejected") {
    std::vector<double> ts, pu;
    for (int i = 0; i < 1280; ++i) {
      double t = i * 0.05;
      if (i == 600) t += 0.002;  // 4% of dt
      ts.push_back(t);
      pu.push_back(20.0);
    }
    CHECK(testutil::thrown_code([&] {
            make_raw_signal(std::move(ts), std::move(pu));
          }) == errc::non_uniform_sampling);
  }
}

}  // TEST_SUITE
