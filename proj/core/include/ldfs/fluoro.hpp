#pragma once

namespace ldfs {

// Normalization used when no ingested Anadn column exists. The device
// maker's published normalization is not public; `ratio` (a460/a365) is the
// plain backscatter normalization and is flagged experimental — the ingested
// Anadn column always wins when present.
enum class NadhFormula { ratio };

struct NadhResult {
  double value = 0.0;
  bool experimental = true;
};

// Throws ZeroBackscatter when a365 <= 0.
NadhResult nadh_relative(double a460, double a365,
                         NadhFormula policy = NadhFormula::ratio);

}  // namespace ldfs
