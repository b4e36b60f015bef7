#include "ldfs/fluoro.hpp"

#include "ldfs/csv.hpp"
#include "ldfs/error.hpp"

namespace ldfs {

NadhResult nadh_relative(double a460, double a365, NadhFormula policy) {
  if (!(a365 > 0.0)) {
    raise(errc::zero_backscatter,
          "a365 = " + csv::format_double(a365) + " must be > 0");
  }
  NadhResult out;
  switch (policy) {
    case NadhFormula::ratio:
      out.value = a460 / a365;
      out.experimental = true;
      break;
  }
  return out;
}

}  // namespace ldfs
