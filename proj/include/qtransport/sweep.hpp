#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "qtransport/config.hpp"
#include "qtransport/table.hpp"

namespace qt {

// A numerical failure inside a sweep; the message names the operation and
// the parameters of the failing point.
class SweepNumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rows follow the scan product (first axis outermost) then the grid.
CurveTable run_sweep(const SweepConfig& c, int workers = 1);

struct CrosscheckOutcome {
  CurveTable table;
  std::size_t passed = 0;
  std::size_t total = 0;
  bool ok() const { return passed == total; }
};

CrosscheckOutcome run_crosscheck(const SweepConfig& c, int workers = 1);

void write_table(const CurveTable& t, const std::string& format, std::ostream& os);

}  // namespace qt
