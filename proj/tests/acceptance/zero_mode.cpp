// Criterion 5: zero-mode method of lines against d'Alembert.
#include <algorithm>

#include "couette/pipeline.hpp"
#include "report.hpp"

using namespace couette;
using acceptance::fmt;

void zero_mode_criteria(acceptance::Report& rep) {
  bool ok = true;
  std::string detail;
  for (double mach : {0.5, 1.0, 2.0}) {
    const ZeroModeCheck c = zero_mode_check({1.4, mach}, 2.0, 4096);
    ok = ok && c.max_error < 1e-6 && c.energy_drift < 1e-6;
    detail += "M=" + fmt("%g", mach) + ": max error=" + fmt("%.2e", c.max_error) + " energy drift=" +
              fmt("%.2e", c.energy_drift) + " alpha error=" + fmt("%.2e", c.alpha_error) + "; ";
  }
  rep.add(5, ok, detail + "limits 1e-6");
}
