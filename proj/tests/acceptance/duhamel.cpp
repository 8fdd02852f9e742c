// Criterion 7: forcing integral against the reference constant.
#include <algorithm>
#include <cmath>

#include "couette/analysis.hpp"
#include "report.hpp"

using namespace couette;
using acceptance::fmt;

void duhamel_criteria(acceptance::Report& rep) {
  const double ref = forcing_reference_constant();
  bool ok = std::abs(ref - 1.74805) < 1e-5;
  std::string detail = "reference constant=" + fmt("%.8f", ref) + "; ";
  for (int k : {1, 2, 3}) {
    for (double eta : {0.0, 1.0, 10.0}) {
      for (double g : {1.4, 2.0}) {
        const DuhamelBound b = duhamel_bound_check({k, eta}, {g, 1.0});
        const bool within = b.value <= 1.74805 * (1.0 + 1e-6);
        ok = ok && within;
        if (g == 1.4) {
          detail += "k=" + std::to_string(k) + " eta=" + fmt("%g", eta) + ": " + fmt("%.6f", b.value) +
                    (within ? "" : " (over)") + "; ";
        }
      }
    }
  }
  rep.add(7, ok, detail + "bound 1.74805*(1+1e-6); values do not depend on gamma");
}
