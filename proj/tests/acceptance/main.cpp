// Acceptance suite: one PASS/FAIL line per criterion. Arguments restrict the
// run to the named criteria (e.g. `acceptance 2 7`).
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <set>
#include <vector>

#include "report.hpp"

void equivalence_criteria(acceptance::Report& rep);
void lyapunov_criteria(acceptance::Report& rep);
void zero_mode_criteria(acceptance::Report& rep);
void oracle_criteria(acceptance::Report& rep);
void duhamel_criteria(acceptance::Report& rep);
void pipeline_criteria(acceptance::Report& rep);

int main(int argc, char** argv) {
  struct Group {
    std::vector<int> criteria;
    void (*fn)(acceptance::Report&);
  };
  const Group groups[] = {{{1, 3, 4, 9, 10}, &pipeline_criteria}, {{2}, &lyapunov_criteria},
                          {{5}, &zero_mode_criteria},             {{6}, &oracle_criteria},
                          {{7}, &duhamel_criteria},               {{8}, &equivalence_criteria}};
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  acceptance::Report rep;
  for (const Group& g : groups) {
    bool run = wanted.empty();
    for (int c : g.criteria) run = run || wanted.count(c);
    if (!run) continue;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      g.fn(rep);
    } catch (const std::exception& e) {
      for (int c : g.criteria) {
        if (!rep.has(c)) rep.add(c, false, std::string("error: ") + e.what());
      }
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::fprintf(stderr, "criteria group starting at %d done in %.1f s\n", g.criteria.front(), s);
  }
  return rep.print();
}
