// Walks the primary arrow on a 9-node ring to its final form, activating
// robots in round-robin order, and prints each configuration.
#include <iostream>

#include "ringexp/ringexp.hpp"

int main() {
  using namespace ringexp;
  const auto initial = Configuration::parse("1,0,2,1,0,0,0,0,0");
  Rng rng(7);
  const auto trace = resume(initial, SchedulerPolicy::round_robin(), FourRobotProtocol{}, rng, RandomAdversary(8));
  for (const auto& c : mrp(trace)) {
    const auto arrow = find_arrow(c);
    std::cout << c.to_string() << "  arrow size " << (arrow ? arrow->size : -1) << "\n";
  }
  std::cout << (is_final_arrow(trace.final_configuration) ? "final arrow reached" : "not final") << "\n";
}
