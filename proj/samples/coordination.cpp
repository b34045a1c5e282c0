// Instantaneous coordination for a synthetic team where agent 1 copies
// agent 0's previous heading with probability `p`.

#include <iostream>
#include <numbers>
#include <random>

#include "pursuit/metrics.hpp"

int main() {
  using namespace pursuit;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  for (double p : {0.0, 0.25, 0.5, 1.0}) {
    std::bernoulli_distribution copy(p);
    std::vector<ActionTrajectory> trs(50);
    for (auto& tr : trs) {
      double prev = angle(rng);
      for (int t = 0; t < 500; ++t) {
        const double a0 = angle(rng);
        tr.steps.push_back({a0, copy(rng) ? prev : angle(rng)});
        prev = a0;
      }
    }
    const auto rep = coordination_report(trs, 2, 16);
    const auto& fwd = rep.pairs.front();
    std::cout << "copy probability " << p << ": IC(p" << fwd.from << " -> p" << fwd.to << ") = " << fwd.mi_bits
              << " bits, high-influence fraction " << fwd.high_influence_fraction << '\n';
  }
}
