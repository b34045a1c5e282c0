// Where does the evader run? Prints its heading for a few pursuer layouts.

#include <iostream>
#include <numbers>
#include <random>
#include <vector>

#include "pursuit/evader.hpp"

int main() {
  using pursuit::PolarContact;
  constexpr double pi = std::numbers::pi;
  const std::vector<std::vector<PolarContact>> layouts{
      {{1.0, 0.0}, {1.0, pi / 2}, {1.0, pi}},        // east, north, west
      {{1.0, 0.0}, {1.0, pi / 2}, {1.0, -pi / 2}},   // east, north, south
      {{0.1, 0.0}, {0.6, 2.0}},                      // one close, one far
  };
  std::mt19937_64 rng(1);
  for (const auto& contacts : layouts) {
    std::cout << "pursuers at bearings";
    for (const auto& c : contacts) std::cout << ' ' << c.theta_rel << " (r=" << c.r << ')';
    std::cout << " -> evader heading " << pursuit::evade_heading(std::span<const PolarContact>(contacts), rng)
              << " rad\n";
  }
}
