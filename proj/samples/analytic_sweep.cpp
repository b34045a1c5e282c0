// Greedy vs Pincer capture success over a short velocity-ratio sweep.

#include <iostream>

#include "pursuit/experiment.hpp"

int main(int argc, char** argv) {
  using namespace pursuit;
  const int episodes = argc > 1 ? std::stoi(argv[1]) : 20;
  ExperimentConfig cfg;  // three pursuers, 500-step episodes
  EvalOptions opt;
  opt.ratios = {1.1, 1.0, 0.9, 0.8};
  opt.episodes = episodes;
  for (Strategy s : {Strategy::Greedy, Strategy::Pincer}) {
    const auto rows = run_eval(
        cfg, std::string(to_string(s)), [&](std::mt19937_64& rng) { return make_analytic_policy(s, cfg, rng); }, opt);
    write_success(std::cout, rows);
  }
}
