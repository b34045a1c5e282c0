#ifndef PURSUIT_EVADER_HPP
#define PURSUIT_EVADER_HPP

// Analytic evader. The cost of heading theta is
//
//   U(theta) = sum_i (1/r_i) cos(theta - bearing_i)
//            = A cos(theta) + B sin(theta),
//   A = sum_i cos(bearing_i)/r_i,  B = sum_i sin(bearing_i)/r_i,
//
// whose global minimum sits at atan2(-B, -A) with value -sqrt(A^2 + B^2).

#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "pursuit/errors.hpp"
#include "pursuit/torus.hpp"

namespace pursuit {

/// Distance and bearing from the evader to one pursuer.
struct PolarContact {
  double r = 1.0;
  double theta_rel = 0.0;
};

/// Weighted resultant (A, B) of a contact set.
struct ContactResultant {
  double a = 0.0;
  double b = 0.0;

  double magnitude() const noexcept { return std::hypot(a, b); }
};

inline constexpr double kDegenerateResultant = 1e-9;

inline ContactResultant contact_resultant(std::span<const PolarContact> contacts) {
  ContactResultant res;
  for (const auto& c : contacts) {
    if (!(c.r > 0.0)) throw SingularityError("evader contact at zero distance");
    res.a += std::cos(c.theta_rel) / c.r;
    res.b += std::sin(c.theta_rel) / c.r;
  }
  return res;
}

inline double evade_cost(double theta_e, std::span<const PolarContact> contacts) {
  if (contacts.empty()) throw InvalidArgument("evade_cost: no contacts");
  double cost = 0.0;
  for (const auto& c : contacts) {
    if (!(c.r > 0.0)) throw SingularityError("evade_cost: contact at zero distance");
    cost += std::cos(theta_e - c.theta_rel) / c.r;
  }
  return cost;
}

/// Minimizer of the evasion cost. A near-zero resultant (symmetric surround)
/// yields a uniformly random heading drawn from `rng`.
template <class Rng>
double evade_heading(std::span<const PolarContact> contacts, Rng& rng) {
  if (contacts.empty()) throw InvalidArgument("evade_heading: no contacts");
  const ContactResultant res = contact_resultant(contacts);
  if (res.magnitude() < kDegenerateResultant) {
    std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
    return normalize_angle(u(rng));
  }
  return normalize_angle(std::atan2(-res.b, -res.a));
}

/// Contacts built from minimal wrapped displacements (no replicas).
inline std::vector<PolarContact> torus_contacts(const Point2& evader,
                                                std::span<const Point2> pursuers) {
  std::vector<PolarContact> contacts;
  contacts.reserve(pursuers.size());
  for (const auto& p : pursuers) {
    const Displacement2 d = displacement(evader, p);
    const double r = d.norm();
    if (r == 0.0) throw SingularityError("pursuer co-located with evader");
    contacts.push_back({r, d.bearing()});
  }
  return contacts;
}

template <class Rng>
double evade_heading(const Point2& evader, std::span<const Point2> pursuers, Rng& rng) {
  if (pursuers.empty()) throw InvalidArgument("evade_heading: no pursuers");
  const auto contacts = torus_contacts(evader, pursuers);
  return evade_heading(std::span<const PolarContact>(contacts), rng);
}

}  // namespace pursuit

#endif  // PURSUIT_EVADER_HPP
