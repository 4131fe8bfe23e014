#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "qmax/random.hpp"
#include "qmax/simulator.hpp"

namespace qmax::testing {

// Vehicle-by-vehicle replay of the signal queue without an event queue:
// service for vehicle i starts at s = max(A_i, D_{i-1}); it departs at s + h
// when s lies in a green window and s + h does not pass the window's end,
// otherwise service starts over at the next green onset.
struct Replay {
  std::vector<double> arrivals;
  std::vector<double> departures;  // only those at or before the horizon
  std::vector<double> waits;
};

inline Replay brute_force_replay(const SignalSimConfig& c) {
  Replay r;
  CounterStream rng(c.seed, 0);
  for (double t = rng.next_exponential(c.arrival_rate); t <= c.horizon;
       t += rng.next_exponential(c.arrival_rate)) {
    r.arrivals.push_back(t);
  }
  const double cyc = c.cycle_length;
  const double g = c.green_time();
  const double h = c.service_headway;
  const bool always_green = !(g < cyc);
  double previous = 0.0;
  for (double a : r.arrivals) {
    double s = std::max(a, previous);
    double d = 0.0;
    if (always_green) {
      d = s + h;
    } else {
      for (;;) {
        auto k = static_cast<long long>(std::floor(s / cyc));
        while (static_cast<double>(k + 1) * cyc <= s) ++k;
        while (static_cast<double>(k) * cyc > s) --k;
        const double window_end = static_cast<double>(k) * cyc + g;
        if (s < window_end && s + h <= window_end) {
          d = s + h;
          break;
        }
        s = static_cast<double>(k + 1) * cyc;
      }
    }
    if (d > c.horizon) break;
    r.departures.push_back(d);
    r.waits.push_back(d - h - a);
    previous = d;
  }
  return r;
}

// L(t): arrivals minus departures at or before t.
inline double queue_at(const std::vector<double>& arrivals, const std::vector<double>& departures,
                       double t) {
  const auto a = std::upper_bound(arrivals.begin(), arrivals.end(), t) - arrivals.begin();
  const auto d = std::upper_bound(departures.begin(), departures.end(), t) - departures.begin();
  return static_cast<double>(a - d);
}

}  // namespace qmax::testing
