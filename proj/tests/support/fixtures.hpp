#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "feature_oracle.hpp"
#include "inkscreen/stroke_model.hpp"

namespace fixtures {

using inkscreen::PenSample;

inline PenSample down(double t, double x, double y, double p = 0.5, double tx = 0.0, double ty = 0.0) {
  return {t, x, y, p, tx, ty, true};
}

inline PenSample up(double t, double x = 0.0, double y = 0.0) { return {t, x, y, 0.0, 0.0, 0.0, false}; }

inline double dyadic(double v, double steps) { return std::round(v * steps) / steps; }

// Random multi-stroke recording on dyadic grids (1/256 mm, 1/64 ms, 1/1024
// pressure, 1/64 degree) so that shifted copies are exactly representable.
inline std::vector<PenSample> random_samples(std::mt19937_64& rng, int max_strokes = 5, int max_samples = 30,
                                             bool allow_short = true) {
  std::uniform_int_distribution<int> n_strokes(1, max_strokes);
  std::uniform_int_distribution<int> n_samples(allow_short ? 1 : 3, max_samples);
  std::uniform_int_distribution<int> dt_steps(64 * 3, 64 * 12);
  std::uniform_int_distribution<int> hover(0, 3);
  std::normal_distribution<double> step(0.0, 1.0);
  std::uniform_real_distribution<double> pressure(0.05, 1.0);
  std::vector<PenSample> out;
  double t = dyadic(std::uniform_real_distribution<double>(0.0, 50.0)(rng), 64.0);
  double x = dyadic(step(rng) * 20.0, 256.0), y = dyadic(step(rng) * 20.0, 256.0);
  double tx = dyadic(step(rng) * 10.0, 64.0), ty = dyadic(step(rng) * 10.0, 64.0);
  const int strokes = n_strokes(rng);
  for (int s = 0; s < strokes; ++s) {
    if (s > 0) {
      const int h = hover(rng);
      for (int k = 0; k < h; ++k) {
        t += dt_steps(rng) / 64.0;
        out.push_back(up(t, x, y));
      }
      t += 10.0 * dt_steps(rng) / 64.0;
    }
    const int n = n_samples(rng);
    for (int i = 0; i < n; ++i) {
      if (i > 0 || s > 0 || !out.empty()) t += dt_steps(rng) / 64.0;
      x = dyadic(x + step(rng), 256.0);
      y = dyadic(y + step(rng), 256.0);
      tx = std::clamp(dyadic(tx + 0.5 * step(rng), 64.0), -80.0, 80.0);
      ty = std::clamp(dyadic(ty + 0.5 * step(rng), 64.0), -80.0, 80.0);
      out.push_back(down(t, x, y, dyadic(pressure(rng), 1024.0), tx, ty));
    }
  }
  return out;
}

inline std::vector<oracle::Sample> to_oracle(const std::vector<PenSample>& samples) {
  std::vector<oracle::Sample> out;
  for (const auto& s : samples) out.push_back({s.t, s.x, s.y, s.pressure, s.tilt_x, s.tilt_y, s.pen_down});
  return out;
}

inline std::string sample_json(double t, double p, bool d) {
  return "{\"t\":" + std::to_string(t) + ",\"x\":1,\"y\":2,\"p\":" + std::to_string(p) +
         ",\"tx\":0,\"ty\":0,\"d\":" + (d ? "true" : "false") + "}";
}

}  // namespace fixtures
