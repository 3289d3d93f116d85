#include "feature_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oracle {

namespace {

const double NaN = std::numeric_limits<double>::quiet_NaN();
using Series = std::vector<double>;

struct Stroke {
  std::vector<Sample> s;
};

Series smooth(const Series& v, int window) {
  const int n = static_cast<int>(v.size());
  const int h = window / 2;
  Series out(v.size());
  for (int i = 0; i < n; ++i) {
    double sum = 0;
    int count = 0;
    for (int k = i - h; k <= i + h; ++k) {
      if (k < 0 || k >= n) continue;
      sum += v[k];
      ++count;
    }
    out[i] = sum / count;
  }
  return out;
}

Series deriv(const Series& v, const Series& t) {
  const std::size_t n = v.size();
  Series d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
    d[i] = (v[hi] - v[lo]) / (t[hi] - t[lo]);
  }
  return d;
}

double mean(const Series& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / v.size();
}

double sd(const Series& v) {
  if (v.size() < 2) return 0;
  const double m = mean(v);
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / (v.size() - 1));
}

double cv(const Series& v) {
  if (v.size() < 2) return NaN;
  const double s = sd(v);
  if (s == 0) return 0;
  double big = 0;
  for (double x : v) big = std::max(big, std::fabs(x));
  const double m = mean(v);
  if (std::fabs(m) < 1e-12 * big) return NaN;
  return s / m;
}

double median(Series v) {
  if (v.empty()) return NaN;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Counts direction reversals, ignoring flat steps.
int extrema(const Series& v) {
  int count = 0;
  int last_dir = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const int dir = v[i] > v[i - 1] ? 1 : (v[i] < v[i - 1] ? -1 : 0);
    if (dir == 0) continue;
    if (last_dir != 0 && dir != last_dir) ++count;
    last_dir = dir;
  }
  return count;
}

double cv_across(const std::vector<Series>& per) {
  if (per.size() < 2) return NaN;
  Series means;
  for (const auto& s : per) means.push_back(mean(s));
  return cv(means);
}

double cv_within(const std::vector<Series>& per) {
  double sum = 0;
  int used = 0;
  for (const auto& s : per) {
    const double c = cv(s);
    if (!std::isnan(c)) {
      sum += c;
      ++used;
    }
  }
  return used ? sum / used : NaN;
}

double pooled(const std::vector<Series>& per) {
  Series all;
  for (const auto& s : per) all.insert(all.end(), s.begin(), s.end());
  return median(all);
}

double div_or_nan(double a, double b) { return b == 0 ? NaN : a / b; }

}  // namespace

std::array<double, 38> task_features(const std::vector<Sample>& samples, int window) {
  std::array<double, 38> f;
  f.fill(NaN);

  std::vector<Stroke> strokes;
  bool in_stroke = false;
  for (const Sample& s : samples) {
    if (s.down) {
      if (!in_stroke) strokes.emplace_back();
      strokes.back().s.push_back(s);
    }
    in_stroke = s.down;
  }
  if (strokes.empty()) return f;

  Series pauses;
  for (std::size_t k = 1; k < strokes.size(); ++k) {
    pauses.push_back((strokes[k].s.front().t - strokes[k - 1].s.back().t) / 1000.0);
  }
  double path = 0, drawing = 0;
  for (const Stroke& st : strokes) {
    for (std::size_t i = 1; i < st.s.size(); ++i) {
      path += std::hypot(st.s[i].x - st.s[i - 1].x, st.s[i].y - st.s[i - 1].y);
    }
    drawing += (st.s.back().t - st.s.front().t) / 1000.0;
  }

  std::vector<Series> speed, acc, jerk, pres, pres_rate, tiltx, tilty, tiltx_rate, tilty_rate;
  for (const Stroke& st : strokes) {
    if (st.s.size() < 3) continue;
    Series t, x, y, p, tx, ty;
    for (const Sample& s : st.s) {
      t.push_back(s.t / 1000.0);
      x.push_back(s.x);
      y.push_back(s.y);
      p.push_back(s.p);
      tx.push_back(s.tx);
      ty.push_back(s.ty);
    }
    x = smooth(x, window);
    y = smooth(y, window);
    const Series vx = deriv(x, t), vy = deriv(y, t);
    const Series ax = deriv(vx, t), ay = deriv(vy, t);
    const Series jx = deriv(ax, t), jy = deriv(ay, t);
    Series sp, ac, jk;
    for (std::size_t i = 0; i < t.size(); ++i) {
      sp.push_back(std::hypot(vx[i], vy[i]));
      ac.push_back(std::hypot(ax[i], ay[i]));
      jk.push_back(std::hypot(jx[i], jy[i]));
    }
    speed.push_back(sp);
    acc.push_back(ac);
    jerk.push_back(jk);
    pres.push_back(smooth(p, window));
    pres_rate.push_back(deriv(pres.back(), t));
    tiltx.push_back(smooth(tx, window));
    tilty.push_back(smooth(ty, window));
    Series rx = deriv(tiltx.back(), t), ry = deriv(tilty.back(), t);
    for (double& v : rx) v = std::fabs(v);
    for (double& v : ry) v = std::fabs(v);
    tiltx_rate.push_back(rx);
    tilty_rate.push_back(ry);
  }

  int slot = 0;
  auto block = [&](const std::vector<Series>& per) {
    if (per.empty()) {
      slot += 5;
      return;
    }
    int ext = 0;
    for (const auto& s : per) ext += extrema(s);
    f[slot++] = pooled(per);
    f[slot++] = cv_across(per);
    f[slot++] = cv_within(per);
    f[slot++] = div_or_nan(ext, path);
    f[slot++] = div_or_nan(ext, drawing);
  };
  block(speed);
  block(acc);
  block(jerk);
  block(pres);
  if (!pres_rate.empty()) f[slot] = pooled(pres_rate);
  f[slot + 1] = cv_across(pres_rate);
  f[slot + 2] = cv_within(pres_rate);
  slot += 3;

  auto posture = [&](const std::vector<Series>& tilt, const std::vector<Series>& rate) {
    if (tilt.empty()) {
      slot += 5;
      return;
    }
    if (tilt.size() >= 2) {
      Series means;
      for (const auto& s : tilt) means.push_back(mean(s));
      f[slot] = sd(means);
    }
    double sds = 0;
    for (const auto& s : tilt) sds += sd(s);
    f[slot + 1] = sds / tilt.size();
    f[slot + 2] = pooled(rate);
    f[slot + 3] = cv_across(rate);
    f[slot + 4] = cv_within(rate);
    slot += 5;
  };
  posture(tiltx, tiltx_rate);
  posture(tilty, tilty_rate);

  double pause_sum = 0;
  for (double p : pauses) pause_sum += p;
  f[33] = pauses.empty() ? 0 : pause_sum / pauses.size();
  f[34] = pauses.size() < 2 ? 0 : cv(pauses);
  f[35] = static_cast<double>(strokes.size());
  f[36] = pauses.empty() ? 0 : div_or_nan(pause_sum, drawing);
  f[37] = div_or_nan(pause_sum + drawing, path);
  for (double& v : f) {
    if (!std::isfinite(v)) v = NaN;
  }
  return f;
}

}  // namespace oracle
