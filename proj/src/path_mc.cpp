#include "lqg/path_mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lqg/kernels.hpp"
#include "lqg/rng.hpp"

namespace lqg {

namespace {

// Stream identifiers for derive_seed.
constexpr std::uint64_t kBridgeStream = 0x62726467;
constexpr std::uint64_t kBridgeMaxStream = 0x62726d78;
constexpr std::uint64_t kSmallBallStream = 0x62727362;
constexpr std::uint64_t kConditionedStream = 0x636f6e64;
constexpr std::uint64_t kBetaStream = 0x62657461;
constexpr std::uint64_t kMarginalStream = 0x6d617267;
constexpr std::uint64_t kConeStream = 0x636f6e65;

template <class Fn>
void for_each_index(long count, Exec exec, Fn&& fn) {
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 256) num_threads(thread_count())
    for (long i = 0; i < count; ++i) fn(i);
  } else {
    for (long i = 0; i < count; ++i) fn(i);
  }
}

// One passage of X_t = B_t + m t from 0 to `level`. xs receives the grid
// values X_0 = 0, ..., X_j (all strictly below level, grid step h); the return
// value is the passage time tau in (j h, (j+1) h].
double first_passage(Rng& rng, double m, double level, double h, std::vector<double>& xs) {
  const long cap = static_cast<long>(std::ceil(10.0 * level / (m * h) + 10.0 / (m * m * h))) + 16;
  const double sd = std::sqrt(h);
  xs.clear();
  double x = 0.0;
  xs.push_back(x);
  for (long i = 0; i < cap; ++i) {
    const double y = x + m * h + sd * rng.normal();
    const double t = static_cast<double>(i) * h;
    if (y >= level) return t + h * (level - x) / (y - x);
    // Probability that the Brownian bridge between x and y touches level.
    const double expo = -2.0 * (level - x) * (level - y) / h;
    if (expo > -40.0 && rng.uniform() < std::exp(expo)) {
      return t + h * (level - x) / ((level - x) + (level - y));
    }
    x = y;
    xs.push_back(x);
  }
  throw Error(ErrorKind::Convergence, "first passage exceeded its step cap");
}

// Trapezoidal integral of g(base + level - X(u)) over u in [u0, tau] for one piece.
template <class G>
double integrate_piece(const std::vector<double>& xs, double tau, double h, double level, double base, double u0,
                       G&& g) {
  const long j = static_cast<long>(xs.size()) - 1;
  double total = 0.0;
  auto point_u = [&](long i) { return i <= j ? static_cast<double>(i) * h : tau; };
  auto point_y = [&](long i) { return i <= j ? base + level - xs[i] : base + level; };
  for (long i = 0; i <= j; ++i) {
    double ua = point_u(i);
    const double ub = point_u(i + 1);
    if (ub <= u0) continue;
    double ya = point_y(i);
    const double yb = point_y(i + 1);
    if (ua < u0) {
      ya += (yb - ya) * (u0 - ua) / (ub - ua);
      ua = u0;
    }
    total += 0.5 * (g(ya) + g(yb)) * (ub - ua);
  }
  return total;
}

}  // namespace

MCEstimate summarize(const std::vector<double>& values) {
  require(values.size() >= 2, ErrorKind::Precondition, "need at least two samples");
  const auto n = static_cast<double>(values.size());
  const double mean = compensated_sum(values) / n;
  CompensatedSum ss;
  for (double v : values) ss.add((v - mean) * (v - mean));
  MCEstimate e;
  e.mean = mean;
  e.std_error = std::sqrt(ss.value() / (n - 1.0)) / std::sqrt(n);
  e.n_paths = static_cast<long>(values.size());
  return e;
}

PathSample sample_bridge2d(Point2 anchor, double duration, int steps, std::uint64_t seed) {
  require(steps >= 2, ErrorKind::Precondition, "bridge needs at least two steps");
  require(duration > 0.0, ErrorKind::Domain, "bridge duration must be positive");
  Rng rng(seed, {kBridgeStream});
  const double h = duration / steps;
  const double sd = std::sqrt(h);
  PathSample p;
  p.kind = PathKind::Bridge2d;
  p.dt = h;
  p.duration = duration;
  std::vector<Point2> w(static_cast<std::size_t>(steps) + 1, Point2{0.0, 0.0});
  for (int i = 1; i <= steps; ++i)
    for (int c = 0; c < 2; ++c) w[i][c] = w[i - 1][c] + sd * rng.normal();
  p.times.resize(w.size());
  p.points.resize(w.size());
  for (int i = 0; i <= steps; ++i) {
    const double s = static_cast<double>(i) / steps;
    p.times[i] = i == steps ? duration : i * h;
    for (int c = 0; c < 2; ++c) p.points[i][c] = (w[i][c] - s * w[steps][c]) + anchor[c];
  }
  p.points.back() = anchor;
  return p;
}

BridgeMaxResult bridge_max_check(double duration, int steps, const std::vector<double>& levels, long samples,
                                 std::uint64_t seed, bool exact_fill, Exec exec) {
  require(steps >= 2 && samples >= 2 && duration > 0.0, ErrorKind::Precondition, "bad bridge check parameters");
  const double h = duration / steps;
  const double sd = std::sqrt(h);
  std::vector<double> maxima(static_cast<std::size_t>(samples));
  for_each_index(samples, exec, [&](long i) {
    Rng rng(seed, {kBridgeMaxStream, static_cast<std::uint64_t>(i)});
    std::vector<double> w(static_cast<std::size_t>(steps) + 1, 0.0);
    for (int j = 1; j <= steps; ++j) w[j] = w[j - 1] + sd * rng.normal();
    double best = 0.0;
    double prev = 0.0;
    for (int j = 1; j <= steps; ++j) {
      const double b = j == steps ? 0.0 : w[j] - (static_cast<double>(j) / steps) * w[steps];
      double top = std::max(prev, b);
      if (exact_fill) {
        const double d = b - prev;
        top = 0.5 * (prev + b + std::sqrt(d * d - 2.0 * h * std::log(rng.uniform_pos())));
      }
      best = std::max(best, top);
      prev = b;
    }
    maxima[i] = best;
  });
  BridgeMaxResult r;
  r.levels = levels;
  for (double k : levels) {
    long hits = 0;
    for (double mx : maxima) hits += mx >= k ? 1 : 0;
    const double p = static_cast<double>(hits) / samples;
    r.probability.push_back(p);
    r.std_error.push_back(std::sqrt(std::max(p * (1.0 - p), 1.0 / samples) / samples));
    r.exact.push_back(std::exp(-2.0 * k * k / duration));
  }
  return r;
}

std::vector<double> bridge2d_small_ball(double duration, int steps, const std::vector<double>& u, long samples,
                                        std::uint64_t seed, Exec exec) {
  require(samples >= 1, ErrorKind::Precondition, "need samples");
  std::vector<double> radius(static_cast<std::size_t>(samples));
  for_each_index(samples, exec, [&](long i) {
    const PathSample p =
        sample_bridge2d({0.0, 0.0}, duration, steps, derive_seed(seed, {kSmallBallStream, static_cast<std::uint64_t>(i)}));
    double r = 0.0;
    for (const auto& q : p.points) r = std::max(r, std::hypot(q[0], q[1]));
    radius[i] = r;
  });
  std::vector<double> out;
  for (double level : u) {
    long inside = 0;
    for (double r : radius) inside += r <= level ? 1 : 0;
    out.push_back(static_cast<double>(inside) / samples);
  }
  return out;
}

PathSample sample_conditioned(double m, double level, double dt, std::uint64_t seed) {
  require(m > 0.0 && level > 0.0, ErrorKind::Domain, "conditioned process needs m > 0 and level > 0");
  require(dt > 0.0 && dt <= 1e-3, ErrorKind::Precondition, "conditioned process needs 0 < dt <= 1e-3");
  Rng rng(seed, {kConditionedStream});
  std::vector<double> xs;
  const double tau = first_passage(rng, m, level, dt, xs);
  PathSample p;
  p.kind = PathKind::Conditioned;
  p.dt = dt;
  p.m = m;
  p.level = level;
  p.duration = tau;
  p.times.push_back(0.0);
  p.values.push_back(0.0);
  for (long i = static_cast<long>(xs.size()) - 1; i >= 0; --i) {
    p.times.push_back(tau - static_cast<double>(i) * dt);
    p.values.push_back(level - xs[i]);
  }
  return p;
}

namespace {

// Conditioned path on [0, duration] built from pasted passage pieces.
void conditioned_until(Rng& rng, double m, double duration, double dt, std::vector<double>& times,
                       std::vector<double>& values) {
  times.assign(1, 0.0);
  values.assign(1, 0.0);
  std::vector<double> xs;
  const double piece_level = m * duration + 3.0 * std::sqrt(duration) + 1.0;
  while (times.back() < duration) {
    const double base_t = times.back();
    const double base_x = values.back();
    const double tau = first_passage(rng, m, piece_level, dt, xs);
    for (long i = static_cast<long>(xs.size()) - 1; i >= 0; --i) {
      times.push_back(base_t + (tau - static_cast<double>(i) * dt));
      values.push_back(base_x + (piece_level - xs[i]));
    }
  }
  // Truncate at duration.
  const auto it = std::lower_bound(times.begin(), times.end(), duration);
  const auto k = static_cast<std::size_t>(it - times.begin());
  const double w = (duration - times[k - 1]) / (times[k] - times[k - 1]);
  const double v = values[k - 1] + w * (values[k] - values[k - 1]);
  times.resize(k + 1);
  values.resize(k + 1);
  times[k] = duration;
  values[k] = v;
}

}  // namespace

PathSample sample_conditioned_until(double m, double duration, double dt, std::uint64_t seed) {
  require(m > 0.0 && duration > 0.0, ErrorKind::Domain, "conditioned process needs m > 0 and duration > 0");
  require(dt > 0.0 && dt <= 1e-3, ErrorKind::Precondition, "conditioned process needs 0 < dt <= 1e-3");
  Rng rng(seed, {kConditionedStream, 1});
  PathSample p;
  p.kind = PathKind::Conditioned;
  p.dt = dt;
  p.m = m;
  p.duration = duration;
  conditioned_until(rng, m, duration, dt, p.times, p.values);
  p.level = p.values.back();
  return p;
}

PathSample sample_beta(double m, double duration, double dt, std::uint64_t seed) {
  require(m > 0.0 && duration > 0.0, ErrorKind::Domain, "beta process needs m > 0 and T > 0");
  require(dt > 0.0 && dt <= 1e-3, ErrorKind::Precondition, "beta process needs 0 < dt <= 1e-3");
  Rng negative_rng(seed, {kBetaStream, 0});
  Rng positive_rng(seed, {kBetaStream, 1});
  std::vector<double> nt;
  std::vector<double> nv;
  conditioned_until(negative_rng, m, duration, dt, nt, nv);

  PathSample p;
  p.kind = PathKind::BetaTwoSided;
  p.dt = dt;
  p.m = m;
  p.duration = duration;
  for (std::size_t i = nt.size(); i-- > 1;) {
    p.times.push_back(-nt[i]);
    p.values.push_back(nv[i]);
  }
  p.times.push_back(0.0);
  p.values.push_back(0.0);
  const long steps = std::max<long>(1, std::lround(duration / dt));
  const double h = duration / static_cast<double>(steps);
  const double sd = std::sqrt(h);
  double x = 0.0;
  for (long i = 1; i <= steps; ++i) {
    x += -m * h + sd * positive_rng.normal();
    p.times.push_back(i == steps ? duration : static_cast<double>(i) * h);
    p.values.push_back(x);
  }
  return p;
}

double value_at(const PathSample& path, double t) {
  require(!path.times.empty() && path.times.size() == path.values.size(), ErrorKind::Precondition,
          "value_at needs a 1D path");
  require(t >= path.times.front() && t <= path.times.back(), ErrorKind::Domain, "time outside the path");
  const auto it = std::lower_bound(path.times.begin(), path.times.end(), t);
  const auto k = static_cast<std::size_t>(it - path.times.begin());
  if (path.times[k] == t) return path.values[k];
  const double w = (t - path.times[k - 1]) / (path.times[k] - path.times[k - 1]);
  return path.values[k - 1] + w * (path.values[k] - path.values[k - 1]);
}

std::vector<double> conditioned_marginal(ConditionedMethod method, double m, double t, long samples, double dt,
                                         std::uint64_t seed, Exec exec) {
  require(m > 0.0 && t > 0.0 && samples >= 1, ErrorKind::Domain, "bad marginal parameters");
  require(dt > 0.0 && dt <= 1e-3, ErrorKind::Precondition, "marginal sampler needs 0 < dt <= 1e-3");
  std::vector<double> out(static_cast<std::size_t>(samples));
  const auto id = static_cast<std::uint64_t>(method);
  for_each_index(samples, exec, [&](long i) {
    Rng rng(seed, {kMarginalStream, id, static_cast<std::uint64_t>(i)});
    switch (method) {
      case ConditionedMethod::Williams: {
        std::vector<double> times;
        std::vector<double> values;
        conditioned_until(rng, m, t, dt, times, values);
        out[i] = values.back();
        break;
      }
      case ConditionedMethod::HTransform: {
        double x = 1e-6;
        double now = 0.0;
        while (now < t) {
          const double h = std::min({dt, 0.01 * x * x, t - now});
          x += m / std::tanh(m * x) * h + std::sqrt(h) * rng.normal();
          x = std::abs(x);
          now += h;
        }
        out[i] = x;
        break;
      }
      case ConditionedMethod::Rejection: {
        constexpr double kHorizon = 8.0;
        const long steps = std::lround(kHorizon / dt);
        const long mark = std::lround(t / dt);
        const double sd = std::sqrt(dt);
        for (;;) {
          double x = 0.0;
          double at_t = 0.0;
          bool ok = true;
          for (long j = 1; j <= steps; ++j) {
            x += m * dt + sd * rng.normal();
            if (x < 0.0) {
              ok = false;
              break;
            }
            if (j == mark) at_t = x;
          }
          if (ok) {
            out[i] = at_t;
            break;
          }
        }
        break;
      }
    }
  });
  return out;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  require(!a.empty() && !b.empty(), ErrorKind::Precondition, "KS needs non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

const char* to_string(ConeFunctional f) {
  switch (f) {
    case ConeFunctional::I:
      return "I";
    case ConeFunctional::ITilde:
      return "I_tilde";
    case ConeFunctional::Custom:
      return "custom";
  }
  return "?";
}

double cone_horizon(double gamma, double m) {
  require(gamma > 0.0 && m > 0.0, ErrorKind::Domain, "cone horizon needs gamma, m > 0");
  return std::max({2.0 * 6.9 / (gamma * m), 8.0 * 6.9 / (m * m), 4.0 * 6.9 / (gamma * m)});
}

MCEstimate estimate_cone_constant(const ConeOptions& o) {
  require(o.gamma > 0.0 && o.m > 0.0, ErrorKind::Domain, "cone constant needs gamma > 0 and m > 0");
  require(o.lambda_scale > 0.0, ErrorKind::Domain, "functional scale must be positive");
  require(o.dt > 0.0 && o.dt <= 1e-3, ErrorKind::Precondition, "cone estimator needs 0 < dt <= 1e-3");
  require(o.n_paths >= 2, ErrorKind::Precondition, "need at least two paths");
  require(o.horizon_factor > 0.0, ErrorKind::Precondition, "horizon factor must be positive");
  require(o.functional != ConeFunctional::Custom || static_cast<bool>(o.custom), ErrorKind::Precondition,
          "custom functional missing");

  const double gamma = o.gamma;
  const double m = o.m;
  const double lam = o.lambda_scale;
  const double horizon = cone_horizon(gamma, m) * o.horizon_factor;
  const long steps = std::max<long>(1, std::lround(horizon / o.dt));
  const double h = horizon / static_cast<double>(steps);
  const double sd = std::sqrt(h);

  auto g = [&](double beta) {
    const double y = lam * std::exp(gamma * beta);
    switch (o.functional) {
      case ConeFunctional::I:
        return y * std::exp(-y);
      case ConeFunctional::ITilde:
        return y <= 1.0 ? y : 0.0;
      case ConeFunctional::Custom:
        return o.custom(y);
    }
    return 0.0;
  };

  // Drifted side: stop once the remaining expected contribution,
  // lambda e^{-gamma L} / (gamma m - gamma^2 / 2), is below 1e-8.
  const double excess = gamma * m - 0.5 * gamma * gamma;
  double stop_level = -std::numeric_limits<double>::infinity();
  if (o.functional != ConeFunctional::Custom && excess > 0.0)
    stop_level = -(std::log(std::max(lam, 1.0) / (1e-8 * excess))) / gamma;
  // Conditioned side: the integrand is below 1e-20 once lambda e^{gamma beta}
  // exceeds 60 (I) or 1 (I_tilde), and the process never returns below its
  // last passage level.
  double cut = 0.0;
  if (o.functional == ConeFunctional::I) cut = std::max(std::log(60.0 / lam), 0.5) / gamma;
  if (o.functional == ConeFunctional::ITilde) cut = std::max(std::log(1.0 / lam), 0.5) / gamma;

  std::vector<double> per_path(static_cast<std::size_t>(o.n_paths));
  for_each_index(o.n_paths, o.exec, [&](long p) {
    Rng rng(o.seed, {kConeStream, static_cast<std::uint64_t>(p)});
    double positive = 0.0;
    double x = 0.0;
    double prev = g(0.0);
    for (long i = 1; i <= steps; ++i) {
      x += -m * h + sd * rng.normal();
      const double cur = g(x);
      positive += 0.5 * (prev + cur) * h;
      prev = cur;
      if (x <= stop_level) break;
    }

    double negative = 0.0;
    std::vector<double> xs;
    if (o.functional != ConeFunctional::Custom) {
      const double tau = first_passage(rng, m, cut, o.dt, xs);
      negative = integrate_piece(xs, tau, o.dt, cut, 0.0, std::max(0.0, tau - horizon), g);
    } else {
      const double piece_level = m * horizon + 3.0 * std::sqrt(horizon) + 1.0;
      double base_t = 0.0;
      double base_x = 0.0;
      while (base_t < horizon) {
        const double tau = first_passage(rng, m, piece_level, o.dt, xs);
        const double remaining = horizon - base_t;
        negative += integrate_piece(xs, tau, o.dt, piece_level, base_x, std::max(0.0, tau - remaining), g);
        base_t += tau;
        base_x += piece_level;
      }
    }
    per_path[p] = (positive + negative) / std::numbers::pi;
  });

  MCEstimate e = summarize(per_path);
  e.gamma = gamma;
  e.m = m;
  e.dt = o.dt;
  e.t_max = horizon;
  if (o.functional != ConeFunctional::Custom) e.target = 1.0 / (std::numbers::pi * gamma * m);
  return e;
}

double liouville_clock(const PathSample& path, const LiouvilleMeasure& measure, const GreenTable& green,
                       std::size_t first, std::size_t last) {
  require(measure.spec.same_grid(green.spec), ErrorKind::InvalidSpec, "measure and Green table grids differ");
  require(!path.points.empty() && path.points.size() == path.times.size(), ErrorKind::Precondition,
          "Liouville clock needs a 2D path");
  last = std::min(last, path.points.size() - 1);
  require(first <= last, ErrorKind::Precondition, "empty step range");
  const int n = measure.spec.n;
  const double a = measure.spec.spacing();
  const double inv_area = 1.0 / (a * a);
  CompensatedSum clock;
  for (std::size_t i = first; i < last; ++i) {
    const auto& q = path.points[i];
    if (!(q[0] > 0.0 && q[0] < 1.0 && q[1] > 0.0 && q[1] < 1.0)) continue;
    const int col = std::clamp(static_cast<int>(std::lround(q[0] / a)) - 1, 0, n - 1);
    const int row = std::clamp(static_cast<int>(std::lround(q[1] / a)) - 1, 0, n - 1);
    clock.add((path.times[i + 1] - path.times[i]) * measure.mass[measure.spec.index(row, col)] * inv_area);
  }
  return clock.value();
}

}  // namespace lqg
