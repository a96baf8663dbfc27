#pragma once

#include <functional>
#include <vector>

#include "lqg/field.hpp"
#include "lqg/grid.hpp"

namespace lqg {

/// Discrete Liouville measure: per-cell masses a^{2 + gamma^2/2} e^{gamma h(v)}.
struct LiouvilleMeasure {
  GridSpec spec;
  double gamma = 0.0;
  std::vector<double> mass;
  double total = 0.0;
};

LiouvilleMeasure build_measure(const GridField& field, double gamma, Exec exec = Exec::Parallel);

/// Same measure with every mass multiplied by s (total rescaled accordingly).
LiouvilleMeasure scaled(const LiouvilleMeasure& measure, double s);

using CellPredicate = std::function<bool(const GridSpec&, std::size_t)>;

double region_mass(const LiouvilleMeasure& measure, const CellPredicate& region);

namespace regions {

inline bool all(const GridSpec&, std::size_t) { return true; }
inline bool left_half(const GridSpec& s, std::size_t v) { return s.col(v) < s.n / 2; }
inline bool right_half(const GridSpec& s, std::size_t v) { return s.col(v) >= s.n / 2; }
/// Lower-left quadrant: x and y both below 1/2.
inline bool quadrant(const GridSpec& s, std::size_t v) { return s.x(v) < 0.5 && s.y(v) < 0.5; }

}  // namespace regions

}  // namespace lqg
