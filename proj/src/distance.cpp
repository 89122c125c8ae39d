#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "sqz/domain.hpp"
#include "sqz/numeric.hpp"

namespace sqz {

namespace {

struct Cell {
  double t0, t1, lb;
  bool operator<(const Cell& o) const { return lb > o.lb; }
};

double gap(double v, double lo, double hi) {
  if (v < lo) return lo - v;
  if (v > hi) return v - hi;
  return 0.0;
}

}  // namespace

// Branch and bound over the boundary parameter t in the (|z|, |w|) quarter
// plane. Lower bounds come from interval enclosures of exp(t) and exp(h) on
// each cell; upper bounds from exact point evaluations.
double certified_boundary_distance(const BoundaryModel& m, double rz, double rw, int cells,
                                   double rel_tol) {
  if (!(m.t_hi > m.t_lo) || cells < 1) throw ValidationError("bad boundary parameter range");
  const double slack = 1e-13;

  auto lower = [&](double t0, double t1) {
    HeightBox hb = m.enclose(t0, t1);
    double x0 = std::exp(t0) * (1 - slack), x1 = std::exp(t1) * (1 + slack);
    double y0 = hb.lo == -kInf ? 0.0 : std::exp(hb.lo) * (1 - slack);
    double y1 = hb.hi == -kInf ? 0.0 : std::exp(hb.hi) * (1 + slack);
    double dx = gap(rz, x0, x1), dy = gap(rw, y0, y1);
    return std::hypot(dx, dy) * (1 - slack);
  };
  auto point = [&](double t) {
    double h = m.height(t);
    double y = h == -kInf ? 0.0 : std::exp(h);
    return std::hypot(std::exp(t) - rz, y - rw);
  };
  auto cap = [&](double t) {
    double h = m.height(t);
    double y = h == -kInf ? 0.0 : std::exp(h) * (1 + slack);
    double dx = std::fabs(std::exp(t) - rz);
    double dy = rw > y ? rw - y : 0.0;
    return std::hypot(dx, dy) * (1 - slack);
  };

  double best_lb = kInf, ub = kInf;
  if (m.left_cap) {
    double c = cap(m.t_lo);
    best_lb = std::min(best_lb, c);
    ub = std::min(ub, c);
  }
  if (m.right_cap) {
    double c = cap(m.t_hi);
    best_lb = std::min(best_lb, c);
    ub = std::min(ub, c);
  }

  std::priority_queue<Cell> heap;
  const double w = (m.t_hi - m.t_lo) / cells;
  for (int i = 0; i < cells; ++i) {
    double t0 = m.t_lo + i * w, t1 = i + 1 == cells ? m.t_hi : m.t_lo + (i + 1) * w;
    ub = std::min(ub, point(0.5 * (t0 + t1)));
    heap.push({t0, t1, lower(t0, t1)});
  }
  ub = std::min(ub, point(m.t_lo));
  ub = std::min(ub, point(m.t_hi));

  long iterations = 0;
  const long max_iterations = 4'000'000;
  double result = 0;
  while (true) {
    if (heap.empty()) {
      result = best_lb;
      break;
    }
    Cell c = heap.top();
    if (c.lb >= best_lb || c.lb >= ub * (1 - rel_tol) || ++iterations > max_iterations ||
        !(c.t1 - c.t0 > 1e-15 * std::max(1.0, std::fabs(c.t0)))) {
      result = std::min(c.lb, best_lb);
      break;
    }
    heap.pop();
    double mid = 0.5 * (c.t0 + c.t1);
    ub = std::min(ub, point(mid));
    heap.push({c.t0, mid, lower(c.t0, mid)});
    heap.push({mid, c.t1, lower(mid, c.t1)});
  }
  result = guard_lower(result);
  if (!(result > 0)) throw NumericalError("certified boundary distance is not positive; refine the grid");
  return result;
}

}  // namespace sqz
