#include "anls/symmetry.hpp"

#include <algorithm>

namespace anls {

std::vector<int> rearrangement_order(int n) {
  if (!is_pow2(n)) fail_validation("rearrangement needs a power-of-two line length");
  std::vector<int> pos;
  pos.reserve(n);
  int c = n / 2;
  pos.push_back(c);
  for (int d = 1; d < n / 2; ++d) {
    pos.push_back(c + d);  // ties right-first: right slot has the lower rank
    pos.push_back(c - d);
  }
  pos.push_back(0);  // antipodal point
  return pos;
}

namespace {

// Rearrange one line in place: gather values in placement order, stable-sort
// descending, scatter back. A line already bell-shaped maps to itself.
void rearrange_line(std::vector<double>& scratch, const std::vector<int>& order, double* base,
                    std::size_t stride) {
  const std::size_t n = order.size();
  for (std::size_t r = 0; r < n; ++r) scratch[r] = base[order[r] * stride];
  std::stable_sort(scratch.begin(), scratch.end(), std::greater<double>());
  for (std::size_t r = 0; r < n; ++r) base[order[r] * stride] = scratch[r];
}

}  // namespace

SymmetrizedField axial_symmetrize(const RealField& f) {
  f.grid.validate();
  if (!f.finite()) fail_validation("axial_symmetrize: non-finite input");
  const GridSpec& g = f.grid;

  SymmetrizedField out;
  out.field = f;
  double clipped_sq = 0.0;
  for (double& x : out.field.v) {
    if (x < 0.0) {
      clipped_sq += x * x;
      x = 0.0;
    }
  }
  out.clipped_l2 = std::sqrt(clipped_sq * g.cell());

  double max_abs = norm_linf(out.field);
  if (max_abs == 0.0) {
    out.certified = false;  // all-zero input: nothing to certify
    return out;
  }

  const std::vector<int> order_x = rearrangement_order(g.nx);
  const std::vector<int> order_y = rearrangement_order(g.ny);
  std::vector<double> scratch(std::max(g.nx, g.ny));

  // x-pass: every fixed-y row
  for (int j = 0; j < g.ny; ++j)
    rearrange_line(scratch, order_x, out.field.v.data() + j, static_cast<std::size_t>(g.ny));
  // y-pass: every fixed-x column
  for (int i = 0; i < g.nx; ++i)
    rearrange_line(scratch, order_y, out.field.v.data() + g.index(i, 0), 1);

  out.certified = is_bell_certified(out.field);
  return out;
}

bool is_bell_certified(const RealField& f, double tol) {
  const GridSpec& g = f.grid;
  double slack = tol * norm_linf(f);
  int cx = g.nx / 2, cy = g.ny / 2;

  for (int j = 0; j < g.ny; ++j) {
    for (int d = 1; d <= g.nx / 2; ++d) {
      double right = f.at(cx + d == g.nx ? 0 : cx + d, j);
      double left = f.at(cx - d, j);
      double prev_right = f.at(cx + d - 1, j);
      double prev_left = f.at(d == 1 ? cx : cx - d + 1, j);
      if (right > prev_right + slack || left > prev_left + slack) return false;  // monotone out
      if (std::abs(right - left) > slack && d < g.nx / 2) return false;          // even
    }
  }
  for (int i = 0; i < g.nx; ++i) {
    for (int d = 1; d <= g.ny / 2; ++d) {
      double up = f.at(i, cy + d == g.ny ? 0 : cy + d);
      double down = f.at(i, cy - d);
      double prev_up = f.at(i, cy + d - 1);
      double prev_down = f.at(i, d == 1 ? cy : cy - d + 1);
      if (up > prev_up + slack || down > prev_down + slack) return false;
      if (std::abs(up - down) > slack && d < g.ny / 2) return false;
    }
  }
  return true;
}

}  // namespace anls
