#pragma once

#include <string>
#include <vector>

#include "logheat/errors.hpp"

namespace logheat {

// Piecewise-constant control g(t, z) >= 0 on [0, T] x atoms: a uniform time
// grid of `cells` cells, one value per (cell, atom).
class Control {
 public:
  Control(int cells, int atoms, double horizon, double value = 1.0);
  Control(int cells, int atoms, double horizon, std::vector<double> values);

  static Control constant(double value, int cells, int atoms, double horizon) {
    return Control(cells, atoms, horizon, value);
  }

  int cells() const { return cells_; }
  int atoms() const { return atoms_; }
  double horizon() const { return horizon_; }
  double cell_width() const { return horizon_ / static_cast<double>(cells_); }

  double value(int cell, int atom) const {
    return values_[static_cast<std::size_t>(cell) * atoms_ + atom];
  }
  double& value(int cell, int atom) {
    return values_[static_cast<std::size_t>(cell) * atoms_ + atom];
  }
  const std::vector<double>& values() const { return values_; }

  // g(t, z_atom); times beyond the horizon use the last cell.
  double at(double t, int atom) const;
  int cell_of(double t) const;
  double sup_atom(int atom) const;
  double sup() const;

  // True when every value lies in [1/bound, bound].
  bool in_bounded_class(double bound) const;

  void validate() const;

  // CSV matrix, rows = time cells, columns = atoms.
  std::string to_csv() const;
  static Control from_csv(const std::string& csv, double horizon);

 private:
  int cells_;
  int atoms_;
  double horizon_;
  std::vector<double> values_;
};

}  // namespace logheat
