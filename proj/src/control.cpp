#include "logheat/control.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace logheat {

Control::Control(int cells, int atoms, double horizon, double value)
    : cells_(cells), atoms_(atoms), horizon_(horizon),
      values_(static_cast<std::size_t>(cells) * static_cast<std::size_t>(atoms),
              value) {
  validate();
}

Control::Control(int cells, int atoms, double horizon, std::vector<double> values)
    : cells_(cells), atoms_(atoms), horizon_(horizon), values_(std::move(values)) {
  validate();
}

void Control::validate() const {
  if (cells_ < 1) throw ConfigurationError("control: need at least one time cell");
  if (atoms_ < 1) throw ConfigurationError("control: need at least one atom");
  if (!(horizon_ > 0.0)) throw ConfigurationError("control: horizon must be positive");
  if (values_.size() != static_cast<std::size_t>(cells_) * atoms_)
    throw ConfigurationError("control: value table does not match cells x atoms");
  for (double v : values_)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ConfigurationError("control: values must be nonnegative and finite");
}

int Control::cell_of(double t) const {
  int c = static_cast<int>(std::floor(t / cell_width()));
  return std::clamp(c, 0, cells_ - 1);
}

double Control::at(double t, int atom) const { return value(cell_of(t), atom); }

double Control::sup_atom(int atom) const {
  double s = 0.0;
  for (int c = 0; c < cells_; ++c) s = std::max(s, value(c, atom));
  return s;
}

double Control::sup() const {
  return *std::max_element(values_.begin(), values_.end());
}

bool Control::in_bounded_class(double bound) const {
  if (!(bound >= 1.0)) return false;
  for (double v : values_)
    if (v < 1.0 / bound || v > bound) return false;
  return true;
}

std::string Control::to_csv() const {
  std::ostringstream os;
  char buf[32];
  for (int c = 0; c < cells_; ++c) {
    for (int i = 0; i < atoms_; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", value(c, i));
      os << buf << (i + 1 < atoms_ ? "," : "");
    }
    os << "\n";
  }
  return os.str();
}

Control Control::from_csv(const std::string& csv, double horizon) {
  std::vector<double> values;
  int atoms = -1, cells = 0;
  std::istringstream is(csv);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    int count = 0;
    while (std::getline(ls, cell, ',')) {
      values.push_back(std::stod(cell));
      ++count;
    }
    if (atoms < 0) atoms = count;
    else if (count != atoms)
      throw ConfigurationError("control csv: ragged rows");
    ++cells;
  }
  if (cells == 0) throw ConfigurationError("control csv: empty");
  return Control(cells, atoms, horizon, std::move(values));
}

}  // namespace logheat
