#include "tiltlab/core.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace tiltlab {

TimeGrid::TimeGrid(double left, double right, std::size_t points)
    : left_(left), right_(right), points_(points) {
  if (!std::isfinite(left) || !std::isfinite(right) || !(right > left))
    throw InvalidArgument("grid: need finite left < right");
  if (points < 2) throw InvalidArgument("grid: need at least 2 points");
  dt_ = (right - left) / static_cast<double>(points - 1);
}

std::size_t TimeGrid::index_of(double t) const {
  double r = (t - left_) / dt_;
  if (!(r > -0.5) || !(r < static_cast<double>(points_) - 0.5))
    throw IndexOutOfRange("time outside grid");
  return static_cast<std::size_t>(std::llround(r));
}

TimeGrid TimeGrid::sub(std::size_t first, std::size_t last) const {
  if (last >= points_ || last <= first) throw IndexOutOfRange("bad sub-grid");
  TimeGrid g = *this;
  g.left_ = time(first);
  g.right_ = time(last);
  g.points_ = last - first + 1;
  return g;
}

Path::Path(TimeGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.points()) throw InvalidArgument("path length does not match grid");
  for (double x : values)
    if (!std::isfinite(x)) throw InvalidArgument("path has non-finite value");
}

double trapezoid_area(std::span<const double> v, double dt) {
  if (v.size() < 2) return 0.0;
  double s = 0.5 * (v.front() + v.back());
  for (std::size_t i = 1; i + 1 < v.size(); ++i) s += v[i];
  return s * dt;
}

double trapezoid_area(const Path& p) { return trapezoid_area(p.values, p.grid.dt()); }

Ensemble::Ensemble(TimeGrid g, std::vector<std::vector<double>> lines)
    : grid_(g), lines_(std::move(lines)) {
  if (lines_.empty()) throw InvalidArgument("ensemble needs at least one line");
  for (const auto& l : lines_) {
    if (l.size() != grid_.points()) throw InvalidArgument("line length does not match grid");
    for (double x : l)
      if (!std::isfinite(x)) throw InvalidArgument("ensemble has non-finite value");
  }
}

std::span<const double> Ensemble::line(std::size_t i) const {
  if (i >= lines_.size()) throw IndexOutOfRange("line index");
  return lines_[i];
}
std::span<double> Ensemble::line(std::size_t i) {
  if (i >= lines_.size()) throw IndexOutOfRange("line index");
  return lines_[i];
}

Path Ensemble::path(std::size_t i) const {
  if (i >= lines_.size()) throw IndexOutOfRange("line index");
  return Path(grid_, lines_[i]);
}

bool Ensemble::ordered(bool zero_floor) const {
  const std::size_t m = grid_.points();
  for (std::size_t k = 0; k < lines_.size(); ++k) {
    for (std::size_t j = 0; j < m; ++j) {
      bool interior = j > 0 && j + 1 < m;
      double lo = k + 1 < lines_.size() ? lines_[k + 1][j] : (zero_floor ? 0.0 : -INFINITY);
      double x = lines_[k][j];
      if (interior ? !(x > lo) : !(x >= lo)) return false;
    }
  }
  return true;
}

ExtendedReal ExtendedReal::finite(double v) {
  if (!std::isfinite(v)) throw InvalidArgument("extended real: value must be finite");
  return ExtendedReal(false, v);
}

double ExtendedReal::value() const {
  if (neg_inf_) throw InvalidArgument("extended real: value of -inf");
  return v_;
}

ExtendedReal ExtendedReal::operator+(const ExtendedReal& o) const {
  if (neg_inf_ || o.neg_inf_) return neg_infinity();
  return ExtendedReal(false, v_ + o.v_);
}

SlopePair::SlopePair(ExtendedReal l, ExtendedReal r) : left(l), right(r) {
  ExtendedReal s = l + r;
  if (s.is_finite() && !(s.value() < 0)) throw InvalidArgument("slopes: need left + right < 0");
}

SlopePair shift_slopes(const SlopePair& p, double h) {
  return SlopePair(p.left + ExtendedReal::finite(2 * h), p.right + ExtendedReal::finite(-2 * h));
}

TiltParams::TiltParams(double a, double lam, std::size_t n) : strength(a), ratio(lam), lines(n) {
  std::string bad;
  if (!(a > 0) || !std::isfinite(a)) bad += " strength must be positive;";
  if (!(lam > 1) || !std::isfinite(lam)) bad += " ratio must exceed 1;";
  if (n < 1) bad += " lines must be at least 1;";
  if (!bad.empty()) throw InvalidArgument("tilt params:" + bad);
}

double TiltParams::coefficient(std::size_t i) const {
  if (i >= lines) throw IndexOutOfRange("line index");
  return strength * std::pow(ratio, static_cast<double>(i));
}

void write_csv(std::ostream& os, const Ensemble& e) {
  os << "t";
  for (std::size_t k = 0; k < e.lines(); ++k) os << ",x" << (k + 1);
  os << '\n';
  os << std::setprecision(17);
  for (std::size_t j = 0; j < e.grid().points(); ++j) {
    os << (j + 1 == e.grid().points() ? e.grid().right() : e.grid().time(j));
    for (std::size_t k = 0; k < e.lines(); ++k) os << ',' << e.at(k, j);
    os << '\n';
  }
}

Ensemble read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InvalidArgument("csv: empty input");
  std::size_t n = 0;
  for (char c : line) n += c == ',';
  if (n == 0) throw InvalidArgument("csv: no value columns");
  std::vector<double> ts;
  std::vector<std::vector<double>> lines(n);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    ts.push_back(std::stod(cell));
    for (std::size_t k = 0; k < n; ++k) {
      if (!std::getline(ss, cell, ',')) throw InvalidArgument("csv: short row");
      lines[k].push_back(std::stod(cell));
    }
  }
  if (ts.size() < 2) throw InvalidArgument("csv: need at least 2 rows");
  return Ensemble(TimeGrid(ts.front(), ts.back(), ts.size()), std::move(lines));
}

}  // namespace tiltlab
