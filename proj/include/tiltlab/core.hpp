#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tiltlab {

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct IndexOutOfRange : std::out_of_range {
  using std::out_of_range::out_of_range;
};
struct AttemptsExhausted : std::runtime_error {
  AttemptsExhausted(const std::string& what, std::size_t n)
      : std::runtime_error(what), attempts(n) {}
  std::size_t attempts;
};
struct OrderingViolated : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainTooSmall : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct EmptySample : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Uniform grid on [left, right]; time(i) = left + i*dt.
class TimeGrid {
 public:
  TimeGrid(double left, double right, std::size_t points);

  double left() const { return left_; }
  double right() const { return right_; }
  std::size_t points() const { return points_; }
  double dt() const { return dt_; }
  double time(std::size_t i) const { return left_ + static_cast<double>(i) * dt_; }
  // nearest grid index
  std::size_t index_of(double t) const;
  TimeGrid sub(std::size_t first, std::size_t last) const;

  bool operator==(const TimeGrid& o) const = default;

 private:
  double left_;
  double right_;
  std::size_t points_;
  double dt_;
};

struct Path {
  Path(TimeGrid g, std::vector<double> v);
  TimeGrid grid;
  std::vector<double> values;

  double operator[](std::size_t i) const { return values[i]; }
  std::size_t size() const { return values.size(); }
};

double trapezoid_area(const Path& p);
double trapezoid_area(std::span<const double> v, double dt);

class Ensemble {
 public:
  Ensemble(TimeGrid g, std::vector<std::vector<double>> lines);

  const TimeGrid& grid() const { return grid_; }
  std::size_t lines() const { return lines_.size(); }
  std::span<const double> line(std::size_t i) const;
  std::span<double> line(std::size_t i);
  double at(std::size_t line, std::size_t idx) const { return lines_[line][idx]; }
  Path path(std::size_t i) const;
  const std::vector<std::vector<double>>& data() const { return lines_; }

  // strict at interior points, weak at the endpoints
  bool ordered(bool zero_floor = true) const;

  bool operator==(const Ensemble& o) const = default;

 private:
  TimeGrid grid_;
  std::vector<std::vector<double>> lines_;
};

// Real number or minus infinity.
class ExtendedReal {
 public:
  static ExtendedReal finite(double v);
  static ExtendedReal neg_infinity() { return ExtendedReal(true, 0.0); }

  bool is_finite() const { return !neg_inf_; }
  double value() const;
  ExtendedReal operator+(const ExtendedReal& o) const;
  bool operator==(const ExtendedReal& o) const = default;

 private:
  ExtendedReal(bool ni, double v) : neg_inf_(ni), v_(v) {}
  bool neg_inf_;
  double v_;
};

struct SlopePair {
  SlopePair(ExtendedReal l, ExtendedReal r);
  ExtendedReal left;
  ExtendedReal right;
};

// (L + 2h, R - 2h), minus infinity absorbing
SlopePair shift_slopes(const SlopePair& p, double h);

struct TiltParams {
  TiltParams(double strength, double ratio, std::size_t lines);
  double strength;
  double ratio;
  std::size_t lines;
  // strength of line i, 0-based
  double coefficient(std::size_t i) const;
};

void write_csv(std::ostream& os, const Ensemble& e);
Ensemble read_csv(std::istream& is);

}  // namespace tiltlab
