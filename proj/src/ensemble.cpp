#include "tiltlab/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "tiltlab/oneline.hpp"

namespace tiltlab {

BoundaryScheme BoundaryScheme::zero() { return BoundaryScheme{}; }

BoundaryScheme BoundaryScheme::flat(double h) {
  if (!(h >= 0) || !std::isfinite(h)) throw InvalidArgument("flat boundary height must be >= 0");
  BoundaryScheme s;
  s.kind = Kind::flat;
  s.height = h;
  return s;
}

BoundaryScheme BoundaryScheme::slopes(SlopePair p) {
  if (!p.left.is_finite() || !p.right.is_finite())
    throw InvalidArgument("slope boundary needs finite slopes");
  BoundaryScheme s;
  s.kind = Kind::slopes;
  s.left_slope = p.left;
  s.right_slope = p.right;
  return s;
}

BoundaryScheme BoundaryScheme::top_line(double k, double b) {
  BoundaryScheme s;
  s.kind = Kind::top_line;
  s.k = k;
  s.b = b;
  return s;
}

BoundaryScheme BoundaryScheme::explicit_values(std::vector<double> l, std::vector<double> r) {
  BoundaryScheme s;
  s.kind = Kind::explicit_values;
  s.left = std::move(l);
  s.right = std::move(r);
  return s;
}

std::pair<std::vector<double>, std::vector<double>> boundary_vectors(const BoundaryScheme& sc,
                                                                     double T, std::size_t n,
                                                                     double a, double eps) {
  if (n == 0) throw InvalidArgument("need at least one line");
  if (!(T > 0)) throw InvalidArgument("half-width must be positive");
  std::vector<double> l(n, 0.0), r(n, 0.0);
  switch (sc.kind) {
    case BoundaryScheme::Kind::zero: break;
    case BoundaryScheme::Kind::flat:
      std::fill(l.begin(), l.end(), sc.height);
      std::fill(r.begin(), r.end(), sc.height);
      break;
    case BoundaryScheme::Kind::slopes:
      if (!sc.left_slope.is_finite() || !sc.right_slope.is_finite())
        throw InvalidArgument("slope boundary needs finite slopes; use the zero scheme instead");
      std::fill(l.begin(), l.end(), std::max(0.0, a / 2 * T * T + sc.left_slope.value() * T));
      std::fill(r.begin(), r.end(), std::max(0.0, a / 2 * T * T + sc.right_slope.value() * T));
      break;
    case BoundaryScheme::Kind::top_line:
      l[0] = r[0] = std::max(0.0, a / 2 * T * T - 2 * sc.k * T - std::pow(T, sc.b));
      break;
    case BoundaryScheme::Kind::explicit_values:
      if (sc.left.size() != n || sc.right.size() != n)
        throw InvalidArgument("explicit boundary length must equal the line count");
      for (std::size_t i = 0; i < n; ++i) {
        if (!(sc.left[i] >= 0) || !(sc.right[i] >= 0))
          throw InvalidArgument("explicit boundary values must be nonnegative");
        if (i > 0 && (sc.left[i] > sc.left[i - 1] || sc.right[i] > sc.right[i - 1]))
          throw InvalidArgument("explicit boundary values must be weakly decreasing");
      }
      l = sc.left;
      r = sc.right;
      break;
  }
  for (auto* v : {&l, &r})
    for (double& x : *v) x = std::max(x, eps);
  return {l, r};
}

namespace {

std::vector<double> coefficients(const TiltParams& p) {
  std::vector<double> c(p.lines);
  for (std::size_t i = 0; i < p.lines; ++i) c[i] = p.coefficient(i);
  return c;
}

std::vector<double> wall_values(const TimeGrid& g, double wall, double shift) {
  return std::vector<double>(g.points(), wall + shift * std::sqrt(g.dt()));
}

}  // namespace

GibbsChain make_lambda_chain(const TimeGrid& g, const TiltParams& params,
                             const BoundaryScheme& scheme, const McmcConfig& cfg, double wall) {
  const double T = 0.5 * (g.right() - g.left());
  if ((scheme.kind == BoundaryScheme::Kind::slopes ||
       scheme.kind == BoundaryScheme::Kind::top_line) &&
      std::fabs(g.left() + g.right()) > 1e-9 * T)
    throw InvalidArgument("this boundary scheme needs a symmetric grid");
  auto [l, r] = boundary_vectors(scheme, T, params.lines, params.strength,
                                 wall + zero_boundary_value(g));
  auto c = coefficients(params);
  auto lo = wall_values(g, wall, cfg.monitor_shift);
  Ensemble start = GibbsChain::default_start(g, c, l, r, lo, cfg.monitor_shift);
  return GibbsChain(std::move(start), std::move(c), std::move(lo), {}, cfg);
}

Ensemble sample_lambda_le(const TimeGrid& g, const TiltParams& params,
                          const BoundaryScheme& scheme, const McmcConfig& cfg, RngStream& rng) {
  GibbsChain chain = make_lambda_chain(g, params, scheme, cfg);
  const std::size_t total = cfg.burn_in_for(g) + cfg.sweeps;
  for (std::size_t s = 0; s < total; ++s) chain.sweep(rng);
  return chain.state();
}

bool dominates(const Ensemble& up, const Ensemble& lo) {
  if (up.lines() != lo.lines() || !(up.grid() == lo.grid())) return false;
  for (std::size_t i = 0; i < up.lines(); ++i)
    for (std::size_t j = 0; j < up.grid().points(); ++j)
      if (up.at(i, j) < lo.at(i, j)) return false;
  return true;
}

namespace {

SiteLaw law_at(const Ensemble& e, const TiltParams& p, double wall_eff, double pair_off,
               std::size_t i, std::size_t j) {
  const double dt = e.grid().dt();
  const auto x = e.line(i);
  const double lo = i + 1 < e.lines() ? e.at(i + 1, j) + pair_off : wall_eff;
  const double hi = i > 0 ? e.at(i - 1, j) - pair_off : INFINITY;
  return SiteLaw{0.5 * (x[j - 1] + x[j + 1]) - p.coefficient(i) / 2 * dt * dt, std::sqrt(dt / 2),
                 lo, hi};
}

}  // namespace

void monotone_coupled_sweep(CoupledPair& pair, const ChainSetup& up, const ChainSetup& low,
                            const McmcConfig& cfg) {
  cfg.validate();
  Ensemble& U = pair.upper;
  Ensemble& D = pair.lower;
  if (!(U.grid() == D.grid()) || U.lines() != D.lines() || U.lines() != up.params.lines ||
      D.lines() != low.params.lines)
    throw InvalidArgument("coupled chains must share grid and line count");
  const TimeGrid& g = U.grid();
  const double pair_off = cfg.monitor_shift * std::sqrt(2 * g.dt());
  const double wu = up.wall + cfg.monitor_shift * std::sqrt(g.dt());
  const double wd = low.wall + cfg.monitor_shift * std::sqrt(g.dt());
  for (std::size_t i = 0; i < U.lines(); ++i) {
    auto xu = U.line(i);
    auto xd = D.line(i);
    for (std::size_t j = 1; j + 1 < g.points(); ++j) {
      const double u = pair.rng.uniform();
      SiteLaw a = law_at(U, up.params, wu, pair_off, i, j);
      SiteLaw b = law_at(D, low.params, wd, pair_off, i, j);
      if (!(a.hi > a.lo) || !(b.hi > b.lo)) throw OrderingViolated("empty slot in coupled sweep");
      xu[j] = truncated_normal_inverse(a.mean, a.sd, a.lo, a.hi, u);
      xd[j] = truncated_normal_inverse(b.mean, b.sd, b.lo, b.hi, u);
      if (xd[j] > xu[j]) {
        if (xd[j] - xu[j] > 1e-9 * (1.0 + std::fabs(xu[j])))
          throw OrderingViolated("coupled chains crossed");
        xd[j] = xu[j];
      }
    }
  }
}

void monotone_coupled_sweep(CoupledPair& pair, const TiltParams& params, const McmcConfig& cfg) {
  monotone_coupled_sweep(pair, ChainSetup{params}, ChainSetup{params}, cfg);
}

Ensemble resample_stopping_domain(const Ensemble& ens, const TiltParams& params,
                                  std::size_t n_top, double left, double right,
                                  const McmcConfig& cfg, RngStream& rng, double wall) {
  if (n_top > ens.lines()) throw InvalidArgument("n_top exceeds the line count");
  if (params.lines != ens.lines()) throw InvalidArgument("params line count mismatch");
  const TimeGrid& g = ens.grid();
  const std::size_t il = g.index_of(left), ir = g.index_of(right);
  if (ir < il + 2) throw DomainTooSmall("stopping domain needs at least three grid points");
  if (n_top == 0) return ens;
  TimeGrid sub = g.sub(il, ir);
  std::vector<std::vector<double>> top(n_top);
  for (std::size_t i = 0; i < n_top; ++i) {
    auto x = ens.line(i);
    top[i].assign(x.begin() + il, x.begin() + ir + 1);
  }
  std::vector<double> c(n_top);
  for (std::size_t i = 0; i < n_top; ++i) c[i] = params.coefficient(i);
  const double wall_eff = wall + cfg.monitor_shift * std::sqrt(g.dt());
  std::vector<double> lo(ir - il + 1, wall_eff);
  if (n_top < ens.lines()) {
    const double off = cfg.monitor_shift * std::sqrt(2 * g.dt());
    for (std::size_t j = il; j <= ir; ++j) lo[j - il] = std::max(wall_eff, ens.at(n_top, j) + off);
  }
  GibbsChain chain(Ensemble(sub, std::move(top)), std::move(c), std::move(lo), {}, cfg);
  for (std::size_t s = 0; s < cfg.sweeps; ++s) chain.sweep(rng);
  auto lines = ens.data();
  for (std::size_t i = 0; i < n_top; ++i) {
    auto x = chain.state().line(i);
    std::copy(x.begin(), x.end(), lines[i].begin() + il);
  }
  return Ensemble(g, std::move(lines));
}

Ensemble scaling_transform(const Ensemble& ens, double lambda) {
  if (!(lambda > 0)) throw InvalidArgument("scale factor must be positive");
  const double s = std::cbrt(lambda);
  const TimeGrid& g = ens.grid();
  auto lines = ens.data();
  for (auto& l : lines)
    for (double& x : l) x /= s;
  return Ensemble(TimeGrid(g.left() / (s * s), g.right() / (s * s), g.points()), std::move(lines));
}

void for_each_chain(std::size_t n_chains, std::size_t threads,
                    const std::function<void(std::size_t)>& job) {
  threads = std::max<std::size_t>(1, std::min(threads, n_chains));
  if (threads == 1) {
    for (std::size_t c = 0; c < n_chains; ++c) job(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (std::size_t c; (c = next.fetch_add(1)) < n_chains;) {
        try {
          job(c);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace tiltlab
