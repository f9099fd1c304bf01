#include "wpr/algorithms.hpp"

#include "wpr/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <vector>

namespace wpr {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

/// Scalar cache for the joint objective as a function of rho at a fixed
/// beamformer, valid under equal noise variances. Every evaluation is
/// O(1) once the quadratic forms of f are precomputed.
struct RhoObjective {
  double ps, pd, s2;
  double nsr, ndr, cross;
  double nr;
  double b0q;  ///< |h_rd^H F h_sr|^2
  double wq;   ///< ||F^H h_rd||^2

  RhoObjective(const VectorXcd& f, const SystemParams& p,
               const ChannelSet& ch)
      : ps(p.p_s), pd(p.p_d), s2(p.sigma_r2),
        nsr(ch.h_sr.squaredNorm()), ndr(ch.h_dr.squaredNorm()),
        cross(std::norm(cplx(ch.h_dr.dot(ch.h_sr)))),
        nr(static_cast<double>(p.n_r)) {
    const MatrixXcd fm =
        Eigen::Map<const MatrixXcd>(f.data(), p.n_r, p.n_r);
    b0q = std::norm(cplx(ch.h_rd.dot(fm * ch.h_sr)));
    wq = (fm.adjoint() * ch.h_rd).squaredNorm();
  }

  double f1(double rho) const {
    const double den = (2.0 - rho) * s2 * wq + s2;
    return 1.0 + (1.0 - rho) * ps * b0q / den;
  }

  void t_parts(double rho, double& m, double& n, double& t) const {
    const double rb = 1.0 - rho;
    const double d = (2.0 - rho) * s2 + rb * pd * ndr;
    const double c = rb / ((2.0 - rho) * s2);
    m = nsr + c * pd * (ndr * nsr - cross);
    n = rb * ps / d;
    t = 1.0 + m * n;
  }

  double value(double rho) const {
    double m, n, t;
    t_parts(rho, m, n, t);
    return f1(rho) / t;
  }

  DerivativeParts derivative(double rho) const {
    DerivativeParts out;
    const double den = (2.0 - rho) * s2 * wq + s2;
    out.f1 = 1.0 + (1.0 - rho) * ps * b0q / den;
    // Numerator and denominator both shrink linearly in rho; the quotient
    // rule collapses to a single negative term.
    out.df1 = -ps * b0q * s2 * (wq + 1.0) / (den * den);

    t_parts(rho, out.m, out.n, out.t);
    const double d = (2.0 - rho) * s2 + (1.0 - rho) * pd * ndr;
    const double dm =
        -pd * (ndr * nsr - cross) / ((2.0 - rho) * (2.0 - rho) * s2);
    const double dn = -ps * s2 / (d * d);
    out.dt = dm * out.n + out.m * dn;
    out.f2 = 1.0 / out.t;
    out.df2 = -out.dt / (out.t * out.t);
    out.df = out.df1 * out.f2 + out.f1 * out.df2;
    return out;
  }
};

double bisect_root(const std::function<double(double)>& fn, double lo,
                   double hi, double flo) {
  for (int i = 0; i < 80 && hi - lo > 1e-10; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = fn(mid);
    if (fmid == 0.0) return mid;
    if ((flo < 0.0) != (fmid < 0.0)) {
      hi = mid;
    } else {
      lo = mid;
      flo = fmid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Scan fn' on [lo, hi], bisect every sign change, and return all interior
/// stationary points.
std::vector<double> derivative_roots(const std::function<double(double)>& dfn,
                                     double lo, double hi, int n_scan) {
  std::vector<double> roots;
  double x_prev = lo, d_prev = dfn(lo);
  for (int i = 1; i < n_scan; ++i) {
    const double x = lo + (hi - lo) * i / (n_scan - 1);
    const double d = dfn(x);
    if (d == 0.0) {
      roots.push_back(x);
    } else if ((d_prev < 0.0) != (d < 0.0)) {
      roots.push_back(bisect_root(dfn, x_prev, x, d_prev));
    }
    x_prev = x;
    d_prev = d;
  }
  return roots;
}

InnerSolution solve_inner(const InnerProblem& ip, InnerRoute route,
                          double sdp_tol) {
  return route == InnerRoute::closed_form ? solve_inner_closed(ip)
                                          : solve_inner_sdr(ip, sdp_tol);
}

}  // namespace

DerivativeParts objective_drho(PsRatio rho, const VectorXcd& f,
                               const SystemParams& p, const ChannelSet& ch) {
  p.validate();
  ch.validate(p.n_r);
  if (!p.equal_noise())
    throw std::invalid_argument(
        "objective_drho: requires equal noise variances");
  if (!(rho.value() > 0.0 && rho.value() < 1.0))
    throw std::invalid_argument(
        "objective_drho: requires an interior split 0 < rho < 1");
  return RhoObjective(f, p, ch).derivative(rho.value());
}

double feasible_rho_min(const VectorXcd& f, const SystemParams& p,
                        const ChannelSet& ch) {
  const MatrixXcd fm = Eigen::Map<const MatrixXcd>(f.data(), p.n_r, p.n_r);
  const double fn2 = fm.squaredNorm();
  if (fn2 == 0.0) return 0.0;
  const double a = p.p_s * (fm * ch.h_sr).squaredNorm() +
                   p.p_d * (fm * ch.h_dr).squaredNorm() + p.sigma_r2 * fn2;
  const double b = p.sigma_c2 * fn2;
  const double c = p.eta * (p.p_s * ch.h_sr.squaredNorm() +
                            p.p_d * ch.h_dr.squaredNorm() +
                            p.sigma_r2 * static_cast<double>(p.n_r));
  return (a + b) / (a + c);
}

PsRatio rho_subproblem(const VectorXcd& f, const SystemParams& p,
                       const ChannelSet& ch) {
  p.validate();
  ch.validate(p.n_r);
  if (!p.equal_noise())
    throw std::invalid_argument(
        "rho_subproblem: requires equal noise variances");

  constexpr double kEdge = 1e-9;
  const double rho_min = feasible_rho_min(f, p, ch);
  const double lo = std::min(std::max(rho_min, kEdge), 1.0);
  const double hi = 1.0 - kEdge;

  const RhoObjective cache(f, p, ch);
  double best_rho = 1.0;
  double best_val = cache.value(1.0);  // split fully to harvesting
  auto consider = [&](double rho) {
    const double v = cache.value(rho);
    if (v > best_val) {
      best_val = v;
      best_rho = rho;
    }
  };

  if (lo < hi) {
    auto dfn = [&](double x) { return cache.derivative(x).df; };
    for (double r : derivative_roots(dfn, lo, hi, 2000)) consider(r);
    consider(lo);
    consider(hi);
  } else if (rho_min <= 1.0) {
    consider(std::max(rho_min, 0.0));
  }
  return PsRatio(best_rho);
}

SolveResult goa(const SystemParams& p, const ChannelSet& ch, double epsilon,
                InnerRoute route, double sdp_tol) {
  p.validate();
  ch.validate(p.n_r);
  if (!(epsilon >= 1e-6 && epsilon <= 0.1))
    throw std::invalid_argument("goa: epsilon must lie in [1e-6, 0.1]");
  const auto t0 = clock_type::now();

  const long m = std::lround(1.0 / epsilon);
  const int n2 = p.n_r * p.n_r;

  // Endpoint scores need no inner solve: both splits force f = 0, where
  // the objective is 1/t(0) at rho = 0 and exactly 1 at rho = 1.
  double best_val = 1.0;
  double best_rho = 1.0;
  VectorXcd best_f = VectorXcd::Zero(n2);
  {
    const double v0 = 1.0 / relay_capacity_factor(PsRatio(0.0), p, ch);
    if (v0 > best_val) {
      best_val = v0;
      best_rho = 0.0;
    }
  }

  int failed = 0;
  for (long j = 1; j < m; ++j) {
    const double rho = static_cast<double>(j) / static_cast<double>(m);
    const InnerProblem ip = make_inner_problem(PsRatio(rho), p, ch);
    InnerSolution sol;
    try {
      sol = solve_inner(ip, route, sdp_tol);
    } catch (const SolverError&) {
      ++failed;
      continue;
    }
    const double val =
        (1.0 + sol.ratio) / relay_capacity_factor(PsRatio(rho), p, ch);
    if (val > best_val) {
      best_val = val;
      best_rho = rho;
      best_f = sol.f;
    }
  }

  SolveResult res;
  res.rho_star = PsRatio(best_rho);
  res.f_star = Beamformer::from_vec(best_f, p.n_r);
  res.objective = best_val;
  res.secrecy_rate = 0.5 * std::max(0.0, std::log2(best_val));
  res.relay_power_mw = relay_power_used(res.f_star, res.rho_star, p, ch);
  res.diagnostics.grid_points = static_cast<int>(m) + 1;
  res.diagnostics.failed_grid_points = failed;
  res.diagnostics.iterations = static_cast<int>(m) + 1 - failed;
  res.diagnostics.route = route == InnerRoute::closed_form ? "closed" : "sdr";
  res.diagnostics.wall_time_s = seconds_since(t0);
  return res;
}

SolveResult loa(const SystemParams& p, const ChannelSet& ch,
                const LoaConfig& cfg) {
  p.validate();
  ch.validate(p.n_r);
  if (!p.equal_noise())
    throw std::invalid_argument("loa: requires equal noise variances");
  if (!(cfg.epsilon > 0.0))
    throw std::invalid_argument("loa: epsilon must be positive");
  if (cfg.j_restarts < 1 || cfg.max_iters < 1)
    throw std::invalid_argument("loa: restarts and iterations must be >= 1");
  const auto t0 = clock_type::now();
  const int n2 = p.n_r * p.n_r;

  SolveResult best;
  best.objective = -1.0;
  double min_half_delta = 0.0;
  double min_iter_delta = 0.0;

  for (int restart = 0; restart < cfg.j_restarts; ++restart) {
    Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(restart)));

    double rho_k = 0.0;
    VectorXcd f_k(n2);
    bool started = false;
    if (restart == 0 && cfg.initial_point) {
      rho_k = cfg.initial_point->first;
      f_k = cfg.initial_point->second;
      started = true;
    } else if (restart == 0) {
      // Deterministic first restart: probe a coarse split grid with exact
      // inner solves and climb from the best cell, so the returned point
      // is never worse than the best coarse-grid pair.
      double best_v = -1.0;
      for (int i = 0; i < 10; ++i) {
        const double rho = 0.05 + 0.1 * i;
        try {
          const InnerSolution sol =
              solve_inner(make_inner_problem(PsRatio(rho), p, ch), cfg.route,
                          cfg.sdp_tol);
          const double v = objective(PsRatio(rho), sol.f, p, ch).value;
          if (v > best_v) {
            best_v = v;
            rho_k = rho;
            f_k = sol.f;
            started = true;
          }
        } catch (const SolverError&) {
          continue;
        }
      }
    }
    if (!started) {
      rho_k = rng.uniform(0.05, 0.95);
      // Scale a random direction onto the harvested-power boundary;
      // shrink and retry on the degenerate draws.
      for (int attempt = 0; attempt < 10; ++attempt) {
        for (int i = 0; i < n2; ++i) f_k(i) = rng.cnormal(1.0);
        const double peh = harvested_power(PsRatio(rho_k), p, ch);
        const LiftedMatrices lm = lifted_matrices(PsRatio(rho_k), p, ch);
        const double used = herm_quad(lm.T, f_k);
        if (peh > 0.0 && used > 0.0) {
          f_k *= std::sqrt(peh / used);
          break;
        }
        f_k *= 0.5;
      }
    }

    double v_k = objective(PsRatio(rho_k), f_k, p, ch).value;
    int iters = 0;
    for (int k = 0; k < cfg.max_iters; ++k) {
      ++iters;
      // Exact beamformer update at the current split. Running this block
      // first means the split update below never acts on an unoptimized
      // beamformer (whose best feasible split can degenerate to 1, an
      // absorbing point since tight beamformers only let the split grow).
      VectorXcd f_next = f_k;
      double v_half = v_k;
      try {
        const InnerProblem ip = make_inner_problem(PsRatio(rho_k), p, ch);
        const InnerSolution sol = solve_inner(ip, cfg.route, cfg.sdp_tol);
        const double v_cand = objective(PsRatio(rho_k), sol.f, p, ch).value;
        if (v_cand >= v_k) {
          f_next = sol.f;
          v_half = v_cand;
        } else {
          min_half_delta = std::min(min_half_delta, v_cand - v_k);
        }
      } catch (const SolverError&) {
        // keep the previous beamformer for this sweep
      }

      // Split update at the new beamformer.
      double rho_next = rho_subproblem(f_next, p, ch).value();
      double v_next = objective(PsRatio(rho_next), f_next, p, ch).value;
      if (v_next < v_half) {
        min_half_delta = std::min(min_half_delta, v_next - v_half);
        rho_next = rho_k;
        v_next = v_half;
      }

      rho_k = rho_next;
      f_k = f_next;
      min_iter_delta = std::min(min_iter_delta, v_next - v_k);
      const double rel =
          std::abs(v_next - v_k) / std::max(std::abs(v_next), 1e-300);
      v_k = v_next;
      if (rel <= cfg.epsilon) break;
    }

    if (v_k > best.objective) {
      best.rho_star = PsRatio(rho_k);
      best.f_star = Beamformer::from_vec(f_k, p.n_r);
      best.objective = v_k;
      best.diagnostics.iterations = iters;
    }
  }

  best.secrecy_rate = 0.5 * std::max(0.0, std::log2(best.objective));
  best.relay_power_mw = relay_power_used(best.f_star, best.rho_star, p, ch);
  best.diagnostics.restarts = cfg.j_restarts;
  best.diagnostics.min_half_step_delta = min_half_delta;
  best.diagnostics.min_iterate_delta = min_iter_delta;
  best.diagnostics.route =
      cfg.route == InnerRoute::closed_form ? "closed" : "sdr";
  best.diagnostics.wall_time_s = seconds_since(t0);
  return best;
}

SingleAntennaResult single_antenna_optimize(const SystemParams& p,
                                            const ChannelSet& ch,
                                            int trace_points) {
  p.validate();
  ch.validate(p.n_r);
  if (p.n_r != 1)
    throw std::invalid_argument(
        "single_antenna_optimize: requires exactly one relay antenna");
  const auto t0 = clock_type::now();

  const double hs = ch.h_sr.squaredNorm();
  const double hd = ch.h_dr.squaredNorm();

  // Scalar relay gain that spends exactly the harvested power.
  auto alpha = [&](double rho) {
    const double peh = harvested_power(PsRatio(rho), p, ch);
    const double drain = (1.0 - rho) * (p.p_s * hs + p.p_d * hd + p.sigma_r2) +
                         p.sigma_c2;
    return std::sqrt(peh / drain);
  };
  auto gain_bf = [&](double rho) {
    return Beamformer(MatrixXcd::Constant(1, 1, cplx(alpha(rho), 0.0)));
  };
  // Unclamped rate difference; the secrecy rate is its positive part / 2.
  auto g = [&](double rho) {
    return destination_rate(gain_bf(rho), PsRatio(rho), p, ch) -
           relay_rate(PsRatio(rho), p, ch);
  };
  const double h = 1e-6;
  auto dg = [&](double rho) {
    const double lo = std::max(rho - h, 0.0);
    const double hi = std::min(rho + h, 1.0);
    return (g(hi) - g(lo)) / (hi - lo);
  };

  const int n_scan = 2000;
  std::vector<double> candidates = derivative_roots(dg, h, 1.0 - h, n_scan);
  candidates.push_back(h);
  candidates.push_back(1.0 - h);
  candidates.push_back(0.0);
  candidates.push_back(1.0);

  double best_rho = 1.0, best_g = 0.0;
  for (double rho : candidates) {
    const double gv = g(rho);
    if (gv > best_g) {
      best_g = gv;
      best_rho = rho;
    }
  }

  SingleAntennaResult out;
  SolveResult& res = out.result;
  res.rho_star = PsRatio(best_rho);
  res.f_star = gain_bf(best_rho);
  res.objective = objective(res.rho_star, res.f_star, p, ch).value;
  res.secrecy_rate = 0.5 * std::max(0.0, std::log2(res.objective));
  res.relay_power_mw = relay_power_used(res.f_star, res.rho_star, p, ch);
  res.diagnostics.grid_points = n_scan;
  res.diagnostics.route = "closed-1d";

  out.optimum.rho = best_rho;
  out.optimum.r_sr = res.secrecy_rate;
  out.optimum.dr_sr_drho = best_g > 0.0 ? 0.5 * dg(best_rho) : 0.0;

  if (trace_points > 1) {
    out.trace.reserve(trace_points);
    for (int j = 0; j < trace_points; ++j) {
      const double rho =
          static_cast<double>(j) / static_cast<double>(trace_points - 1);
      const double gv = g(rho);
      TracePoint pt;
      pt.rho = rho;
      pt.r_sr = 0.5 * std::max(0.0, gv);
      pt.dr_sr_drho = gv > 0.0 ? 0.5 * dg(rho) : 0.0;
      out.trace.push_back(pt);
    }
  }
  res.diagnostics.wall_time_s = seconds_since(t0);
  return out;
}

}  // namespace wpr
