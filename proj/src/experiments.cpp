#include "cda/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "cda/error.hpp"
#include "cda/operators.hpp"
#include "cda/snapshot.hpp"

namespace cda {

namespace {

long long steps_for(double span, double dt, const char* what) {
  const double n = span / dt;
  const long long r = std::llround(n);
  if (std::abs(n - static_cast<double>(r)) > 1e-6) {
    throw ValidationError(std::string(what) + " is not a whole number of time steps", errc::kConstraint);
  }
  return r;
}

bool near(double a, double b, double dt) { return std::abs(a - b) <= 0.5 * dt; }

// Positive samples of `e` with t in [a, b].
void window(const std::vector<double>& t, const std::vector<double>& e, double a, double b, std::vector<double>& wt,
            std::vector<double>& we) {
  const double tol = 1e-9 * std::max(1.0, std::abs(b));
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= a - tol && t[i] <= b + tol && e[i] > 0.0) {
      wt.push_back(t[i]);
      we.push_back(e[i]);
    }
  }
}

double ls_slope(const std::vector<double>& t, const std::vector<double>& y) {
  const double n = static_cast<double>(t.size());
  double st = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    sy += y[i];
  }
  const double mt = st / n;
  const double my = sy / n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    num += (t[i] - mt) * (y[i] - my);
    den += (t[i] - mt) * (t[i] - mt);
  }
  if (!(den > 0.0)) throw ValidationError("rate fit needs distinct sample times", errc::kInvalidArgument);
  return num / den;
}

struct DecayWindow {
  double end = 0.0;
  double floor = 0.0;
};

// Decay window on [0, T]: ends where the functional first comes within three
// decades of its floor, unless the total decay is less than six decades.
DecayWindow decay_window(const TrackingReport& r) {
  DecayWindow w{r.t_sync, 0.0};
  double e0 = 0.0;
  double floor = std::numeric_limits<double>::infinity();
  const double tol = 1e-9 * std::max(1.0, r.t_sync);
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    if (r.times[i] < -tol || r.times[i] > r.t_sync + tol) continue;
    if (std::abs(r.times[i]) <= tol) e0 = r.combined[i];
    if (r.combined[i] > 0.0) floor = std::min(floor, r.combined[i]);
  }
  if (!std::isfinite(floor)) return w;
  w.floor = floor;
  if (e0 > 0.0 && e0 / floor >= 1e6) {
    for (std::size_t i = 0; i < r.times.size(); ++i) {
      if (r.times[i] < -tol || r.times[i] > r.t_sync + tol) continue;
      if (r.combined[i] <= 1e3 * floor) {
        w.end = r.times[i];
        break;
      }
    }
  }
  return w;
}

}  // namespace

void TwinExperimentConfig::validate() const {
  if (!(t_minus < t_zero) || t_zero != 0.0 || !(t_zero < t_sync()) || !(t_sync() < t_plus)) {
    throw ValidationError("time ordering must satisfy T- < 0 = t_zero < T_sync < T+", errc::kConstraint);
  }
  if (!(dt > 0.0)) throw ValidationError("dt must be positive", errc::kConstraint);
  steps_for(-t_minus, dt, "T-");
  steps_for(t_sync(), dt, "T_sync");
  steps_for(t_plus, dt, "T+");
  if (output_every < 1) throw ValidationError("output cadence must be >= 1", errc::kConstraint);
  if (snapshot_every < 0) throw ValidationError("snapshot cadence must be >= 0", errc::kConstraint);
  if (!(nudging.lambda >= 0.0)) throw ValidationError("nudging lambda must be >= 0", errc::kConstraint);
  if (nudging.lambda * dt > 2.0) {
    throw ValidationError("nudging lambda * dt must not exceed 2", errc::kConstraint);
  }
  if (!(beta_fit > 0.0 && beta_fit < 1.0)) throw ValidationError("beta must lie in (0,1)", errc::kConstraint);
  if (!(u_amplitude >= 0.0) || !(T_amplitude >= 0.0) || !(d_sync >= 0.0)) {
    throw ValidationError("initial perturbation sizes must be >= 0", errc::kConstraint);
  }
  if (!(nudging.velocity.grid() == setup.grid.horizontal()) || !(nudging.temperature.grid() == setup.grid)) {
    throw ValidationError("interpolant grids do not match the setup grid", errc::kGridMismatch);
  }
}

namespace {

TargetState observed_initial(const TwinExperimentConfig& c) {
  const ScalarField base = boundary_profile_field(c.setup);
  ScalarField T0 = base;
  T0 += smooth_temperature_perturbation(c.setup.grid, c.T_amplitude, c.seed);
  const VectorField2D u0 = smooth_velocity_perturbation(c.setup.grid, c.u_amplitude, c.seed * 2654435761ULL + 17,
                                                        c.setup.linear);
  return well_prepared_state(c.setup, T0, u0, 0.0, c.seed, c.t_minus);
}

void dump(const std::filesystem::path& dir, const std::string& tag, const TargetState& s) {
  std::filesystem::create_directories(dir);
  write_snapshot(dir / (tag + "_T.cdf"), tag + "_T", s.T);
  write_snapshot(dir / (tag + "_ux.cdf"), tag + "_ux", s.u.component(0));
  write_snapshot(dir / (tag + "_uy.cdf"), tag + "_uy", s.u.component(1));
}

std::string step_tag(const char* run, long long m) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%08lld", run, m);
  return buf;
}

}  // namespace

TargetState run_observed(const TwinExperimentConfig& config, std::vector<std::array<double, 4>>* series) {
  config.validate();
  const long long n_pre = steps_for(-config.t_minus, config.dt, "T-");
  const long long n_post = steps_for(config.t_plus, config.dt, "T+");
  TargetState s = observed_initial(config);
  auto record = [&](const TargetState& st) {
    if (!series) return;
    const ScalarField R = boussinesq_density(st.T, config.setup);
    series->push_back({st.t, norm(st.u, NormKind::L2), norm(st.T, NormKind::L2), norm(R, NormKind::L2)});
  };
  record(s);
  for (long long m = -n_pre; m < n_post; ++m) {
    s = step_target(s, config.setup, config.dt);
    s.t = static_cast<double>(m + 1) * config.dt;
    if ((m + 1 + n_pre) % config.output_every == 0 || m + 1 == n_post) record(s);
  }
  return s;
}

TrackingReport run_twin(const TwinExperimentConfig& config) {
  config.validate();
  const ProblemSetup& setup = config.setup;
  const double dt = config.dt;
  const long long n_pre = steps_for(-config.t_minus, dt, "T-");
  const long long m_sync = steps_for(config.t_sync(), dt, "T_sync");
  const long long n_post = steps_for(config.t_plus, dt, "T+");

  TrackingReport rep;
  rep.lambda = config.nudging.lambda;
  rep.t_sync = config.t_sync();
  rep.t_plus = config.t_plus;
  rep.beta_fit = config.beta_fit;

  TargetState obs = observed_initial(config);
  for (long long m = -n_pre; m < 0; ++m) {
    obs = step_target(obs, setup, dt);
    obs.t = static_cast<double>(m + 1) * dt;
  }
  obs.t = 0.0;
  TargetState sync;
  if (config.sync_init == SyncInit::Observed) {
    sync = obs;
  } else {
    const ScalarField base = boundary_profile_field(setup);
    sync = well_prepared_state(setup, base, VectorField2D(setup.grid), config.d_sync, config.seed + 1, 0.0);
  }

  const double vol = setup.grid.volume();
  auto record = [&](const TargetState& o, const TargetState& s) {
    const VectorField2D du = s.u - o.u;
    const ScalarField dT = s.T - o.T;
    const ScalarField Ro = boussinesq_density(o.T, setup);
    const ScalarField Rs = boussinesq_density(s.T, setup);
    const ScalarField dR = Rs - Ro;
    rep.times.push_back(s.t);
    rep.err_u.push_back(norm(du, NormKind::L2));
    rep.err_T.push_back(norm(dT, NormKind::L2));
    rep.err_R.push_back(norm(dR, NormKind::L2));
    rep.err_u_L1.push_back(norm(du, NormKind::L1));
    rep.err_T_L1.push_back(norm(dT, NormKind::L1));
    rep.err_R_L1.push_back(norm(dR, NormKind::L1));
    rep.nudging_active.push_back(config.nudging.lambda > 0.0 && config.nudging.active_at(s.t, dt) ? 1 : 0);
    const double it = integral(dT);
    rep.combined.push_back(rep.err_u.back() * rep.err_u.back() + rep.err_T.back() * rep.err_T.back() -
                           config.beta_fit * it * it / vol);

    for (const auto* pair : {&o, &s}) {
      const ScalarField& R = pair == &o ? Ro : Rs;
      rep.boussinesq_worst_residual = std::max(rep.boussinesq_worst_residual, boussinesq_residual(R, pair->T, setup));
      rep.boussinesq_worst_mean = std::max(rep.boussinesq_worst_mean, std::abs(domain_mean(R)));
      const double gu = norm(pair->u, NormKind::H1Seminorm);
      if (gu > 0.0) {
        rep.divergence_worst = std::max(rep.divergence_worst, norm(div_h(pair->u), NormKind::L2) / gu);
      }
    }
    for (double beta : {0.1, 0.5, 0.9}) {
      const JensenCheck j = jensen_sandwich_check(o.T, s.T, beta);
      rep.jensen_worst_defect = std::max(rep.jensen_worst_defect, j.defect);
      rep.jensen_passed = rep.jensen_passed && j.passed;
    }
  };

  auto snapshot = [&](long long m) {
    if (config.snapshot_every > 0 && config.snapshot_dir && m % config.snapshot_every == 0) {
      dump(*config.snapshot_dir, step_tag("obs", m), obs);
      dump(*config.snapshot_dir, step_tag("sync", m), sync);
    }
  };

  record(obs, sync);
  snapshot(0);
  EnergyTerms prev;
  bool prev_flag = false;
  bool have_prev = false;
  double sum_u = 0.0, sum_t = 0.0;
  long long n_res = 0;
  for (long long m = 0; m < n_post; ++m) {
    const bool flag = config.nudging.lambda > 0.0 && config.nudging.active_at(sync.t, dt);
    if (config.energy_diagnostics && (!have_prev || prev_flag != flag)) {
      prev = energy_terms(obs, sync, config.nudging, setup, flag);
    }
    try {
      TargetState s_next = step_synchronized(sync, obs, config.nudging, setup, dt);
      TargetState o_next = step_target(obs, setup, dt);
      sync = std::move(s_next);
      obs = std::move(o_next);
    } catch (const NumericalError& e) {
      if (config.snapshot_dir) {
        dump(*config.snapshot_dir, step_tag("failed_obs", m), obs);
        dump(*config.snapshot_dir, step_tag("failed_sync", m), sync);
      }
      throw NumericalError(std::string(e.what()) + " (twin step " + std::to_string(m) + ")", e.code());
    }
    obs.t = sync.t = static_cast<double>(m + 1) * dt;
    if (config.energy_diagnostics) {
      const EnergyTerms next = energy_terms(obs, sync, config.nudging, setup, flag);
      const double lu = (next.velocity_energy - prev.velocity_energy) / dt;
      const double lt = (next.temperature_energy - prev.temperature_energy) / dt;
      const double ru = 0.5 * (prev.velocity_rhs() + next.velocity_rhs());
      const double rt = 0.5 * (prev.temperature_rhs() + next.temperature_rhs());
      const double su = std::max({std::abs(lu), std::abs(prev.u_viscous), std::abs(prev.u_advection),
                                  std::abs(prev.u_buoyancy), std::abs(prev.u_nudging), std::abs(next.u_viscous),
                                  std::abs(next.u_advection), std::abs(next.u_buoyancy), std::abs(next.u_nudging)});
      const double st = std::max({std::abs(lt), std::abs(prev.t_diffusion), std::abs(prev.t_advection),
                                  std::abs(prev.t_adiabatic), std::abs(prev.t_nudging), std::abs(next.t_diffusion),
                                  std::abs(next.t_advection), std::abs(next.t_adiabatic),
                                  std::abs(next.t_nudging)});
      const double res_u = su > 0.0 ? std::abs(lu - ru) / su : 0.0;
      const double res_t = st > 0.0 ? std::abs(lt - rt) / st : 0.0;
      rep.energy_residual_u_max = std::max(rep.energy_residual_u_max, res_u);
      rep.energy_residual_T_max = std::max(rep.energy_residual_T_max, res_t);
      sum_u += res_u;
      sum_t += res_t;
      ++n_res;
      prev = next;
      prev_flag = flag;
      have_prev = true;
    }
    const long long k = m + 1;
    if (k % config.output_every == 0 || k == m_sync || k == n_post) record(obs, sync);
    snapshot(k);
  }
  if (n_res > 0) {
    rep.energy_residual_u_mean = sum_u / static_cast<double>(n_res);
    rep.energy_residual_T_mean = sum_t / static_cast<double>(n_res);
  }
  refit(rep);
  return rep;
}

double fit_decay_rate(const std::vector<double>& times, const std::vector<double>& errs, double t_a, double t_b) {
  if (times.size() != errs.size()) throw ValidationError("fit_decay_rate: series lengths differ");
  std::vector<double> t, y;
  const double tol = 1e-9 * std::max(1.0, std::abs(t_b));
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_a - tol || times[i] > t_b + tol) continue;
    if (!(errs[i] > 0.0)) throw ValidationError("fit_decay_rate: errors must be positive on the window");
    t.push_back(times[i]);
    y.push_back(std::log(errs[i]));
  }
  if (t.size() < 3) throw ValidationError("fit_decay_rate: fewer than 3 points in the window");
  return -ls_slope(t, y);
}

void refit(TrackingReport& r) {
  const DecayWindow w = decay_window(r);
  r.floor = w.floor;
  r.decay_window_end = w.end;
  r.decay_rate = 0.0;
  r.growth_rate = 0.0;
  std::vector<double> t, e;
  window(r.times, r.combined, 0.0, w.end, t, e);
  if (t.size() >= 3) r.decay_rate = fit_decay_rate(t, e, 0.0, w.end);
  t.clear();
  e.clear();
  window(r.times, r.combined, r.t_sync, r.t_plus, t, e);
  if (t.size() >= 3) r.growth_rate = -fit_decay_rate(t, e, r.t_sync, r.t_plus);
}

EnvelopeCheck gronwall_envelope_check(const TrackingReport& report, double lambda, std::optional<double> k_growth) {
  EnvelopeCheck c;
  c.theoretical_rate = 0.5 * lambda;
  const DecayWindow w = decay_window(report);
  c.floor = w.floor;
  c.window_end = w.end;

  std::vector<double> t, e;
  window(report.times, report.combined, 0.0, w.end, t, e);
  if (t.size() >= 3 && std::abs(t.front()) <= 1e-12) {
    c.decay_rate = fit_decay_rate(t, e, 0.0, w.end);
    double env = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < t.size(); ++i) env = std::min(env, -std::log(e[i] / e[0]) / t[i]);
    c.envelope_rate = env;
    c.decay_passed = lambda > 0.0 && c.decay_rate >= 0.25 * lambda && c.envelope_rate > 0.0;
    if (!c.decay_passed) {
      c.detail += lambda > 0.0 ? "decay rate below lambda/4 or no decaying envelope; " : "no nudging; ";
    }
  } else {
    c.detail += "decay window has fewer than 3 positive samples; ";
  }

  t.clear();
  e.clear();
  window(report.times, report.combined, report.t_sync, report.t_plus, t, e);
  if (t.size() >= 3 && std::abs(t.front() - report.t_sync) <= 1e-9 * std::max(1.0, report.t_sync)) {
    c.growth_rate = k_growth ? *k_growth : -fit_decay_rate(t, e, report.t_sync, report.t_plus);
    double margin = 0.0;
    double slope = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.size(); ++i) {
      margin = std::max(margin, e[i] / (e[0] * std::exp(c.growth_rate * (t[i] - t[0]))));
      if (i + 1 < t.size()) slope = std::max(slope, std::log(e[i + 1] / e[i]) / (t[i + 1] - t[i]));
    }
    c.growth_margin = margin;
    c.max_local_slope = slope;
    c.growth_passed = std::isfinite(c.growth_rate) && std::isfinite(slope) && margin <= 1.2 + 1e-12;
    if (!c.growth_passed) c.detail += "growth envelope exceeded; ";
  } else {
    c.detail += "growth window has fewer than 3 positive samples; ";
  }
  return c;
}

JensenCheck jensen_sandwich_check(const ScalarField& T_obs, const ScalarField& T_sync, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw ValidationError("jensen_sandwich_check: beta must lie in (0,1)");
  const ScalarField d = T_sync - T_obs;
  const double l2 = inner(d, d);
  const double m = integral(d);
  JensenCheck j;
  j.upper = l2;
  j.lower = (1.0 - beta) * l2;
  j.middle = l2 - beta * m * m / T_obs.grid.volume();
  if (l2 > 0.0) j.defect = std::max(j.lower - j.middle, j.middle - j.upper) / l2;
  j.passed = j.defect <= 1e-12;
  return j;
}

std::size_t row_at(const TrackingReport& report, double t) {
  double dt_half = 0.0;
  if (report.times.size() >= 2) dt_half = 0.5 * std::abs(report.times[1] - report.times[0]);
  for (std::size_t i = 0; i < report.times.size(); ++i) {
    if (near(report.times[i], t, 2.0 * std::max(dt_half, 1e-12))) return i;
  }
  return report.rows();
}

namespace {

double error_at_sync_end(const TrackingReport& r) {
  const std::size_t i = row_at(r, r.t_sync);
  if (i == r.rows()) throw ValidationError("report has no row at T_sync");
  return std::max({r.err_u[i], r.err_T[i], r.err_R[i]});
}

}  // namespace

ThresholdResult lambda_threshold_search(const TwinExperimentConfig& config, double omega, double lo, double hi,
                                        int max_runs) {
  if (!(lo >= 0.0) || !(lo < hi)) throw ValidationError("lambda range must satisfy 0 <= lo < hi", errc::kConstraint);
  if (!(omega > 0.0)) throw ValidationError("omega must be positive", errc::kConstraint);
  if (max_runs < 3) throw ValidationError("threshold search needs a budget of at least 3 runs", errc::kConstraint);
  ThresholdResult res;
  auto run = [&](double lambda) {
    TwinExperimentConfig c = config;
    c.nudging.lambda = lambda;
    c.snapshot_every = 0;
    c.energy_diagnostics = false;
    const double err = error_at_sync_end(run_twin(c));
    res.trials.emplace_back(lambda, err);
    ++res.runs;
    return err;
  };
  const double e_lo = run(lo);
  if (e_lo <= omega) {
    res.found = true;
    res.lambda_star = lo;
    res.best_error = e_lo;
    res.bracket_certified = true;
    return res;
  }
  const double e_hi = run(hi);
  res.best_error = std::min(e_lo, e_hi);
  if (e_hi > omega) {
    res.floor_estimate = e_hi;
    return res;
  }
  double a = lo, b = hi;
  double eb = e_hi;
  while (res.runs < max_runs - 1 && b - a > 0.02 * b) {
    const double mid = a > 0.0 ? std::sqrt(a * b) : 0.5 * b;
    const double em = run(mid);
    if (em <= omega) {
      b = mid;
      eb = em;
    } else {
      a = mid;
    }
  }
  res.found = true;
  res.lambda_star = b;
  res.best_error = eb;
  // Bracketing certificate: half the threshold must miss omega.
  const double half = 0.5 * b;
  bool half_meets = false;
  if (half <= lo) {
    half_meets = e_lo <= omega;
  } else {
    half_meets = run(half) <= omega;
  }
  res.bracket_certified = !half_meets;
  for (std::size_t i = 0; i < res.trials.size(); ++i)
    for (std::size_t j = 0; j < res.trials.size(); ++j) {
      if (res.trials[i].first < res.trials[j].first && res.trials[i].second <= omega &&
          res.trials[j].second > omega) {
        res.monotonicity_violated = true;
      }
    }
  return res;
}

std::vector<SweepRow> sweep(const TwinExperimentConfig& base, const std::vector<double>& lambdas,
                            const std::vector<double>& deltas, const std::vector<std::uint64_t>& seeds,
                            int workers) {
  struct Job {
    double lambda, delta;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (double l : lambdas)
    for (double d : deltas)
      for (std::uint64_t s : seeds) jobs.push_back({l, d, s});
  std::vector<SweepRow> rows(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        TwinExperimentConfig c = base;
        c.nudging.lambda = jobs[i].lambda;
        c.seed = jobs[i].seed;
        c.snapshot_every = 0;
        c.nudging.velocity = Interpolant(base.nudging.velocity.kind(), base.nudging.velocity.grid(), jobs[i].delta,
                                         base.nudging.velocity.vertical());
        c.nudging.temperature = Interpolant(base.nudging.temperature.kind(), base.nudging.temperature.grid(),
                                            jobs[i].delta, base.nudging.temperature.vertical());
        const TrackingReport r = run_twin(c);
        const std::size_t k = row_at(r, r.t_sync);
        rows[i] = {jobs[i].lambda, jobs[i].delta, jobs[i].seed, r.err_u[k], r.err_T[k], r.err_R[k], r.decay_rate,
                   r.growth_rate};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

}  // namespace cda
