#include "cda/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cda/error.hpp"
#include "cda/operators.hpp"
#include "cda/parallel.hpp"

namespace cda {

namespace {

constexpr double kPi = std::numbers::pi;

// Portable uniform draw in [-1, 1) from the raw 64-bit engine output.
double uniform_pm1(std::mt19937_64& rng) {
  return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
}

void check_finite(const TargetState& s) {
  if (!s.u.all_finite() || !s.T.all_finite()) {
    throw NumericalError("non-finite field values at t = " + std::to_string(s.t), errc::kNonFinite);
  }
}

// u·∇_hΦ on the horizontal grid.
ScalarField potential_advection(const VectorField2D& u, const ProblemSetup& setup) {
  ScalarField out(u.grid);
  const auto& gp = setup.grad_phi_h;
  par::for_each_index(out.size(), [&](std::size_t i) { out.v[i] = u.x[i] * gp.x[i] + u.y[i] * gp.y[i]; });
  return out;
}

double min_spacing(const Grid& g) { return std::min(g.dx(), g.dy()); }

}  // namespace

double ProblemSetup::closure_denominator() const {
  return ref.rho_bar * coeffs.c_p - ref.theta_bar * coeffs.alpha * coeffs.p_theta;
}

double ProblemSetup::closure_beta() const {
  return ref.theta_bar * coeffs.alpha * coeffs.p_theta / (ref.rho_bar * coeffs.c_p);
}

double ProblemSetup::boundary_value(double x, double y, double z) const {
  const double cx = x - 0.5 * grid.lx;
  const double cy = y - 0.5 * grid.ly;
  const double r2max = 0.25 * (grid.lx * grid.lx + grid.ly * grid.ly);
  return profile.dT_vertical * (0.5 - z) + profile.dT_radial * ((cx * cx + cy * cy) / r2max - 0.5);
}

ProblemSetup ProblemSetup::make(const Grid& grid, const thermo::GasModel& model, const thermo::ReferenceState& ref,
                                double centrifugal, BoundaryProfile profile, SolverOptions linear) {
  grid.require_stencil();
  if (!(ref.rho_bar > 0.0) || !(ref.theta_bar > 0.0)) {
    throw ValidationError("reference density and temperature must be positive", errc::kConstraint);
  }
  if (!std::isfinite(centrifugal) || centrifugal < 0.0) {
    throw ValidationError("centrifugal coefficient must be finite and >= 0", errc::kConstraint);
  }
  ProblemSetup s;
  s.grid = grid;
  s.model = model;
  s.ref = ref;
  s.coeffs = thermo::derived_coefficients(model, ref);
  if (!(s.coeffs.alpha > 0.0) || !(s.coeffs.c_p > s.coeffs.c_v)) {
    throw ValidationError("reference state violates alpha > 0 or c_p > c_v", errc::kThermoStability);
  }
  const auto tc = thermo::transport_coefficients(model, ref.theta_bar);
  s.mu_bar = tc.mu;
  s.kappa_bar = tc.kappa;
  s.centrifugal = centrifugal;
  s.profile = profile;
  s.linear = linear;
  if (!(s.closure_denominator() > 0.0)) {
    throw ValidationError("mean-temperature closure denominator rho c_p - theta alpha p_theta is not positive",
                          errc::kThermoStability);
  }
  s.theta_boundary = std::make_shared<const BoundaryValues>(
      BoundaryValues::sample(grid, [&s](double x, double y, double z) { return s.boundary_value(x, y, z); }));
  const double cx = 0.5 * grid.lx;
  const double cy = 0.5 * grid.ly;
  s.phi = ScalarField::sample(grid, [&](double x, double y, double z) {
    return -z + centrifugal * ((x - cx) * (x - cx) + (y - cy) * (y - cy));
  });
  s.phi_h = ScalarField::sample(grid.horizontal(), [&](double x, double y, double) {
    return centrifugal * ((x - cx) * (x - cx) + (y - cy) * (y - cy));
  });
  s.grad_phi_h = VectorField2D::sample(grid.horizontal(), [&](double x, double y) {
    return std::array<double, 2>{2.0 * centrifugal * (x - cx), 2.0 * centrifugal * (y - cy)};
  });
  return s;
}

bool NudgingConfig::active_at(double t, double dt) const {
  const double eps = 1e-9 * dt;
  return t >= -eps && t < window_end - eps;
}

ScalarField boussinesq_density(const ScalarField& T, const ProblemSetup& setup) {
  if (!(T.grid == setup.grid)) throw ValidationError("temperature not on the setup grid", errc::kGridMismatch);
  const double p_rho = setup.coeffs.p_rho;
  if (!(p_rho > 0.0)) throw ValidationError("p_rho must be positive", errc::kThermoStability);
  const double rho = setup.ref.rho_bar;
  const double p_theta = setup.coeffs.p_theta;
  ScalarField R(T.grid);
  par::for_each_index(R.size(), [&](std::size_t i) { R.v[i] = (rho * setup.phi.v[i] - p_theta * T.v[i]) / p_rho; });
  const double m = domain_mean(R);
  par::for_each_index(R.size(), [&](std::size_t i) { R.v[i] -= m; });
  return R;
}

double boussinesq_residual(const ScalarField& R, const ScalarField& T, const ProblemSetup& setup) {
  const Grid& g = setup.grid;
  const double a = setup.coeffs.p_rho;
  const double b = setup.coeffs.p_theta;
  const double c = setup.ref.rho_bar;
  const auto& P = setup.phi.v;
  const std::size_t plane = static_cast<std::size_t>(g.nx) * g.ny;
  double worst = 0.0;
  double scale = 0.0;
  auto face = [&](std::size_t i0, std::size_t i1) {
    const double tr = a * (R.v[i1] - R.v[i0]);
    const double tt = b * (T.v[i1] - T.v[i0]);
    const double tp = c * (P[i1] - P[i0]);
    worst = std::max(worst, std::abs(tr + tt - tp));
    scale = std::max({scale, std::abs(tr), std::abs(tt), std::abs(tp)});
  };
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const std::size_t id = g.index(i, j, k);
        if (i + 1 < g.nx) face(id, id + 1);
        if (j + 1 < g.ny) face(id, id + static_cast<std::size_t>(g.nx));
        if (k + 1 < g.nz) face(id, id + plane);
      }
  return scale > 0.0 ? worst / scale : 0.0;
}

ScalarField smooth_temperature_perturbation(const Grid& g, double l1, std::uint64_t seed) {
  ScalarField f(g);
  if (l1 == 0.0) return f;
  if (!(l1 > 0.0)) throw ValidationError("perturbation size must be >= 0", errc::kConstraint);
  std::mt19937_64 rng(seed);
  const int lmax = g.nz > 1 ? 2 : 1;
  for (int m = 1; m <= 3; ++m)
    for (int n = 1; n <= 3; ++n)
      for (int l = 1; l <= lmax; ++l) {
        const double a = uniform_pm1(rng) / (m * n * l);
        const double px = 2.0 * kPi * uniform_pm1(rng);
        const double py = 2.0 * kPi * uniform_pm1(rng);
        for (int k = 0; k < g.nz; ++k) {
          const double z = g.nz > 1 ? std::sin(l * kPi * g.z(k)) : 1.0;
          for (int j = 0; j < g.ny; ++j) {
            const double y = g.periodic() ? std::sin(2.0 * kPi * n * g.y(j) / g.ly + py)
                                          : std::sin(n * kPi * g.y(j) / g.ly);
            for (int i = 0; i < g.nx; ++i) {
              const double x = g.periodic() ? std::sin(2.0 * kPi * m * g.x(i) / g.lx + px)
                                            : std::sin(m * kPi * g.x(i) / g.lx);
              f.v[g.index(i, j, k)] += a * x * y * z;
            }
          }
        }
      }
  const double n1 = norm(f, NormKind::L1);
  if (n1 > 0.0) f *= l1 / n1;
  return f;
}

VectorField2D smooth_velocity_perturbation(const Grid& grid, double l1, std::uint64_t seed,
                                           const SolverOptions& opts) {
  const Grid g = grid.horizontal();
  VectorField2D u(g);
  if (l1 == 0.0) return u;
  if (!(l1 > 0.0)) throw ValidationError("perturbation size must be >= 0", errc::kConstraint);
  std::mt19937_64 rng(seed);
  ScalarField psi(g);
  for (int m = 1; m <= 3; ++m)
    for (int n = 1; n <= 3; ++n) {
      const double a = uniform_pm1(rng) / (m * n);
      const double px = 2.0 * kPi * uniform_pm1(rng);
      const double py = 2.0 * kPi * uniform_pm1(rng);
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
          const double xs = g.x(i) / g.lx;
          const double ys = g.y(j) / g.ly;
          double v;
          if (g.periodic()) {
            v = std::sin(2.0 * kPi * m * xs + px) * std::sin(2.0 * kPi * n * ys + py);
          } else {
            // The extra sin factors make ψ and ∇ψ vanish on the walls.
            v = std::sin(m * kPi * xs) * std::sin(n * kPi * ys) * std::sin(kPi * xs) * std::sin(kPi * ys);
          }
          psi.v[g.index(i, j)] += a * v;
        }
    }
  const VectorField2D gp = grad_h(psi);
  u.x = gp.y;
  u.y = gp.x;
  for (double& v : u.y) v = -v;
  u = project(u, opts).velocity;
  const double n1 = norm(u, NormKind::L1);
  if (n1 > 0.0) u *= l1 / n1;
  return u;
}

ScalarField boundary_profile_field(const ProblemSetup& setup) {
  return ScalarField::sample(setup.grid,
                             [&](double x, double y, double z) { return setup.boundary_value(x, y, z); });
}

namespace {

// Largest |cell value - face value| over boundary-adjacent cells.
double boundary_mismatch(const ScalarField& f, const BoundaryValues& b) {
  const Grid& g = f.grid;
  double m = 0.0;
  if (!g.periodic()) {
    for (int k = 0; k < g.nz; ++k)
      for (int j = 0; j < g.ny; ++j) {
        const auto fi = static_cast<std::size_t>(k * g.ny + j);
        m = std::max(m, std::abs(f(0, j, k) - b.x_lo[fi]));
        m = std::max(m, std::abs(f(g.nx - 1, j, k) - b.x_hi[fi]));
      }
    for (int k = 0; k < g.nz; ++k)
      for (int i = 0; i < g.nx; ++i) {
        const auto fi = static_cast<std::size_t>(k * g.nx + i);
        m = std::max(m, std::abs(f(i, 0, k) - b.y_lo[fi]));
        m = std::max(m, std::abs(f(i, g.ny - 1, k) - b.y_hi[fi]));
      }
  }
  if (g.nz > 1) {
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const auto fi = static_cast<std::size_t>(j * g.nx + i);
        m = std::max(m, std::abs(f(i, j, 0) - b.z_lo[fi]));
        m = std::max(m, std::abs(f(i, j, g.nz - 1) - b.z_hi[fi]));
      }
  }
  return m;
}

// Hydrostatic part of Π: F(Φ_h) with ∇F(Φ_h) = (⟨ℛ⟩ + (p_ϑ/p_ρ)⟨𝒯⟩)∇Φ_h, shifted to zero mean.
void add_hydrostatic_pressure(ScalarField& Pi, const ScalarField& T, const ProblemSetup& setup) {
  const double a = setup.ref.rho_bar / setup.coeffs.p_rho;
  const double shift = -(setup.ref.rho_bar * domain_mean(setup.phi) - setup.coeffs.p_theta * domain_mean(T)) /
                       setup.coeffs.p_rho;
  const auto& ph = setup.phi_h.v;
  par::for_each_index(Pi.size(), [&](std::size_t i) {
    Pi.v[i] += a * (0.5 * ph[i] * ph[i] - 0.5 * ph[i]) + shift * ph[i];
  });
  const double m = domain_mean(Pi);
  par::for_each_index(Pi.size(), [&](std::size_t i) { Pi.v[i] -= m; });
}

}  // namespace

TargetState well_prepared_state(const ProblemSetup& setup, const ScalarField& T0, const VectorField2D& u0, double d,
                                std::uint64_t seed, double t0) {
  const Grid& g = setup.grid;
  if (!(T0.grid == g) || !(u0.grid == g.horizontal())) {
    throw ValidationError("initial data not on the setup grid", errc::kGridMismatch);
  }
  if (!T0.all_finite() || !u0.all_finite()) throw ValidationError("initial data not finite", errc::kConstraint);
  if (!(d >= 0.0) || !std::isfinite(d)) throw ValidationError("perturbation size d must be >= 0", errc::kConstraint);
  const double h = std::min({g.dx(), g.dy(), g.dz()});
  const double bmax = setup.theta_boundary->max_abs();
  const double tmis = boundary_mismatch(T0, *setup.theta_boundary);
  if (tmis > 4.0 * h * (1.0 + bmax)) {
    throw ValidationError("initial temperature does not match the boundary data (mismatch " + std::to_string(tmis) +
                              ")",
                          errc::kConstraint);
  }
  if (!g.periodic()) {
    const Grid gh = g.horizontal();
    const auto zeros = BoundaryValues::zeros(gh);
    const double umax = std::max(norm(u0, NormKind::Max), 1.0);
    const double umis = std::max(boundary_mismatch(u0.component(0), zeros), boundary_mismatch(u0.component(1), zeros));
    if (umis > 4.0 * std::min(gh.dx(), gh.dy()) * umax * 4.0) {
      throw ValidationError("initial velocity does not vanish on the walls", errc::kConstraint);
    }
  }

  TargetState s;
  s.t = t0;
  const ProjectionResult pr = project(u0, setup.linear);
  s.u = pr.velocity;
  s.T = T0;
  if (d > 0.0) {
    s.T += smooth_temperature_perturbation(g, d, seed);
    s.u += smooth_velocity_perturbation(g, d, seed ^ 0x9e3779b97f4a7c15ULL, setup.linear);
  }
  const double grad_scale = norm(s.u, NormKind::H1Seminorm);
  const double div = norm(div_h(s.u), NormKind::L2);
  if (div > 1e-8 * std::max(grad_scale, 1e-300) && div > 1e-14) {
    throw NumericalError("projection left a divergence defect of " + std::to_string(div), errc::kNonConvergence);
  }
  const ScalarField R = boussinesq_density(s.T, setup);
  const double res = boussinesq_residual(R, s.T, setup);
  if (res > 1e-10) throw NumericalError("Boussinesq relation violated by initial data", errc::kNonFinite);
  s.Pi = ScalarField(g.horizontal());
  add_hydrostatic_pressure(s.Pi, s.T, setup);
  return s;
}

namespace {

TargetState step_impl(const TargetState& s, const TargetState* obs, const NudgingConfig* nud,
                      const ProblemSetup& setup, double dt, StepInfo* info) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("time step must be positive", errc::kConstraint);
  const Grid& g = setup.grid;
  const Grid gh = g.horizontal();
  if (!(s.T.grid == g) || !(s.u.grid == gh)) throw ValidationError("state not on the setup grid", errc::kGridMismatch);

  const double umax = norm(s.u, NormKind::Max);
  if (umax * dt > 0.5 * min_spacing(g)) {
    throw NumericalError("CFL violated: |u| dt = " + std::to_string(umax * dt) + " > 0.5 h", errc::kCfl);
  }
  const bool active = nud != nullptr && nud->lambda > 0.0 && nud->active_at(s.t, dt);
  const double lambda = active ? nud->lambda : 0.0;
  if (active && lambda * dt > 2.0) {
    throw NumericalError("nudging stiffness guard violated: lambda dt > 2", errc::kStability);
  }

  const double rho = setup.ref.rho_bar;
  const double theta = setup.ref.theta_bar;
  const auto& c = setup.coeffs;

  // Velocity: explicit advection, buoyancy, nudging.
  VectorField2D f = ops::momentum_advection(s.u);
  const ScalarField Tavg = vertical_average(s.T);
  const double buoy = -c.p_theta / (c.p_rho * rho);
  const auto& gp = setup.grad_phi_h;
  par::for_each_index(f.size(), [&](std::size_t i) {
    f.x[i] = -f.x[i] + buoy * Tavg.v[i] * gp.x[i];
    f.y[i] = -f.y[i] + buoy * Tavg.v[i] * gp.y[i];
  });
  if (active) {
    const VectorField2D obs_u = nud->velocity.apply_vector(s.u - obs->u);
    const double k = lambda / rho;
    par::for_each_index(f.size(), [&](std::size_t i) {
      f.x[i] -= k * obs_u.x[i];
      f.y[i] -= k * obs_u.y[i];
    });
  }
  VectorField2D ustar = s.u;
  par::for_each_index(f.size(), [&](std::size_t i) {
    ustar.x[i] += dt * f.x[i];
    ustar.y[i] += dt * f.y[i];
  });
  const ScalarBC wall = ScalarBC::zero_dirichlet();
  const double cnu = dt * setup.nu();
  VectorField2D udiff(helmholtz_solve(ustar.component(0), cnu, wall, setup.linear),
                      helmholtz_solve(ustar.component(1), cnu, wall, setup.linear));
  const ProjectionResult pr = project(udiff, setup.linear);

  // Temperature: explicit transport, adiabatic heating, mean closure, nudging.
  const ScalarBC tbc = setup.temperature_bc();
  const ScalarField adv = ops::scalar_advection(s.u, s.T, tbc);
  const ScalarField lap = laplacian(s.T, tbc);
  const ScalarField ugp = potential_advection(s.u, setup);
  ScalarField nT;
  double m_nudge = 0.0;
  if (active) {
    nT = nud->temperature.apply(s.T - obs->T);
    m_nudge = domain_mean(nT);
  }
  const double mean_rate = (setup.kappa_bar * domain_mean(lap) - rho * c.c_p * domain_mean(adv) +
                            rho * theta * c.alpha * domain_mean(ugp) - theta * lambda * m_nudge) /
                           setup.closure_denominator();
  const double k_ad = theta * c.alpha / c.c_p;
  const double k_mean = theta * c.alpha * c.p_theta / (rho * c.c_p) * mean_rate;
  const double k_nud = theta * lambda / (rho * c.c_p);
  const std::size_t plane = gh.size();
  ScalarField tstar = s.T;
  par::for_each_index(tstar.size(), [&](std::size_t i) {
    double r = -adv.v[i] + k_ad * ugp.v[i % plane] + k_mean;
    if (active) r -= k_nud * nT.v[i];
    tstar.v[i] += dt * r;
  });

  TargetState out;
  out.t = s.t + dt;
  out.u = pr.velocity;
  out.T = helmholtz_solve(tstar, dt * setup.diffusivity(), tbc, setup.linear);
  out.Pi = pr.potential;
  out.Pi *= rho / dt;
  add_hydrostatic_pressure(out.Pi, s.T, setup);
  check_finite(out);
  if (info) {
    info->mean_rate = mean_rate;
    info->divergence_after = pr.divergence_after;
    info->nudging_active = active;
    info->projection_iterations = pr.stats.iterations;
  }
  return out;
}

}  // namespace

TargetState step_target(const TargetState& state, const ProblemSetup& setup, double dt, StepInfo* info) {
  return step_impl(state, nullptr, nullptr, setup, dt, info);
}

TargetState step_synchronized(const TargetState& state, const TargetState& observed, const NudgingConfig& nudging,
                              const ProblemSetup& setup, double dt, StepInfo* info) {
  if (!(observed.T.grid == state.T.grid) || !(observed.u.grid == state.u.grid)) {
    throw ValidationError("observed and synchronized states live on different grids", errc::kGridMismatch);
  }
  if (std::abs(observed.t - state.t) > 1e-9 * std::max(1.0, std::abs(state.t))) {
    throw ValidationError("observed and synchronized states are at different times", errc::kInvalidArgument);
  }
  if (!(nudging.lambda >= 0.0) || !(nudging.window_end >= 0.0)) {
    throw ValidationError("nudging requires lambda >= 0 and T_sync >= 0", errc::kConstraint);
  }
  return step_impl(state, &observed, &nudging, setup, dt, info);
}

EnergyTerms energy_terms(const TargetState& observed, const TargetState& sync, const NudgingConfig& nudging,
                         const ProblemSetup& setup, bool nudging_active) {
  const double rho = setup.ref.rho_bar;
  const double theta_bar = setup.ref.theta_bar;
  const auto& c = setup.coeffs;
  const ScalarBC zero = ScalarBC::zero_dirichlet();
  EnergyTerms e;

  const VectorField2D du = sync.u - observed.u;
  const ScalarField dT = sync.T - observed.T;
  const double vol = setup.grid.volume();
  const double beta = setup.closure_beta();
  const double mean_int = integral(dT);
  e.velocity_energy = 0.5 * inner(du, du);
  e.temperature_energy = 0.5 * (inner(dT, dT) - beta * mean_int * mean_int / vol);

  const ScalarField dx = du.component(0);
  const ScalarField dy = du.component(1);
  e.u_viscous = setup.nu() * (inner(dx, laplacian(dx, zero)) + inner(dy, laplacian(dy, zero)));
  e.u_advection = -inner(du, ops::momentum_advection(sync.u) - ops::momentum_advection(observed.u));
  {
    const ScalarField avg = vertical_average(dT);
    VectorField2D b(du.grid);
    const double k = -c.p_theta / (c.p_rho * rho);
    par::for_each_index(b.size(), [&](std::size_t i) {
      b.x[i] = k * avg.v[i] * setup.grad_phi_h.x[i];
      b.y[i] = k * avg.v[i] * setup.grad_phi_h.y[i];
    });
    e.u_buoyancy = inner(du, b);
  }
  const ScalarBC tbc = setup.temperature_bc();
  e.t_diffusion = setup.diffusivity() * inner(dT, laplacian(dT, zero));
  e.t_advection = -inner(dT, ops::scalar_advection(sync.u, sync.T, tbc) - ops::scalar_advection(observed.u, observed.T, tbc));
  {
    const ScalarField ugp = vertical_extend(potential_advection(du, setup), setup.grid);
    e.t_adiabatic = theta_bar * c.alpha / c.c_p * inner(dT, ugp);
  }
  if (nudging_active && nudging.lambda > 0.0) {
    e.u_nudging = -nudging.lambda / rho * inner(nudging.velocity.apply_vector(du), du);
    e.t_nudging = -theta_bar * nudging.lambda / (rho * c.c_p) * inner(nudging.temperature.apply(dT), dT);
  }
  return e;
}

std::vector<EnergyResidual> energy_identity_residual(const std::vector<TargetState>& observed,
                                                     const std::vector<TargetState>& sync,
                                                     const NudgingConfig& nudging, const ProblemSetup& setup,
                                                     double dt) {
  if (observed.size() != sync.size()) {
    throw ValidationError("energy identity: trajectories of different length", errc::kInvalidArgument);
  }
  if (!(dt > 0.0)) throw ValidationError("energy identity: dt must be positive", errc::kConstraint);
  for (std::size_t n = 0; n < observed.size(); ++n) {
    if (std::abs(observed[n].t - sync[n].t) > 1e-9 * std::max(1.0, std::abs(sync[n].t))) {
      throw ValidationError("energy identity: trajectories are not aligned in time", errc::kInvalidArgument);
    }
  }
  std::vector<EnergyResidual> out;
  if (observed.size() < 2) return out;
  out.reserve(observed.size() - 1);
  for (std::size_t n = 0; n + 1 < observed.size(); ++n) {
    const bool active = nudging.active_at(sync[n].t, dt);
    const EnergyTerms a = energy_terms(observed[n], sync[n], nudging, setup, active);
    const EnergyTerms b = energy_terms(observed[n + 1], sync[n + 1], nudging, setup, active);
    EnergyResidual r;
    r.t = sync[n].t;
    r.terms = a;
    const double lhs_u = (b.velocity_energy - a.velocity_energy) / dt;
    const double lhs_t = (b.temperature_energy - a.temperature_energy) / dt;
    const double rhs_u = 0.5 * (a.velocity_rhs() + b.velocity_rhs());
    const double rhs_t = 0.5 * (a.temperature_rhs() + b.temperature_rhs());
    const double su = std::max({std::abs(lhs_u), std::abs(a.u_viscous), std::abs(a.u_advection),
                                std::abs(a.u_buoyancy), std::abs(a.u_nudging), std::abs(b.u_viscous),
                                std::abs(b.u_advection), std::abs(b.u_buoyancy), std::abs(b.u_nudging)});
    const double st = std::max({std::abs(lhs_t), std::abs(a.t_diffusion), std::abs(a.t_advection),
                                std::abs(a.t_adiabatic), std::abs(a.t_nudging), std::abs(b.t_diffusion),
                                std::abs(b.t_advection), std::abs(b.t_adiabatic), std::abs(b.t_nudging)});
    r.velocity = su > 0.0 ? std::abs(lhs_u - rhs_u) / su : 0.0;
    r.temperature = st > 0.0 ? std::abs(lhs_t - rhs_t) / st : 0.0;
    out.push_back(r);
  }
  return out;
}

}  // namespace cda
