#include "cda/thermo.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cda/error.hpp"

namespace cda::thermo {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ValidationError(std::string(what) + " is not finite");
}

void require_state(double rho, double theta, bool rho_positive) {
  require_finite(rho, "density");
  require_finite(theta, "temperature");
  if (theta <= 0.0) throw ValidationError("temperature must be positive");
  if (rho_positive ? rho <= 0.0 : rho < 0.0) {
    throw ValidationError(rho_positive ? "density must be positive" : "density must be nonnegative");
  }
}

double zeta_arg(double rho, double theta) { return rho / std::pow(theta, 1.5); }

}  // namespace

// ---------------------------------------------------------------------------
// StructuralFunction

StructuralFunction StructuralFunction::ideal() {
  StructuralFunction p;
  p.kind_ = StructuralKind::Ideal;
  return p;
}

StructuralFunction StructuralFunction::degenerate(double kappa_deg, double z_c) {
  if (!(kappa_deg >= 0.0) || !(z_c > 0.0)) {
    throw ValidationError("degenerate preset needs kappa_deg >= 0 and z_c > 0");
  }
  StructuralFunction p;
  p.kind_ = StructuralKind::Degenerate;
  p.kappa_deg_ = kappa_deg;
  p.z_c_ = z_c;
  return p;
}

StructuralFunction StructuralFunction::power_sum(std::vector<PowerTerm> terms) {
  StructuralFunction p;
  p.kind_ = StructuralKind::PowerSum;
  p.terms_ = std::move(terms);
  return p;
}

double StructuralFunction::value(double z) const {
  switch (kind_) {
    case StructuralKind::Ideal:
      return z;
    case StructuralKind::Degenerate: {
      const double c = std::pow(z_c_, 2.0 / 3.0);
      const double u = std::pow(z, 2.0 / 3.0);
      return z + 0.6 * kappa_deg_ * std::pow(z, 7.0 / 3.0) / (c + u);
    }
    case StructuralKind::PowerSum: {
      double s = 0.0;
      for (const auto& t : terms_) s += t.coefficient * (z == 0.0 ? (t.exponent == 0.0 ? 1.0 : 0.0) : std::pow(z, t.exponent));
      return s;
    }
  }
  return 0.0;
}

double StructuralFunction::derivative(double z) const {
  switch (kind_) {
    case StructuralKind::Ideal:
      return 1.0;
    case StructuralKind::Degenerate: {
      const double c = std::pow(z_c_, 2.0 / 3.0);
      const double u = std::pow(z, 2.0 / 3.0);
      const double w = c + u;
      return 1.0 + 0.6 * kappa_deg_ * std::pow(z, 4.0 / 3.0) * (7.0 / 3.0 / w - 2.0 / 3.0 * u / (w * w));
    }
    case StructuralKind::PowerSum: {
      double s = 0.0;
      for (const auto& t : terms_) {
        if (t.exponent == 0.0) continue;
        s += t.coefficient * t.exponent * std::pow(z, t.exponent - 1.0);
      }
      return s;
    }
  }
  return 0.0;
}

double StructuralFunction::heat_capacity_ratio(double z) const {
  switch (kind_) {
    case StructuralKind::Ideal:
      return 2.0 / 3.0;
    case StructuralKind::Degenerate: {
      const double c = std::pow(z_c_, 2.0 / 3.0);
      const double u = std::pow(z, 2.0 / 3.0);
      // split as limit + decaying part, so Z -> inf neither overflows nor leaves a rounding residue
      const double a = 0.4 * kappa_deg_ * c;
      double limit = 2.0 / 3.0 - a;
      if (std::abs(limit) <= 1e-12) limit = 0.0;
      const double s = c / (c + u);
      return limit + a * s * (2.0 - s);
    }
    case StructuralKind::PowerSum: {
      double s = 0.0;
      for (const auto& t : terms_) {
        s += t.coefficient * (5.0 / 3.0 - t.exponent) * std::pow(z, t.exponent - 1.0);
      }
      return s;
    }
  }
  return 0.0;
}

bool StructuralFunction::entropy_tail_converges() const {
  switch (kind_) {
    case StructuralKind::Ideal:
      return false;
    case StructuralKind::Degenerate: {
      // q(Z) → 2/3 - (2/5) κ_deg Z_c^{2/3}; the tail integral of q/Z is finite iff that limit is 0.
      const double limit = 2.0 / 3.0 - 0.4 * kappa_deg_ * std::pow(z_c_, 2.0 / 3.0);
      return std::abs(limit) <= 1e-12;
    }
    case StructuralKind::PowerSum:
      return std::all_of(terms_.begin(), terms_.end(), [](const PowerTerm& t) {
        return t.exponent < 1.0 || t.coefficient * (5.0 / 3.0 - t.exponent) == 0.0;
      });
  }
  return false;
}

std::string StructuralFunction::name() const {
  switch (kind_) {
    case StructuralKind::Ideal:
      return "ideal";
    case StructuralKind::Degenerate:
      return "degenerate";
    case StructuralKind::PowerSum:
      return "power_sum";
  }
  return "unknown";
}

double TransportLaws::kappa(double theta) const { return kappa0 * (1.0 + std::pow(theta, beta_cond)); }

// ---------------------------------------------------------------------------
// GasModel

namespace {

constexpr double kQuadTol = 1e-13;

// ∫_a^b q(e^t) dt, the log-variable form of ∫ q(Z)/Z dZ.
double integrate_q(const StructuralFunction& p, double a, double b) {
  double err = 0.0;
  auto f = [&p](double t) { return p.heat_capacity_ratio(std::exp(t)); };
  double v = 0.0;
  if (std::isinf(b)) {
    boost::math::quadrature::exp_sinh<double> tail;
    v = tail.integrate(f, a, b, kQuadTol, &err);
  } else {
    v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 12, kQuadTol, &err);
  }
  if (!std::isfinite(v) || err > 1e-9 * (1.0 + std::abs(v))) {
    throw NumericalError("entropy quadrature did not converge", errc::kNonConvergence);
  }
  return v;
}

}  // namespace

GasModel::GasModel(StructuralFunction structural, double radiation_a, TransportLaws transport, double c_bound)
    : structural_(std::move(structural)),
      radiation_a_(radiation_a),
      transport_(transport),
      c_bound_(c_bound),
      tail_converges_(structural_.entropy_tail_converges()),
      entropy_at_one_(0.0) {
  if (!(radiation_a_ >= 0.0)) throw ValidationError("radiation constant must be nonnegative");
  if (!(c_bound_ > 0.0)) throw ValidationError("c_bound must be positive");
  if (tail_converges_) {
    entropy_at_one_ = 1.5 * integrate_q(structural_, 0.0, std::numeric_limits<double>::infinity());
  }
}

GasModel GasModel::ideal(double radiation_a, TransportLaws transport) {
  return GasModel(StructuralFunction::ideal(), radiation_a, transport);
}

GasModel GasModel::degenerate(double kappa_deg, double z_c, double radiation_a, TransportLaws transport) {
  return GasModel(StructuralFunction::degenerate(kappa_deg, z_c), radiation_a, transport);
}

double GasModel::entropy_profile(double z) const {
  if (!(z > 0.0) || !std::isfinite(z)) throw ValidationError("entropy profile needs Z > 0");
  if (structural_.kind() == StructuralKind::Ideal) {
    // q ≡ 2/3: the quadrature reduces to -ln Z exactly.
    return entropy_at_one_ - std::log(z);
  }
  return entropy_at_one_ - 1.5 * integrate_q(structural_, 0.0, std::log(z));
}

// ---------------------------------------------------------------------------
// State functions

double pressure(const GasModel& model, double rho, double theta) {
  require_state(rho, theta, false);
  const double z = zeta_arg(rho, theta);
  return std::pow(theta, 2.5) * model.structural().value(z) + model.radiation_constant() / 3.0 * std::pow(theta, 4);
}

double internal_energy(const GasModel& model, double rho, double theta) {
  require_state(rho, theta, true);
  const double z = zeta_arg(rho, theta);
  return 1.5 * std::pow(theta, 2.5) / rho * model.structural().value(z) +
         model.radiation_constant() / rho * std::pow(theta, 4);
}

double entropy(const GasModel& model, double rho, double theta) {
  require_state(rho, theta, true);
  const double z = zeta_arg(rho, theta);
  return model.entropy_profile(z) + 4.0 * model.radiation_constant() / 3.0 * std::pow(theta, 3) / rho;
}

TransportCoefficients transport_coefficients(const GasModel& model, double theta) {
  require_finite(theta, "temperature");
  if (theta <= 0.0) throw ValidationError("temperature must be positive");
  const auto& t = model.transport();
  return {t.mu(theta), t.eta(theta), t.kappa(theta)};
}

DerivedCoefficients derived_coefficients(const GasModel& model, const ReferenceState& ref) {
  const double rho = ref.rho_bar;
  const double theta = ref.theta_bar;
  require_state(rho, theta, true);
  const auto& p = model.structural();
  const double a = model.radiation_constant();
  const double z = zeta_arg(rho, theta);
  const double q = p.heat_capacity_ratio(z);
  const double ds_dz = -1.5 * q / z;

  DerivedCoefficients d;
  d.p_rho = theta * p.derivative(z);
  d.p_theta = 1.5 * std::pow(theta, 1.5) * z * q + 4.0 * a / 3.0 * std::pow(theta, 3);
  d.c_v = 2.25 * q + 4.0 * a * std::pow(theta, 3) / rho;
  d.s_rho = ds_dz / std::pow(theta, 1.5) - 4.0 * a / 3.0 * std::pow(theta, 3) / (rho * rho);
  d.s_theta = 2.25 * q / theta + 4.0 * a * theta * theta / rho;

  if (!(d.p_rho > 0.0)) {
    throw ValidationError("thermodynamic stability violated: dp/drho <= 0 at the reference state",
                          errc::kConstraint);
  }
  if (!(d.c_v > 0.0)) {
    throw ValidationError("thermodynamic stability violated: c_v <= 0 at the reference state",
                          errc::kConstraint);
  }
  d.alpha = d.p_theta / (rho * d.p_rho);
  d.c_p = d.c_v + theta / (rho * rho) * d.p_theta * d.p_theta / d.p_rho;
  return d;
}

RelativeEnergyParts relative_energy_parts(const GasModel& model, const FluidPointState& state,
                                          const FluidPointState& comparison) {
  const double r = comparison.rho;
  const double big_theta = comparison.theta;
  if (!(r > 0.0) || !(big_theta > 0.0) || !std::isfinite(r) || !std::isfinite(big_theta)) {
    throw ValidationError("comparison state needs positive density and temperature");
  }
  require_state(state.rho, state.theta, false);

  RelativeEnergyParts out;
  double du2 = 0.0;
  for (int c = 0; c < 3; ++c) {
    const double d = state.u[c] - comparison.u[c];
    du2 += d * d;
  }
  out.kinetic = 0.5 * state.rho * du2;

  const double e_r = internal_energy(model, r, big_theta);
  const double s_r = entropy(model, r, big_theta);
  const double p_r = pressure(model, r, big_theta);
  // ρe and ρs have finite limits as ρ → 0.
  double rho_e = 0.0;
  double rho_s = 0.0;
  if (state.rho > 0.0) {
    rho_e = state.rho * internal_energy(model, state.rho, state.theta);
    rho_s = state.rho * entropy(model, state.rho, state.theta);
  } else {
    rho_e = model.radiation_constant() * std::pow(state.theta, 4);
    rho_s = 4.0 * model.radiation_constant() / 3.0 * std::pow(state.theta, 3);
  }
  const double chem = e_r - big_theta * s_r + p_r / r;
  out.thermostatic = rho_e - big_theta * (rho_s - r * s_r) - chem * (state.rho - r) - r * e_r;
  return out;
}

double relative_energy(const GasModel& model, double epsilon, const FluidPointState& state,
                       const FluidPointState& comparison) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ValidationError("epsilon must be positive");
  const auto parts = relative_energy_parts(model, state, comparison);
  return parts.kinetic + parts.thermostatic / (epsilon * epsilon);
}

double GibbsResidual::relative_theta() const { return scale_theta > 0.0 ? std::abs(res_theta) / scale_theta : std::abs(res_theta); }
double GibbsResidual::relative_rho() const { return scale_rho > 0.0 ? std::abs(res_rho) / scale_rho : std::abs(res_rho); }

GibbsResidual gibbs_residual(const GasModel& model, double rho, double theta, double h) {
  require_state(rho, theta, true);
  if (!(h > 0.0)) throw ValidationError("finite-difference step must be positive");
  if (h > 0.1 * std::min(rho, theta)) {
    throw ValidationError("finite-difference step too large relative to (rho, theta)");
  }
  const double ds_dtheta = (entropy(model, rho, theta + h) - entropy(model, rho, theta - h)) / (2.0 * h);
  const double de_dtheta =
      (internal_energy(model, rho, theta + h) - internal_energy(model, rho, theta - h)) / (2.0 * h);
  const double ds_drho = (entropy(model, rho + h, theta) - entropy(model, rho - h, theta)) / (2.0 * h);
  const double de_drho = (internal_energy(model, rho + h, theta) - internal_energy(model, rho - h, theta)) / (2.0 * h);
  const double p_over = pressure(model, rho, theta) / (rho * rho);

  GibbsResidual r;
  r.res_theta = theta * ds_dtheta - de_dtheta;
  r.res_rho = theta * ds_drho - de_drho + p_over;
  r.scale_theta = std::abs(theta * ds_dtheta) + std::abs(de_dtheta);
  r.scale_rho = std::abs(theta * ds_drho) + std::abs(de_drho) + std::abs(p_over);
  return r;
}

// ---------------------------------------------------------------------------
// Hypotheses

const HypothesisCheck& HypothesisReport::find(const std::string& id) const {
  for (const auto& c : checks) {
    if (c.id == id) return c;
  }
  throw ValidationError("no hypothesis check named " + id);
}

bool HypothesisReport::required_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const HypothesisCheck& c) { return c.flag_only || c.passed; });
}

std::string HypothesisReport::to_text() const {
  std::ostringstream os;
  os.precision(6);
  for (const auto& c : checks) {
    os << (c.passed ? "PASS" : (c.flag_only ? "FLAG" : "FAIL")) << "  " << c.id << "  " << c.description;
    if (!c.passed) os << "  [witness " << c.witness << "]";
    if (!c.detail.empty()) os << "  " << c.detail;
    os << '\n';
  }
  return os.str();
}

namespace {
HypothesisCheck make_check(std::string id, std::string description) {
  HypothesisCheck c;
  c.id = std::move(id);
  c.description = std::move(description);
  return c;
}
}  // namespace

HypothesisReport check_hypotheses(const GasModel& model, double z_max, int n_samples, const ReferenceState& ref) {
  if (!(z_max > 0.0) || n_samples < 2) throw ValidationError("check_hypotheses needs z_max > 0 and n_samples >= 2");
  const auto& p = model.structural();
  HypothesisReport report;

  std::vector<double> zs;
  zs.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 1; i <= n_samples; ++i) {
    const double s = static_cast<double>(i) / n_samples;
    zs.push_back(z_max * s * s);
  }

  {
    HypothesisCheck c = make_check("w10.P0", "P(0) = 0");
    const double p0 = p.value(0.0);
    c.passed = std::abs(p0) <= 1e-14;
    c.witness = 0.0;
    if (!c.passed) c.detail = "P(0) = " + std::to_string(p0);
    report.checks.push_back(c);
  }
  {
    HypothesisCheck c = make_check("w10.monotone", "P'(Z) > 0");
    for (double z : zs) {
      const double d = p.derivative(z);
      if (!(d > 0.0)) {
        c.passed = false;
        c.witness = z;
        c.detail = "P'(Z) = " + std::to_string(d);
        break;
      }
    }
    report.checks.push_back(c);
  }
  {
    HypothesisCheck c = make_check("w10.cv_bounds", "0 < ((5/3)P - P'Z)/Z <= c");
    double qmax = 0.0;
    for (double z : zs) {
      const double q = p.heat_capacity_ratio(z);
      qmax = std::max(qmax, q);
      if (!(q > 0.0) || q > model.c_bound()) {
        c.passed = false;
        c.witness = z;
        c.detail = "ratio = " + std::to_string(q);
        break;
      }
    }
    if (c.passed) c.detail = "max ratio " + std::to_string(qmax);
    report.checks.push_back(c);
  }
  {
    HypothesisCheck c = make_check("w13.entropy_sign", "S'(Z) < 0");
    for (double z : zs) {
      const double h = 1e-4 * z;
      double ds = 0.0;
      try {
        ds = model.entropy_profile(z + h) - model.entropy_profile(z - h);
      } catch (const Error& e) {
        c.passed = false;
        c.witness = z;
        c.detail = e.what();
        break;
      }
      if (!(ds < 0.0)) {
        c.passed = false;
        c.witness = z;
        c.detail = "entropy not decreasing";
        break;
      }
    }
    report.checks.push_back(c);
  }
  {
    HypothesisCheck c = make_check("w14.entropy_limit", "S(Z) -> 0 as Z -> infinity");
    c.flag_only = true;
    c.passed = model.entropy_normalized_at_infinity();
    c.witness = z_max;
    try {
      c.detail = "S(z_max) = " + std::to_string(model.entropy_profile(z_max)) +
                 (c.passed ? "" : "; normalized by S(1) = 0");
    } catch (const Error& e) {
      c.detail = e.what();
    }
    report.checks.push_back(c);
  }
  {
    HypothesisCheck c = make_check("w14a.liminf", "min over [z_max/2, z_max] of P(Z)/Z > 1e-8");
    double m = std::numeric_limits<double>::infinity();
    double witness = z_max;
    for (int i = 0; i <= n_samples; ++i) {
      const double z = 0.5 * z_max * (1.0 + static_cast<double>(i) / n_samples);
      const double ratio = p.value(z) / z;
      if (ratio < m) {
        m = ratio;
        witness = z;
      }
    }
    c.passed = m > 1e-8;
    c.witness = witness;
    c.detail = "min ratio " + std::to_string(m);
    report.checks.push_back(c);
  }
  {
    HypothesisCheck c = make_check("w16.transport", "transport laws within their growth bounds, beta > 6");
    const auto& t = model.transport();
    if (!(t.beta_cond > 6.0)) {
      c.passed = false;
      c.detail = "conductivity exponent " + std::to_string(t.beta_cond) + " <= 6";
    }
    double mu_lo = std::numeric_limits<double>::infinity();
    double dmu_hi = 0.0;
    double eta_lo = std::numeric_limits<double>::infinity();
    double eta_hi = 0.0;
    double k_lo = std::numeric_limits<double>::infinity();
    double k_hi = 0.0;
    for (int i = 0; i <= n_samples && c.passed; ++i) {
      const double th = 10.0 * static_cast<double>(i) / n_samples;
      const double mu_ratio = t.mu(th) / (1.0 + th);
      const double h = 1e-6 * std::max(1.0, th);
      const double dmu = std::abs(t.mu(th + h) - t.mu(std::max(0.0, th - h))) / (th + h - std::max(0.0, th - h));
      const double eta_ratio = t.eta(th) / (1.0 + th);
      const double k_ratio = t.kappa(th) / (1.0 + std::pow(th, t.beta_cond));
      mu_lo = std::min(mu_lo, mu_ratio);
      dmu_hi = std::max(dmu_hi, dmu);
      eta_lo = std::min(eta_lo, eta_ratio);
      eta_hi = std::max(eta_hi, eta_ratio);
      k_lo = std::min(k_lo, k_ratio);
      k_hi = std::max(k_hi, k_ratio);
      if (!(mu_ratio > 0.0) || !std::isfinite(dmu) || eta_ratio < 0.0 || !(k_ratio > 0.0) || !std::isfinite(k_ratio)) {
        c.passed = false;
        c.witness = th;
        c.detail = "bound violated";
      }
    }
    if (c.passed) {
      std::ostringstream os;
      os << "mu_lower " << mu_lo << ", |mu'| <= " << dmu_hi << ", eta in [" << eta_lo << ", " << eta_hi
         << "](1+theta), kappa in [" << k_lo << ", " << k_hi << "](1+theta^beta)";
      c.detail = os.str();
    }
    report.checks.push_back(c);
  }
  {
    HypothesisCheck c = make_check("ThSt.reference", "dp/drho > 0 and de/dtheta > 0 at the reference state");
    c.witness = ref.rho_bar;
    try {
      const auto d = derived_coefficients(model, ref);
      std::ostringstream os;
      os << "p_rho " << d.p_rho << ", c_v " << d.c_v;
      c.detail = os.str();
    } catch (const Error& e) {
      c.passed = false;
      c.detail = e.what();
    }
    report.checks.push_back(c);
  }
  return report;
}

}  // namespace cda::thermo
