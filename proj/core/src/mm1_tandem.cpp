#include "aoi/mm1_tandem.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "aoi/errors.hpp"

namespace aoi::mm1 {
namespace {

void require_stable(const Params& p) {
  p.validate();
  const double slack = p.stability_slack();
  if (!(slack > 0.0)) {
    std::ostringstream os;
    os << "unstable tandem: lambda(1/mu1 + 1/mu2) >= gamma/(alpha+gamma), "
          "slack "
       << slack;
    throw StabilityError(os.str(), slack);
  }
}

Complex h_star(const Params& p, Complex s) {
  return ((p.alpha + p.gamma) / p.gamma) * (p.mu1 / (s + p.mu1)) *
         (p.mu2 / (s + p.mu2));
}

}  // namespace

void Params::validate() const {
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!positive(lambda) || !positive(mu1) || !positive(mu2) ||
      !positive(gamma) || !(std::isfinite(alpha) && alpha >= 0.0)) {
    throw std::invalid_argument(
        "mm1 tandem: lambda, mu1, mu2, gamma must be positive and alpha >= 0");
  }
}

double Params::stability_slack() const {
  return gamma / (alpha + gamma) - lambda * (1.0 / mu1 + 1.0 / mu2);
}

Kernels kernels(const Params& p, Complex z1, Complex z2) {
  const double l = p.lambda, g = p.gamma, m1 = p.mu1, m2 = p.mu2;
  Kernels k;
  k.d = z1 * z2 * (l * (1.0 - z1) + g) + m1 * z2 * (z1 - z2) +
        m2 * z1 * (z2 - 1.0);
  k.a = m2 * z1 * (z2 - 1.0) + m1 * z2 * (z2 - z1);
  k.b = -k.a;
  k.c = m1 * z2 * (z2 - z1) + m2 * z1 * (z2 - 1.0);
  return k;
}

Complex f_curve(const Params& p, Complex z2) {
  const Complex den = p.mu1 + p.mu2 * (1.0 - z2);
  if (std::abs(den) == 0.0) throw DomainError("f(z2) evaluated at its pole");
  return p.mu1 * z2 * z2 / den;
}

double boundary_prob(const Params& p) {
  require_stable(p);
  return p.stability_slack();
}

TransformFn marginal_pgf_node2(const Params& p) {
  const double pi00 = boundary_prob(p);
  TransformFn fn;
  fn.eval = [p, pi00](Complex z2) {
    const Complex f = f_curve(p, z2);
    const Kernels k = kernels(p, f, z2);
    const Complex q = p.lambda * (1.0 - f) + p.gamma;
    const Complex den = k.d / q - p.gamma * f * z2;
    if (std::abs(den) == 0.0) throw DomainError("node-2 PGF denominator vanishes");
    return (k.c * pi00 / q) / den;
  };
  fn.domain_note = "node-2 marginal PGF in z2";
  fn.removable = {{1.0, Approach::FromBelow}};
  return fn;
}

TransformFn sojourn_lst(const Params& p) {
  const TransformFn pgf = marginal_pgf_node2(p);
  TransformFn fn;
  fn.eval = [pgf, lambda = p.lambda](Complex s) {
    return pgf(1.0 - s / lambda);
  };
  fn.domain_note = "sojourn time LST in s";
  fn.removable = {{0.0, Approach::FromAbove}};
  return fn;
}

TransformFn age_lst(const Params& p) {
  const TransformFn w = sojourn_lst(p);
  TransformFn fn;
  fn.eval = [w, p](Complex s) {
    const double l = p.lambda;
    const Complex ws = w(s);
    const Complex hs = h_star(p, s);
    return l * (ws - ws * hs + w(s + l) * s * hs / (s + l)) / s;
  };
  fn.domain_note = "age LST in s";
  fn.removable = {{0.0, Approach::FromAbove}};
  return fn;
}

double aaoi(const Params& p, const CalculusOptions& opts) {
  const double value = neg_derivative_at_zero(age_lst(p), opts);
  if (!std::isfinite(value) || value <= 0.0) {
    std::ostringstream os;
    os << "non-physical AAoI " << value << " extracted from the age LST";
    throw DomainError(os.str());
  }
  return value;
}

}  // namespace aoi::mm1
