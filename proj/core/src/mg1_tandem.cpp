#include "aoi/mg1_tandem.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "aoi/errors.hpp"

namespace aoi::mg1 {
namespace {

double require_stable(const Params& p) {
  p.validate();
  const double p0 = p.p0();
  if (!(p0 > 0.0)) {
    std::ostringstream os;
    os << "unstable chain: p0 = " << p0;
    throw StabilityError(os.str(), p0);
  }
  return p0;
}

Complex guarded_ratio(Complex num, Complex den, const char* what) {
  if (std::abs(den) == 0.0) throw DomainError(what);
  return num / den;
}

}  // namespace

void Params::validate() const {
  if (!(std::isfinite(lambda) && lambda > 0.0)) {
    throw std::invalid_argument("mg1 tandem: lambda must be positive");
  }
  if (stages.empty()) {
    throw std::invalid_argument("mg1 tandem: at least one stage required");
  }
  if (!(std::isfinite(alpha) && alpha >= 0.0)) {
    throw std::invalid_argument("mg1 tandem: alpha must be >= 0");
  }
}

double Params::p0() const {
  double total = 0.0;
  for (const auto& st : stages) total += st.mean();
  return 1.0 - lambda * (1.0 + alpha * repair.mean()) * total;
}

Complex phi(const Params& p, Complex s, Complex z) {
  const Complex arg = s + p.lambda - p.lambda * z;
  return arg + p.alpha - p.alpha * p.repair.lst(arg);
}

Complex h_star(const Params& p, Complex s) {
  Complex prod{1.0, 0.0};
  for (const auto& st : p.stages) prod *= st.lst(s);
  return prod;
}

TransformFn system_pgf(const Params& p) {
  const double p0 = require_stable(p);
  TransformFn fn;
  fn.eval = [p, p0](Complex z) {
    const Complex h = h_star(p, phi(p, 0.0, z));
    return guarded_ratio(h * (1.0 - z) * p0, h - z, "system PGF pole");
  };
  fn.domain_note = "system-size PGF in z";
  fn.removable = {{1.0, Approach::FromBelow}};
  return fn;
}

TransformFn sojourn_lst(const Params& p) {
  const double p0 = require_stable(p);
  TransformFn fn;
  fn.eval = [p, p0](Complex s) {
    const Complex u = s / p.lambda;
    const Complex h = h_star(p, phi(p, 0.0, 1.0 - u));
    return guarded_ratio(h * u * p0, h - 1.0 + u, "sojourn LST pole");
  };
  fn.domain_note = "sojourn time LST in s";
  fn.removable = {{0.0, Approach::FromAbove}};
  return fn;
}

TransformFn age_lst(const Params& p) {
  const double p0 = require_stable(p);
  const TransformFn w = sojourn_lst(p);
  TransformFn fn;
  fn.eval = [p, p0, w](Complex s) {
    const Complex hs = h_star(p, s);
    const Complex den = s + p.lambda * h_star(p, s + p.lambda);
    return w(s) - guarded_ratio(s * p0 * hs, den, "age LST pole");
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

}  // namespace aoi::mg1
