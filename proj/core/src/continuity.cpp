#include "entrocheck/continuity.hpp"

#include "entrocheck/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace entrocheck {

namespace {

std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double Correction::operator()(double x) const {
  const double y = std::max(argument_scale * x, 0.0);
  switch (form) {
    case CorrectionForm::Zero:
      return 0.0;
    case CorrectionForm::Linear:
      return coefficient * y;
    case CorrectionForm::BinaryEntropy:
      return coefficient * entrocheck::binary_entropy(std::min(y, 0.5));
    case CorrectionForm::Eta:
      return coefficient * entrocheck::eta(std::min(y, 1.0));
    case CorrectionForm::Sqrt:
      return coefficient * std::sqrt(y);
  }
  return 0.0;
}

std::string Correction::describe() const {
  std::ostringstream os;
  const char* g = "0";
  switch (form) {
    case CorrectionForm::Zero: return "0";
    case CorrectionForm::Linear: g = "x"; break;
    case CorrectionForm::BinaryEntropy: g = "H"; break;
    case CorrectionForm::Eta: g = "eta"; break;
    case CorrectionForm::Sqrt: g = "sqrt"; break;
  }
  os << coefficient << "*" << g << "(" << argument_scale << "x)";
  return os.str();
}

double ContinuitySpec::bound(double x, int d) const {
  return K * x * std::log2(static_cast<double>(d)) + correction(x);
}

void ContinuitySpec::validate() const {
  if (!(K >= 0.0)) throw std::invalid_argument("ContinuitySpec: K must be nonnegative");
  if (!(correction.coefficient >= 0.0) || !(correction.argument_scale > 0.0))
    throw std::invalid_argument("ContinuitySpec: correction coefficient/scale must be nonnegative/positive");
  if (correction(0.0) != 0.0) throw std::invalid_argument("ContinuitySpec: correction(0) must be 0");
  double upper = 0.5;
  if (correction.form == CorrectionForm::Eta)
    upper = std::min(upper, 1.0 / (std::numbers::e * correction.argument_scale));
  constexpr int kGrid = 512;
  double prev = 0.0;
  for (int i = 1; i <= kGrid; ++i) {
    const double v = correction(upper * i / kGrid);
    if (v < prev - 1e-15) throw std::invalid_argument("ContinuitySpec: correction is not nondecreasing");
    prev = v;
  }
}

ContinuitySpec transfer_constants(TransferDirection direction, const ContinuitySpec& spec) {
  ContinuitySpec out = spec;
  out.K = 2.0 * spec.K;
  if (direction == TransferDirection::RobustnessToContinuity) {
    out.correction.coefficient *= 2.0;
  } else {
    out.correction.argument_scale *= 2.0;
  }
  return out;
}

// ---------------------------------------------------------------------------

TalesWitness tales_decompose(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != rho2.dim()) throw std::invalid_argument("tales_decompose: dimension mismatch");
  const HermitianOperator delta = rho2 - rho1;
  const double eps = trace_norm(delta);
  if (eps > 1.0 + 1e-12) throw std::domain_error("tales_decompose: ||rho1 - rho2||_1 exceeds 1");

  const DensityMatrix omega = DensityMatrix::maximally_mixed(rho1.dims());
  if (eps < 1e-15) return {rho1, omega, omega, 0.0};

  const JordanDecomposition jd = jordan_decompose(delta);
  const double e = std::min(eps, 1.0);
  const double a = (1.0 - e) / e;
  const double b = (1.0 + e) / 2.0;
  const Matrix g1 = a * jd.positive.matrix() + b * omega.matrix();
  const Matrix g2 = a * jd.negative.matrix() + b * omega.matrix();
  const Matrix sigma = (1.0 - e) * rho1.matrix() + e * g1;
  return {DensityMatrix::normalized(sigma, rho1.dims()), DensityMatrix::normalized(g1, rho1.dims()),
          DensityMatrix::normalized(g2, rho1.dims()), eps};
}

double tales_residual(const TalesWitness& w, const DensityMatrix& rho1, const DensityMatrix& rho2) {
  const double e = w.epsilon;
  const Matrix r1 = w.sigma.matrix() - ((1.0 - e) * rho1.matrix() + e * w.gamma1.matrix());
  const Matrix r2 = w.sigma.matrix() - ((1.0 - e) * rho2.matrix() + e * w.gamma2.matrix());
  return std::max(trace_norm(HermitianOperator::from_hermitian_part(r1)),
                  trace_norm(HermitianOperator::from_hermitian_part(r2)));
}

// ---------------------------------------------------------------------------

BoundRecord make_record(long trial, int d, double eps, double lhs, double rhs, double slack) {
  BoundRecord r;
  r.trial = trial;
  r.d = d;
  r.eps = eps;
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.violated = r.margin < -slack;
  return r;
}

BoundRecord skipped_record(long trial, int d, double eps) {
  BoundRecord r;
  r.trial = trial;
  r.d = d;
  r.eps = eps;
  r.lhs = std::numeric_limits<double>::quiet_NaN();
  r.rhs = std::numeric_limits<double>::quiet_NaN();
  r.margin = std::numeric_limits<double>::quiet_NaN();
  r.skipped = true;
  return r;
}

void BoundReport::finalize() {
  std::stable_sort(records.begin(), records.end(),
                   [](const BoundRecord& a, const BoundRecord& b) { return a.trial < b.trial; });
}

BoundSummary BoundReport::summary() const {
  BoundSummary s;
  s.min_margin = std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    ++s.trials;
    if (r.skipped) {
      ++s.skipped;
      continue;
    }
    if (r.violated) ++s.violations;
    s.min_margin = std::min(s.min_margin, r.margin);
  }
  return s;
}

void BoundReport::write_csv(std::ostream& os) const {
  os << "trial,d,eps,lhs,rhs,margin,violated\n";
  for (const auto& r : records) {
    os << r.trial << ',' << r.d << ',' << fmt_double(r.eps) << ',' << fmt_double(r.lhs) << ','
       << fmt_double(r.rhs) << ',' << fmt_double(r.margin) << ',' << (r.violated ? 1 : 0) << '\n';
  }
}

std::string BoundReport::summary_json() const {
  const BoundSummary s = summary();
  std::ostringstream os;
  os << "{\"trials\":" << s.trials << ",\"violations\":" << s.violations << ",\"skipped\":" << s.skipped
     << ",\"min_margin\":" << (std::isfinite(s.min_margin) ? fmt_double(s.min_margin) : "null")
     << ",\"seed\":" << seed << ",\"slack\":" << fmt_double(slack) << "}";
  return os.str();
}

// ---------------------------------------------------------------------------

BoundRecord continuity_record(long trial, const Functional& f, const ContinuitySpec& spec,
                              const DensityMatrix& rho1, const DensityMatrix& rho2, double slack,
                              double domain_limit) {
  const int d = rho1.dim();
  const double eps = trace_norm_distance(rho1, rho2);
  if (eps > domain_limit) return skipped_record(trial, d, eps);
  const FunctionalValue f1 = f(rho1);
  const FunctionalValue f2 = f(rho2);
  if (f1.is_infinite || f2.is_infinite) return skipped_record(trial, d, eps);
  return make_record(trial, d, eps, std::abs(f1.value - f2.value), spec.bound(eps, d), slack);
}

BoundRecord robustness_record(long trial, const Functional& f, const ContinuitySpec& spec,
                              const DensityMatrix& rho1, const DensityMatrix& rho2, double delta,
                              double slack) {
  const int d = rho1.dim();
  const FunctionalValue base = f(rho1);
  const FunctionalValue mixed = f(mix(rho1, rho2, delta));
  if (base.is_infinite || mixed.is_infinite) return skipped_record(trial, d, delta);
  const double lhs = delta == 0.0 ? 0.0 : std::abs(mixed.value - base.value);
  return make_record(trial, d, delta, lhs, spec.bound(delta, d), slack);
}

namespace {

template <typename TrialFn>
BoundReport run_campaign(const RngSpec& sampler, const std::vector<Dims>& dims, const CampaignOptions& opts,
                         TrialFn&& trial_fn) {
  sampler.validate();
  if (opts.trials_per_dim < 1) throw std::invalid_argument("campaign: trials must be at least 1");
  BoundReport report;
  report.slack = opts.slack;
  report.seed = sampler.seed;
  const std::size_t total = dims.size() * static_cast<std::size_t>(opts.trials_per_dim);
  report.records.resize(total);
  parallel_for(total, [&](std::size_t k) {
    const Dims& dk = dims[k / static_cast<std::size_t>(opts.trials_per_dim)];
    Rng rng = make_rng(sampler.seed, k);
    report.records[k] = trial_fn(static_cast<long>(k), dk, rng);
  });
  report.finalize();
  return report;
}

}  // namespace

BoundReport check_asymptotic_continuity(const Functional& f, const ContinuitySpec& spec, const RngSpec& sampler,
                                        const std::vector<Dims>& dims, const CampaignOptions& opts) {
  spec.validate();
  return run_campaign(sampler, dims, opts, [&](long k, const Dims& dk, Rng& rng) {
    auto [r1, r2] = sample_pair(rng, sampler.measure, dk);
    return continuity_record(k, f, spec, r1, r2, opts.slack, opts.domain_limit);
  });
}

BoundReport check_robustness(const Functional& f, const ContinuitySpec& spec, const RngSpec& sampler,
                             const std::vector<Dims>& dims, const CampaignOptions& opts) {
  spec.validate();
  return run_campaign(sampler, dims, opts, [&](long k, const Dims& dk, Rng& rng) {
    const DensityMatrix r1 = sample_state(rng, sampler.measure, dk);
    const DensityMatrix r2 = sample_state(rng, sampler.measure, dk);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double delta = opts.domain_limit * (1.0 - u(rng));
    return robustness_record(k, f, spec, r1, r2, delta, opts.slack);
  });
}

}  // namespace entrocheck
