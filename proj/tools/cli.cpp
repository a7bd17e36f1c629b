#include "cli.hpp"

#include "entrocheck/arrowing.hpp"
#include "entrocheck/caratheodory.hpp"
#include "entrocheck/continuity.hpp"
#include "entrocheck/functionals.hpp"
#include "entrocheck/io.hpp"
#include "entrocheck/parallel.hpp"
#include "entrocheck/random.hpp"
#include "entrocheck/reldist.hpp"
#include "entrocheck/roof.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace entrocheck::cli {

using nlohmann::json;

namespace {

// Input problems that should end the run with kExitInputError.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Defaults {
  std::vector<int> dims;
  long trials;
};

const std::map<std::string, Defaults>& subcommand_defaults() {
  static const std::map<std::string, Defaults> table = {
      {"fannes", {{2, 3, 4, 5, 6, 7, 8}, 2000}}, {"tales", {{2, 3, 4, 5, 6}, 1000}},
      {"prop1", {{2, 3, 4}, 1000}},              {"reldist", {{2, 3, 4}, 100}},
      {"lemma2", {{2, 3}, 500}},                 {"donation", {{2}, 100}},
      {"arrow", {{2}, 1000}},                    {"cpl", {{2}, 20}},
      {"cback", {{2}, 20}},                      {"intrinsic", {{2}, 1}},
      {"roof", {{2}, 20}},                       {"ef", {{2}, 50}},
      {"roofgap", {{3}, 1}},                     {"reduce", {{2}, 500}},
  };
  return table;
}

// Effective settings after precedence resolution.
struct Settings {
  std::string subcommand;
  std::vector<int> dims;
  long trials;
  std::uint64_t seed;
  std::optional<std::string> functional;
  std::optional<double> K;
  std::optional<std::string> correction;
  int m;
  std::optional<int> restarts;
  std::optional<int> max_iterations;
  std::optional<std::string> state_path;
  std::optional<std::string> input_path;
  std::optional<std::string> out_csv;
  std::optional<std::string> out_json;

  json to_json() const {
    json j{{"subcommand", subcommand}, {"dims", dims}, {"trials", trials}, {"seed", seed}, {"m", m}};
    if (functional) j["functional"] = *functional;
    if (K) j["K"] = *K;
    if (correction) j["correction"] = *correction;
    if (restarts) j["restarts"] = *restarts;
    if (max_iterations) j["max_iter"] = *max_iterations;
    if (state_path) j["state"] = *state_path;
    if (input_path) j["input"] = *input_path;
    return j;
  }
};

struct Campaign {
  std::string name;
  double slack;
  BoundReport report;
};

struct Outcome {
  std::vector<Campaign> campaigns;
  json results = json::object();
};

Functional functional_or(const Settings& s, const std::string& fallback) {
  const std::string id = s.functional.value_or(fallback);
  auto f = functionals::by_name(id);
  if (!f) throw InputError("unknown functional '" + id + "'");
  return *f;
}

Correction parse_correction(const std::string& text) {
  double coefficient = 1.0;
  std::string form = text;
  if (const auto star = text.find('*'); star != std::string::npos) {
    try {
      coefficient = std::stod(text.substr(0, star));
    } catch (const std::exception&) {
      throw InputError("bad correction coefficient in '" + text + "'");
    }
    form = text.substr(star + 1);
  }
  if (form == "zero") return Correction::zero();
  if (form == "linear") return Correction::linear(coefficient);
  if (form == "H") return Correction::binary_entropy(coefficient);
  if (form == "eta") return Correction::eta(coefficient);
  if (form == "sqrt") return Correction::sqrt(coefficient);
  throw InputError("unknown correction form '" + form + "' (zero, linear, H, eta, sqrt)");
}

ArrowOptions arrow_options(const Settings& s, std::uint64_t seed) {
  ArrowOptions o;
  if (s.restarts) o.restarts = *s.restarts;
  if (s.max_iterations) o.max_iterations = *s.max_iterations;
  o.seed = seed;
  return o;
}

RelDistOptions reldist_options(const Settings& s, std::uint64_t seed) {
  RelDistOptions o;
  if (s.restarts) o.restarts = *s.restarts;
  if (s.max_iterations) o.max_iterations = *s.max_iterations;
  o.seed = seed;
  return o;
}

std::vector<Dims> square_dims(const std::vector<int>& ds) {
  std::vector<Dims> out;
  for (int d : ds) out.push_back({d});
  return out;
}

// Trials k = 0..count-1 with independent generators; deterministic regardless of threads.
template <typename Fn>
BoundReport run_trials(std::uint64_t seed, std::uint64_t stream, const std::vector<int>& dims, long per_dim,
                       double slack, Fn&& fn) {
  BoundReport report;
  report.slack = slack;
  report.seed = seed;
  const std::uint64_t base = derive_seed(seed, stream);
  const std::size_t total = dims.size() * static_cast<std::size_t>(per_dim);
  report.records.resize(total);
  parallel_for(total, [&](std::size_t k) {
    Rng rng = make_rng(base, k);
    report.records[k] = fn(static_cast<long>(k), dims[k / static_cast<std::size_t>(per_dim)], rng);
  });
  report.finalize();
  return report;
}

DensityMatrix load_state(const std::string& path) { return io::state_from_json(io::read_file(path)); }

// ---------------------------------------------------------------------------
// Subcommands

Outcome run_fannes(const Settings& s) {
  const ContinuitySpec spec{s.K.value_or(1.0), parse_correction(s.correction.value_or("eta"))};
  const Functional f = functional_or(s, "S");
  CampaignOptions opts{s.trials, kBoundSlack, 0.5};
  const RngSpec sampler{s.seed, Perturbation{0.25}};
  return {{{"fannes", opts.slack, check_asymptotic_continuity(f, spec, sampler, square_dims(s.dims), opts)}}};
}

Outcome run_tales(const Settings& s) {
  constexpr double kResidualTol = 1e-10;
  BoundReport r = run_trials(s.seed, 0, s.dims, s.trials, 0.0, [](long k, int d, Rng& rng) {
    auto [r1, r2] = sample_pair(rng, Perturbation{0.5}, {d});
    try {
      const TalesWitness w = tales_decompose(r1, r2);
      return make_record(k, d, w.epsilon, tales_residual(w, r1, r2), kResidualTol, 0.0);
    } catch (const std::invalid_argument&) {
      // A filler state failed validation.
      BoundRecord rec = make_record(k, d, trace_norm_distance(r1, r2), 1.0, kResidualTol, 0.0);
      rec.violated = true;
      return rec;
    }
  });
  return {{{"tales", 0.0, std::move(r)}}};
}

Outcome run_prop1(const Settings& s) {
  const Functional f = functional_or(s, "S");
  const ContinuitySpec robust{s.K.value_or(1.0), parse_correction(s.correction.value_or("H"))};
  const ContinuitySpec fannes{1.0, Correction::eta()};
  const auto dims = square_dims(s.dims);
  CampaignOptions opts{s.trials, kBoundSlack, 0.5};
  const auto stream = [&](std::uint64_t k) { return RngSpec{derive_seed(s.seed, k), Perturbation{0.25}}; };
  Outcome o;
  o.campaigns.push_back({"robustness", opts.slack, check_robustness(f, robust, stream(0), dims, opts)});
  o.campaigns.push_back(
      {"robustness->continuity", opts.slack,
       check_asymptotic_continuity(f, transfer_constants(TransferDirection::RobustnessToContinuity, robust),
                                   stream(1), dims, opts)});
  o.campaigns.push_back({"continuity", opts.slack, check_asymptotic_continuity(f, fannes, stream(2), dims, opts)});
  o.campaigns.push_back(
      {"continuity->robustness", opts.slack,
       check_robustness(f, transfer_constants(TransferDirection::ContinuityToRobustness, fannes), stream(3), dims,
                        opts)});
  return o;
}

ConvexSetSpec random_hull(std::uint64_t seed, int d, int count) {
  Rng rng = make_rng(seed, static_cast<std::uint64_t>(d));
  std::vector<DensityMatrix> gens;
  for (int i = 0; i < count; ++i) gens.push_back(random_hs_state(rng, {d}));
  return ConvexSetSpec(std::move(gens));
}

Outcome run_reldist(const Settings& s) {
  Outcome o;
  if (s.state_path) {
    if (!s.input_path) throw InputError("reldist with --state also needs --input (convex set JSON)");
    const DensityMatrix rho = load_state(*s.state_path);
    const ConvexSetSpec set = io::convex_set_from_json(io::read_file(*s.input_path));
    const RelDistResult r = rel_entropy_distance(rho, set, reldist_options(s, s.seed));
    o.results["reldist"] = json::parse(io::to_json(r));
    return o;
  }
  constexpr double kTol = 1e-6;
  BoundReport r = run_trials(s.seed, 0, s.dims, s.trials, 0.0, [&](long k, int d, Rng& rng) {
    const DensityMatrix rho = random_hs_state(rng, {d});
    const ConvexSetSpec set({DensityMatrix::maximally_mixed({d})});
    const RelDistResult res = rel_entropy_distance(rho, set, reldist_options(s, derive_seed(s.seed, k)));
    const double closed = std::log2(static_cast<double>(d)) - von_neumann_entropy(rho);
    return make_record(k, d, 0.0, std::abs(res.value - closed), kTol, 0.0);
  });
  o.campaigns.push_back({"singleton-closed-form", 0.0, std::move(r)});
  return o;
}

Outcome run_lemma2(const Settings& s) {
  std::map<int, ConvexSetSpec> hulls;
  for (int d : s.dims) hulls.emplace(d, random_hull(derive_seed(s.seed, 99), d, 20));
  BoundReport r = run_trials(s.seed, 0, s.dims, s.trials, kOptimizerSlack, [&](long k, int d, Rng& rng) {
    auto [r1, r2] = sample_pair(rng, HilbertSchmidtMixed{}, {d});
    return check_lemma2(r1, r2, hulls.at(d), reldist_options(s, derive_seed(s.seed, k)), kOptimizerSlack, k);
  });
  return {{{"lemma2", kOptimizerSlack, std::move(r)}}};
}

Outcome run_donation(const Settings& s) {
  std::map<int, ConvexSetSpec> hulls;
  for (int d : s.dims) hulls.emplace(d, random_hull(derive_seed(s.seed, 99), d, 10));
  BoundReport r = run_trials(s.seed, 0, s.dims, s.trials, kOptimizerSlack, [&](long k, int d, Rng& rng) {
    const RealVector w = random_simplex_point(rng, 5);
    std::vector<Ensemble::Member> members;
    for (int i = 0; i < 5; ++i) members.push_back({w(i), random_hs_state(rng, {d})});
    return check_donation_inequality(Ensemble(std::move(members)), hulls.at(d),
                                     reldist_options(s, derive_seed(s.seed, k)), kOptimizerSlack, k);
  });
  return {{{"donation", kOptimizerSlack, std::move(r)}}};
}

Outcome run_arrow(const Settings& s) {
  Outcome o;
  const Functional f = functional_or(s, "S");
  if (s.state_path) {
    const DensityMatrix rho = load_state(*s.state_path);
    const ArrowResult r = arrow_down(rho, f, s.m, arrow_options(s, s.seed));
    o.results["arrow_down"] = json::parse(io::to_json(r));
    return o;
  }
  constexpr double kFactSlack = 1e-10;
  constexpr double kSwapSlack = 1e-6;
  std::vector<TraceDistanceFacts> facts(s.dims.size() * static_cast<std::size_t>(s.trials));
  std::vector<BoundRecord> swaps(facts.size());
  std::vector<int> dim_of(facts.size());
  const ContinuitySpec per_outcome{1.0, Correction::binary_entropy(1.0)};
  run_trials(s.seed, 0, s.dims, s.trials, 0.0, [&](long k, int d, Rng& rng) {
    auto [rho, sigma] = sample_pair(rng, HilbertSchmidtMixed{}, {d, d});
    std::uniform_int_distribution<int> outcomes(1, d * d + 1);
    const Povm povm = random_povm(rng, d, outcomes(rng));
    facts[static_cast<std::size_t>(k)] = measurement_facts(rho, sigma, povm);
    swaps[static_cast<std::size_t>(k)] = measurement_swap_record(k, rho, sigma, povm, f, per_outcome, kSwapSlack);
    dim_of[static_cast<std::size_t>(k)] = d;
    return BoundRecord{};
  });
  BoundReport fact1, fact2, swap;
  fact1.slack = fact2.slack = kFactSlack;
  swap.slack = kSwapSlack;
  fact1.seed = fact2.seed = swap.seed = s.seed;
  const long n = static_cast<long>(facts.size());
  for (long k = 0; k < n; ++k) {
    const auto& t = facts[static_cast<std::size_t>(k)];
    const int d = dim_of[static_cast<std::size_t>(k)];
    fact1.records.push_back(make_record(k, d, t.epsilon, t.outcome_distance, t.epsilon, kFactSlack));
    fact2.records.push_back(
        make_record(n + k, d, t.epsilon, t.weighted_conditional_distance, 2.0 * t.epsilon, kFactSlack));
    BoundRecord sw = swaps[static_cast<std::size_t>(k)];
    sw.trial = 2 * n + k;
    swap.records.push_back(sw);
  }
  o.campaigns.push_back({"fact1", kFactSlack, std::move(fact1)});
  o.campaigns.push_back({"fact2", kFactSlack, std::move(fact2)});
  o.campaigns.push_back({"measurement-swap", kSwapSlack, std::move(swap)});
  return o;
}

Outcome run_cpl(const Settings& s) {
  Outcome o;
  const Functional f = functional_or(s, "S");
  if (s.state_path) {
    const DensityMatrix rho = load_state(*s.state_path);
    o.results["arrow_down_cpl"] = json::parse(io::to_json(arrow_down_cpl(rho, f, s.m, arrow_options(s, s.seed))));
    return o;
  }
  constexpr double kSlack = 1e-8;
  // Soundness chain: arrow_down <= arrow_down_cpl <= f(Tr_E rho).
  std::vector<BoundRecord> chain(s.dims.size() * static_cast<std::size_t>(s.trials));
  BoundReport upper = run_trials(s.seed, 0, s.dims, s.trials, kSlack, [&](long k, int d, Rng& rng) {
    const DensityMatrix rho = random_hs_state(rng, {d, d});
    const ArrowOptions opts = arrow_options(s, derive_seed(s.seed, k));
    const double cpl = arrow_down_cpl(rho, f, s.m, opts).value;
    const double general = arrow_down(rho, f, s.m, opts).value;
    chain[static_cast<std::size_t>(k)] = make_record(k, d, 0.0, general, cpl, kSlack);
    return make_record(k, d, 0.0, cpl, f(partial_trace(rho, {0})).value, kSlack);
  });
  BoundReport lower;
  lower.slack = kSlack;
  lower.seed = s.seed;
  const long n = static_cast<long>(chain.size());
  for (long k = 0; k < n; ++k) {
    chain[static_cast<std::size_t>(k)].trial = n + k;
    lower.records.push_back(chain[static_cast<std::size_t>(k)]);
  }
  o.campaigns.push_back({"cpl<=trivial", kSlack, std::move(upper)});
  o.campaigns.push_back({"general<=cpl", kSlack, std::move(lower)});
  return o;
}

Outcome run_cback(const Settings& s) {
  Outcome o;
  if (s.state_path) {
    const DensityMatrix rho = load_state(*s.state_path);
    o.results["classical_correlation"] =
        json::parse(io::to_json(classical_correlation_backward(rho, s.m, arrow_options(s, s.seed))));
    return o;
  }
  constexpr double kSlack = 1e-8;
  BoundReport r = run_trials(s.seed, 0, s.dims, s.trials, kSlack, [&](long k, int d, Rng& rng) {
    const DensityMatrix rho = random_hs_state(rng, {d, d});
    const double c = classical_correlation_backward(rho, s.m, arrow_options(s, derive_seed(s.seed, k))).value;
    const double sa = von_neumann_entropy(partial_trace(rho, {0}));
    BoundRecord rec = make_record(k, d, 0.0, c, sa, kSlack);
    if (c < -kSlack) rec.violated = true;
    return rec;
  });
  o.campaigns.push_back({"0<=C<=S(A)", kSlack, std::move(r)});
  return o;
}

ClassicalJoint product_joint(const std::vector<double>& pxy, int nx, int ny, const std::vector<double>& pe) {
  const int ne = static_cast<int>(pe.size());
  std::vector<double> p(static_cast<std::size_t>(nx) * ny * ne);
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y)
      for (int e = 0; e < ne; ++e)
        p[(static_cast<std::size_t>(x) * ny + y) * ne + e] =
            pxy[static_cast<std::size_t>(x) * ny + y] * pe[static_cast<std::size_t>(e)];
  return ClassicalJoint(nx, ny, ne, std::move(p));
}

Outcome run_intrinsic(const Settings& s) {
  Outcome o;
  IntrinsicOptions opts;
  if (s.restarts) opts.restarts = *s.restarts;
  if (s.max_iterations) opts.max_iterations = *s.max_iterations;
  opts.seed = s.seed;
  if (s.input_path) {
    const ClassicalJoint j = io::joint_from_json(io::read_file(*s.input_path));
    o.results["intrinsic"] = json::parse(io::to_json(intrinsic_information(j, opts)));
    return o;
  }
  constexpr double kTol = 1e-6;
  BoundReport r;
  r.slack = 0.0;
  r.seed = s.seed;
  // X, Y uniform independent bits, E = X xor Y.
  std::vector<double> xor_p(8, 0.0);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) xor_p[static_cast<std::size_t>((x * 2 + y) * 2 + (x ^ y))] = 0.25;
  const ClassicalJoint xor_joint(2, 2, 2, xor_p);
  r.records.push_back(make_record(0, 2, 0.0, intrinsic_information(xor_joint, opts).value, kTol, 0.0));
  // E independent of a correlated (X, Y).
  Rng rng = make_rng(s.seed, 0);
  const RealVector pxy = random_simplex_point(rng, 4);
  const RealVector pe = random_simplex_point(rng, 3);
  const ClassicalJoint indep = product_joint({pxy.data(), pxy.data() + 4}, 2, 2, {pe.data(), pe.data() + 3});
  r.records.push_back(make_record(1, 2, 0.0,
                                  std::abs(intrinsic_information(indep, opts).value - mutual_information(indep)),
                                  kTol, 0.0));
  // X = Y uniform, E a copy of X.
  const ClassicalJoint copy(2, 2, 2, {0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5});
  r.records.push_back(make_record(2, 2, 0.0, intrinsic_information(copy, opts).value, kTol, 0.0));
  o.campaigns.push_back({"canonical-triples", 0.0, std::move(r)});
  return o;
}

Outcome run_roof(const Settings& s) {
  Outcome o;
  const Functional f = functional_or(s, "S_A");
  if (s.state_path) {
    const DensityMatrix rho = load_state(*s.state_path);
    const ArrowOptions opts = arrow_options(s, s.seed);
    o.results["pure_roof"] = json::parse(io::to_json(pure_convex_roof(rho, f, s.m, opts)));
    o.results["mixed_roof"] = json::parse(io::to_json(mixed_convex_roof(rho, f, 0, opts)));
    return o;
  }
  constexpr double kSlack = 1e-8;
  std::vector<BoundRecord> upper(s.dims.size() * static_cast<std::size_t>(s.trials));
  BoundReport lower = run_trials(s.seed, 0, s.dims, s.trials, kSlack, [&](long k, int d, Rng& rng) {
    std::uniform_int_distribution<int> rank(1, d * d);
    const DensityMatrix rho = random_induced_state(rng, {d, d}, rank(rng));
    const ArrowOptions opts = arrow_options(s, derive_seed(s.seed, k));
    const double pure = pure_convex_roof(rho, f, s.m, opts).value;
    const double mixed = mixed_convex_roof(rho, f, 0, opts).value;
    const double eigen = ensemble_average(eigen_ensemble(rho), f);
    upper[static_cast<std::size_t>(k)] = make_record(k, d, 0.0, pure, eigen, kSlack);
    return make_record(k, d, 0.0, mixed, pure, kSlack);
  });
  BoundReport second;
  second.slack = kSlack;
  second.seed = s.seed;
  const long n = static_cast<long>(upper.size());
  for (long k = 0; k < n; ++k) {
    upper[static_cast<std::size_t>(k)].trial = n + k;
    second.records.push_back(upper[static_cast<std::size_t>(k)]);
  }
  o.campaigns.push_back({"mixed<=pure", kSlack, std::move(lower)});
  o.campaigns.push_back({"pure<=eigen", kSlack, std::move(second)});
  return o;
}

Outcome run_ef(const Settings& s) {
  Outcome o;
  if (s.state_path) {
    const DensityMatrix rho = load_state(*s.state_path);
    o.results["entanglement_of_formation"] =
        json::parse(io::to_json(entanglement_of_formation(rho, s.m, arrow_options(s, s.seed))));
    return o;
  }
  BoundReport r = run_trials(s.seed, 0, s.dims, s.trials, kOptimizerSlack, [&](long k, int d, Rng& rng) {
    auto [r1, r2] = sample_pair(rng, Perturbation{0.25}, {d, d});
    return roof_continuity_record(k, r1, r2, arrow_options(s, derive_seed(s.seed, k)), kOptimizerSlack);
  });
  o.campaigns.push_back({"roof-continuity", kOptimizerSlack, std::move(r)});
  return o;
}

Outcome run_roofgap(const Settings& s) {
  constexpr double kPureTol = 1e-2;
  constexpr double kBoundSlackBits = 1e-9;
  Outcome o;
  BoundReport pure_report, mixed_report;
  pure_report.slack = kPureTol;
  mixed_report.slack = kBoundSlackBits;
  pure_report.seed = mixed_report.seed = s.seed;
  json records = json::array();
  long k = 0;
  for (int d : s.dims) {
    const RoofGapRecord g = roof_gap_antisymmetric(d, arrow_options(s, derive_seed(s.seed, static_cast<std::uint64_t>(d))));
    records.push_back({{"d", g.d},
                       {"pure_roof_IM", g.pure_roof},
                       {"twice_EF", g.twice_formation},
                       {"mixed_roof_IM", g.mixed_roof},
                       {"mixed_upper_bound", g.mixed_upper_bound},
                       {"gap", g.gap}});
    // Pure roof of I_M is 2 E_F; both routes should agree within the tolerance.
    pure_report.records.push_back(
        make_record(k, d * d, 0.0, std::abs(g.pure_roof - g.twice_formation), 0.0, kPureTol));
    mixed_report.records.push_back(make_record(k, d * d, 0.0, g.mixed_roof, g.mixed_upper_bound, kBoundSlackBits));
    ++k;
  }
  o.results["roofgap"] = std::move(records);
  o.campaigns.push_back({"pure=2EF", kPureTol, std::move(pure_report)});
  o.campaigns.push_back({"mixed<=log2(2d/(d-1))", kBoundSlackBits, std::move(mixed_report)});
  return o;
}

Outcome run_reduce(const Settings& s) {
  Outcome o;
  if (s.input_path) {
    const ValuedEnsemble ve = io::valued_ensemble_from_json(io::read_file(*s.input_path));
    o.results["reduced"] = json::parse(io::to_json(reduce_ensemble(ve)));
    return o;
  }
  constexpr double kTol = 1e-10;
  const Functional f = functional_or(s, "S");
  std::vector<BoundRecord> sizes(s.dims.size() * static_cast<std::size_t>(s.trials));
  BoundReport preserved = run_trials(s.seed, 0, s.dims, s.trials, 0.0, [&](long k, int d, Rng& rng) {
    const RealVector w = random_simplex_point(rng, 20);
    std::vector<Ensemble::Member> members;
    std::vector<double> values;
    for (int i = 0; i < 20; ++i) {
      members.push_back({w(i), random_hs_state(rng, {d})});
      values.push_back(f(members.back().state).value);
    }
    const ValuedEnsemble ve(Ensemble(std::move(members)), std::move(values));
    const ValuedEnsemble red = reduce_ensemble(ve);
    const double state_err = trace_norm_distance(ve.ensemble().barycenter(), red.ensemble().barycenter());
    const double value_err = std::abs(ve.mean_value() - red.mean_value());
    sizes[static_cast<std::size_t>(k)] =
        make_record(k, d, 0.0, static_cast<double>(red.size()), static_cast<double>(d * d + 1), 0.0);
    return make_record(k, d, 0.0, std::max(state_err, value_err), kTol, 0.0);
  });
  BoundReport size_report;
  size_report.slack = 0.0;
  size_report.seed = s.seed;
  const long n = static_cast<long>(sizes.size());
  for (long k = 0; k < n; ++k) {
    sizes[static_cast<std::size_t>(k)].trial = n + k;
    size_report.records.push_back(sizes[static_cast<std::size_t>(k)]);
  }
  o.campaigns.push_back({"barycenter-preserved", 0.0, std::move(preserved)});
  o.campaigns.push_back({"size<=d^2+1", 0.0, std::move(size_report)});
  return o;
}

using Runner = Outcome (*)(const Settings&);

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table = {
      {"fannes", run_fannes},       {"tales", run_tales},     {"prop1", run_prop1},
      {"reldist", run_reldist},     {"lemma2", run_lemma2},   {"donation", run_donation},
      {"arrow", run_arrow},         {"cpl", run_cpl},         {"cback", run_cback},
      {"intrinsic", run_intrinsic}, {"roof", run_roof},       {"ef", run_ef},
      {"roofgap", run_roofgap},     {"reduce", run_reduce},
  };
  return table;
}

std::uint64_t resolve_seed(const CampaignConfig& c, std::ostream& err) {
  if (c.seed) return *c.seed;
  if (const char* env = std::getenv("ENTROCHECK_SEED"); env && *env) {
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(env, &pos);
      if (pos != std::string(env).size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw InputError(std::string("ENTROCHECK_SEED is not an unsigned integer: ") + env);
    }
  }
  std::random_device rd;
  const std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  err << "seed: " << seed << "\n";
  return seed;
}

Settings resolve(const CampaignConfig& c, std::ostream& err) {
  const auto it = subcommand_defaults().find(c.subcommand);
  if (it == subcommand_defaults().end()) throw InputError("unknown subcommand '" + c.subcommand + "'");
  Settings s;
  s.subcommand = c.subcommand;
  s.dims = c.dims.value_or(it->second.dims);
  s.trials = c.trials.value_or(it->second.trials);
  if (s.trials < 1) throw InputError("--trials must be at least 1");
  if (s.dims.empty()) throw InputError("--d must name at least one dimension");
  for (int d : s.dims)
    if (d < 2) throw InputError("dimensions must be at least 2");
  s.seed = resolve_seed(c, err);
  s.functional = c.functional;
  s.K = c.K;
  s.correction = c.correction;
  s.m = c.m.value_or(0);
  if (s.m < 0) throw InputError("--m must be nonnegative");
  s.restarts = c.restarts;
  if (s.restarts && *s.restarts < 1) throw InputError("--restarts must be at least 1");
  s.max_iterations = c.max_iterations;
  if (s.max_iterations && *s.max_iterations < 1) throw InputError("--max-iter must be at least 1");
  s.state_path = c.state_path;
  s.input_path = c.input_path;
  s.out_csv = c.out_csv;
  s.out_json = c.out_json;
  return s;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << content;
}

}  // namespace

std::vector<int> parse_dims(const std::string& text) {
  auto to_int = [&](const std::string& t) {
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(t, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad dimension list '" + text + "'");
    }
    if (pos != t.size()) throw std::invalid_argument("bad dimension list '" + text + "'");
    return v;
  };
  std::vector<int> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const int lo = to_int(text.substr(0, dots));
    const int hi = to_int(text.substr(dots + 2));
    if (lo > hi) throw std::invalid_argument("empty dimension range '" + text + "'");
    for (int d = lo; d <= hi; ++d) out.push_back(d);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_int(item));
  if (out.empty()) throw std::invalid_argument("empty dimension list");
  return out;
}

CampaignConfig apply_config_file(const CampaignConfig& flags) {
  if (!flags.config_path) return flags;
  json j;
  try {
    j = json::parse(io::read_file(*flags.config_path));
  } catch (const json::parse_error& e) {
    throw io::ParseError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw io::ParseError("config: top level must be an object");
  CampaignConfig c = flags;
  try {
    if (!c.dims && j.contains("d")) {
      const json& d = j["d"];
      c.dims = d.is_string() ? parse_dims(d.get<std::string>()) : d.get<std::vector<int>>();
    }
    if (!c.trials && j.contains("trials")) c.trials = j["trials"].get<long>();
    if (!c.seed && j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (!c.functional && j.contains("functional")) c.functional = j["functional"].get<std::string>();
    if (!c.K && j.contains("K")) c.K = j["K"].get<double>();
    if (!c.correction && j.contains("correction")) c.correction = j["correction"].get<std::string>();
    if (!c.m && j.contains("m")) c.m = j["m"].get<int>();
    if (!c.restarts && j.contains("restarts")) c.restarts = j["restarts"].get<int>();
    if (!c.max_iterations && j.contains("max_iter")) c.max_iterations = j["max_iter"].get<int>();
    if (!c.state_path && j.contains("state")) c.state_path = j["state"].get<std::string>();
    if (!c.input_path && j.contains("input")) c.input_path = j["input"].get<std::string>();
    if (!c.out_csv && j.contains("out_csv")) c.out_csv = j["out_csv"].get<std::string>();
    if (!c.out_json && j.contains("out_json")) c.out_json = j["out_json"].get<std::string>();
  } catch (const json::exception& e) {
    throw io::ParseError(std::string("config: ") + e.what());
  }
  return c;
}

int run(const CampaignConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const CampaignConfig merged = apply_config_file(config);
    const Settings s = resolve(merged, err);
    Outcome outcome = runners().at(s.subcommand)(s);

    BoundReport combined;
    combined.seed = s.seed;
    json campaigns = json::array();
    long total_violations = 0;
    for (auto& c : outcome.campaigns) {
      const BoundSummary sum = c.report.summary();
      total_violations += sum.violations;
      json entry = json::parse(c.report.summary_json());
      entry["name"] = c.name;
      entry["first_trial"] = c.report.records.empty() ? 0 : c.report.records.front().trial;
      campaigns.push_back(std::move(entry));
      for (auto& r : c.report.records) combined.records.push_back(r);
    }
    combined.finalize();

    json doc{{"config", s.to_json()},
             {"campaigns", std::move(campaigns)},
             {"violations", total_violations},
             {"passed", total_violations == 0}};
    if (!outcome.results.empty()) doc["results"] = std::move(outcome.results);

    if (s.out_csv) {
      std::ostringstream csv;
      combined.write_csv(csv);
      write_file(*s.out_csv, csv.str());
    }
    if (s.out_json) {
      write_file(*s.out_json, doc.dump(2) + "\n");
      json brief{{"subcommand", s.subcommand}, {"seed", s.seed}, {"violations", total_violations}};
      out << brief.dump() << "\n";
    } else {
      out << doc.dump(2) << "\n";
    }
    return total_violations == 0 ? kExitOk : kExitViolation;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const io::ParseError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitInputError;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomized checks of entropic continuity bounds and optimizers"};
  app.require_subcommand(1);

  CampaignConfig c;
  std::string dims_text;
  auto* d_opt = app.add_option("--d", dims_text, "Dimensions: range 2..8, list 2,3,5, or a single value");
  app.add_option("--trials", c.trials, "Trials per dimension");
  app.add_option("--seed", c.seed, "RNG seed (falls back to ENTROCHECK_SEED)");
  app.add_option("--functional", c.functional, "Functional id: S, S_A, S_B, I_M, S_A|B, zero");
  app.add_option("--K", c.K, "Constant K of the bound");
  app.add_option("--correction", c.correction, "Correction form [c*]{zero,linear,H,eta,sqrt}");
  app.add_option("--m", c.m, "Outcome / ensemble budget (0 = default)");
  app.add_option("--restarts", c.restarts, "Optimizer restarts");
  app.add_option("--max-iter", c.max_iterations, "Optimizer iteration cap");
  app.add_option("--state", c.state_path, "State JSON file");
  app.add_option("--input", c.input_path, "Input JSON file (convex set, joint distribution, ensemble)");
  app.add_option("--config", c.config_path, "JSON config; flags take precedence");
  app.add_option("--out-csv", c.out_csv, "Per-trial CSV report");
  app.add_option("--out-json", c.out_json, "JSON summary with the effective config");

  const std::vector<std::pair<std::string, std::string>> subs = {
      {"fannes", "Entropy continuity bound campaign"},
      {"tales", "Explicit common-mixture witness for state pairs"},
      {"prop1", "Continuity <-> robustness constant transfer"},
      {"reldist", "Relative-entropy distance to a convex hull"},
      {"lemma2", "Continuity of the relative-entropy distance"},
      {"donation", "Donation inequality for the relative-entropy distance"},
      {"arrow", "Measurement-optimized functional / trace-distance facts"},
      {"cpl", "Rank-one measurement optimization"},
      {"cback", "Backward classical correlation"},
      {"intrinsic", "Classical intrinsic information"},
      {"roof", "Pure and mixed convex roofs"},
      {"ef", "Entanglement of formation / roof continuity"},
      {"roofgap", "Pure vs mixed roof of mutual information on antisymmetric states"},
      {"reduce", "Caratheodory ensemble reduction"},
  };
  for (const auto& [name, desc] : subs) app.add_subcommand(name, desc)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  c.subcommand = app.get_subcommands().front()->get_name();
  if (d_opt->count() > 0) {
    try {
      c.dims = parse_dims(dims_text);
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << "\n";
      return kExitInputError;
    }
  }
  return run(c, out, err);
}

}  // namespace entrocheck::cli
