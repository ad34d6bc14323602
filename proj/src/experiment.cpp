#include "gme/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <numbers>
#include <random>
#include <sstream>

namespace gme {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stable per-run seed derived from the campaign seed and the run name.
std::uint64_t derive_seed(std::uint64_t seed, const std::string& key, int repeat = 0) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char ch : key) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(seed ^ splitmix64(h + static_cast<std::uint64_t>(repeat)));
}

double draw_counts(double expected, bool poisson, std::mt19937_64& rng) {
  if (!poisson || expected <= 0.0) return expected;
  std::poisson_distribution<long long> dist(expected);
  return static_cast<double>(dist(rng));
}

SinusoidFit weighted_fit(const std::vector<double>& phases, const std::vector<double>& counts,
                         const std::vector<double>& sigmas) {
  const auto n = static_cast<Eigen::Index>(phases.size());
  Eigen::MatrixXd x(n, 3);
  Eigen::VectorXd y(n);
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ph = phases[static_cast<std::size_t>(i)];
    x(i, 0) = 1.0;
    x(i, 1) = std::sin(ph);
    x(i, 2) = std::cos(ph);
    y(i) = counts[static_cast<std::size_t>(i)];
    const double s = sigmas[static_cast<std::size_t>(i)];
    w(i) = 1.0 / (s * s);
  }
  const Eigen::Matrix3d normal = x.transpose() * w.asDiagonal() * x;
  const Eigen::Vector3d rhs = x.transpose() * w.asDiagonal() * y;
  const Eigen::LDLT<Eigen::Matrix3d> ldlt(normal);
  if (ldlt.info() != Eigen::Success) throw std::invalid_argument("fit_sinusoid: singular design");
  const Eigen::Vector3d beta = ldlt.solve(rhs);
  const Eigen::Matrix3d cov = ldlt.solve(Eigen::Matrix3d::Identity());

  SinusoidFit f;
  const double a = beta(0);
  const double s = beta(1);
  const double c = beta(2);
  const double b = std::hypot(s, c);
  f.mean = a;
  f.amplitude = b;
  f.offset = std::atan2(c, s);
  f.mean_err = std::sqrt(std::max(0.0, cov(0, 0)));
  const Eigen::VectorXd resid = y - x * beta;
  f.chi2 = (resid.array().square() * w.array()).sum();

  if (b > 0.0) {
    const Eigen::Vector3d gb(0.0, s / b, c / b);
    f.amplitude_err = std::sqrt(std::max(0.0, gb.dot(cov * gb)));
  } else {
    f.amplitude_err = std::sqrt(std::max(0.0, 0.5 * (cov(1, 1) + cov(2, 2))));
  }
  if (a > 0.0) {
    f.contrast = b / a;
    if (b > 0.0) {
      const Eigen::Vector3d g(-b / (a * a), s / (a * b), c / (a * b));
      f.contrast_err = std::sqrt(std::max(0.0, g.dot(cov * g)));
    } else {
      f.contrast_err = f.amplitude_err / a;
    }
  }
  return f;
}

void check_grid(const std::vector<double>& grid) {
  if (grid.size() < 8) throw std::invalid_argument("scan grid needs at least 8 points");
  const auto [lo, hi] = std::minmax_element(grid.begin(), grid.end());
  const double n = static_cast<double>(grid.size());
  const double coverage = (*hi - *lo) * n / (n - 1.0);
  if (coverage < kTwoPi - 1e-9) throw std::invalid_argument("scan grid must cover a full 2pi period");
}

const IntensityResult& need_intensity(const CampaignScans& s, const std::string& key) {
  auto it = s.intensities.find(key);
  if (it == s.intensities.end()) throw MissingScanError("missing intensity run '" + key + "'");
  return it->second;
}

const ScanResult& need_scan(const CampaignScans& s, const std::string& key) {
  auto it = s.scans.find(key);
  if (it == s.scans.end()) throw MissingScanError("missing contrast scan '" + key + "'");
  return it->second;
}

// x = num / den with first-order error.
Measured ratio(const IntensityResult& num, const IntensityResult& den) {
  if (!(den.counts > 0.0)) throw std::domain_error("reference intensity is zero");
  const double x = num.counts / den.counts;
  const double e = std::hypot(num.err / den.counts, x * den.err / den.counts);
  return {x, e};
}

}  // namespace

SinusoidFit fit_sinusoid(const std::vector<double>& phases, const std::vector<double>& counts,
                         const std::vector<double>& sigmas) {
  if (phases.size() != counts.size() || phases.size() != sigmas.size()) {
    throw std::invalid_argument("fit_sinusoid: input lengths differ");
  }
  if (phases.size() < 4) throw std::invalid_argument("fit_sinusoid: need at least 4 points");
  for (double s : sigmas) {
    if (!(s > 0.0)) throw std::invalid_argument("fit_sinusoid: sigmas must be positive");
  }
  return weighted_fit(phases, counts, sigmas);
}

std::vector<double> phase_grid(int n) {
  if (n < 1) throw std::invalid_argument("phase_grid: n must be positive");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) g[static_cast<std::size_t>(k)] = kTwoPi * k / n;
  return g;
}

double ScanResult::fit_value(std::size_t i) const {
  const double ph = phases.at(i);
  return fit.mean + fit.amplitude * std::sin(ph + fit.offset);
}

ScanResult simulate_scan(const ScanSpec& spec) {
  if (!(spec.counts_per_point > 0.0)) throw std::invalid_argument("counts per point must be positive");
  if (spec.repeats < 1) throw std::invalid_argument("repeats must be at least 1");
  check_grid(spec.grid);

  ScanResult r;
  r.phases = spec.grid;
  r.counts.assign(spec.grid.size(), 0.0);
  std::mt19937_64 rng(spec.seed);
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    const auto out = run_beamline(with_chain(spec.preparation, spec.chain, spec.grid[i]));
    const double expected = spec.counts_per_point * detector_probability(out, spec.visibility);
    for (int rep = 0; rep < spec.repeats; ++rep) r.counts[i] += draw_counts(expected, spec.poisson, rng);
  }

  // Unweighted pass, then Poisson weights from the fitted curve.
  const std::vector<double> ones(r.phases.size(), 1.0);
  const SinusoidFit first = weighted_fit(r.phases, r.counts, ones);
  std::vector<double> sig(r.phases.size());
  for (std::size_t i = 0; i < sig.size(); ++i) {
    const double model = first.mean + first.amplitude * std::sin(r.phases[i] + first.offset);
    sig[i] = std::sqrt(std::max(model, 1.0));
  }
  r.fit = weighted_fit(r.phases, r.counts, sig);
  return r;
}

IntensityResult measure_intensity(const BeamlineConfig& config, double counts_per_run, int repeats, bool poisson,
                                  std::uint64_t seed, double visibility) {
  if (!(counts_per_run > 0.0)) throw std::invalid_argument("counts per run must be positive");
  if (repeats < 1) throw std::invalid_argument("repeats must be at least 1");
  const double expected = counts_per_run * detector_probability(run_beamline(config), visibility);
  std::mt19937_64 rng(seed);
  IntensityResult r;
  for (int i = 0; i < repeats; ++i) r.counts += draw_counts(expected, poisson, rng);
  r.err = std::sqrt(poisson ? r.counts : expected * repeats);
  return r;
}

CampaignScans acquire_scans(const CampaignSettings& s) {
  CampaignScans out;
  out.kind = s.kind;
  const bool is_w = s.kind != StateKind::GHZ;
  // Longer counting time compensates the absorber's intensity loss.
  const double n = s.counts_per_point * (s.kind == StateKind::W_sym ? 4.0 / 3.0 : 1.0);

  auto prep = [&](bool flippers_on, std::optional<int> blocked) {
    PreparationSpec p;
    p.kind = s.kind;
    p.flip_error = s.flip_error;
    // The wave-packet dephaser degrades the prepared state, not the
    // instrument, so reference runs go without it.
    p.dephasing = flippers_on ? s.dephasing : 0.0;
    p.flippers_on = flippers_on;
    p.blocked_path = blocked;
    return preparation(p);
  };
  auto intensity = [&](const std::string& key, bool on, int blocked, ChainKind chain) {
    out.intensities[key] = measure_intensity(with_chain(prep(on, blocked), chain, 0.0), n, s.intensity_repeats,
                                             s.poisson, derive_seed(s.seed, key), s.visibility);
  };
  auto scan = [&](const std::string& key, bool on, ChainKind chain) {
    ScanSpec spec;
    spec.preparation = prep(on, std::nullopt);
    spec.chain = chain;
    spec.grid = phase_grid(s.points);
    spec.counts_per_point = n;
    spec.poisson = s.poisson;
    spec.seed = derive_seed(s.seed, key);
    spec.visibility = s.visibility;
    spec.repeats = s.scan_repeats;
    out.scans[key] = simulate_scan(spec);
  };

  intensity("path_II_on", true, 0, ChainKind::plain);
  intensity("path_II_ref", false, 0, ChainKind::plain);
  intensity("path_I_up", true, 1, ChainKind::plain);
  intensity("path_I_ref", false, 1, ChainKind::plain);
  if (is_w) {
    intensity("path_I_down", true, 1, ChainKind::spin_flip_pi);
    scan("ab", true, ChainKind::coherence_ab);
    scan("ab_ref", false, ChainKind::coherence_ab);
    scan("ac", true, ChainKind::coherence_ac);
    scan("ac_ref", false, ChainKind::coherence_ac);
    scan("bc", true, ChainKind::coherence_bc);
  } else {
    scan("ghz", true, ChainKind::coherence_ghz);
    scan("ghz_ref", false, ChainKind::coherence_ghz);
  }
  return out;
}

ElementMap CampaignResult::elements() const {
  ElementMap m;
  for (const auto& [l, v] : populations) m.set_population(l, v.value);
  for (const auto& [p, v] : cross_magnitudes) m.set_magnitude(p.first, p.second, v.value);
  return m;
}

CampaignResult extract_elements(const CampaignScans& s) {
  CampaignResult r;
  r.kind = s.kind;
  const bool is_w = s.kind != StateKind::GHZ;

  // Path weights from the flippers-off reference runs.
  const auto& ref_i = need_intensity(s, "path_I_ref");
  const auto& ref_ii = need_intensity(s, "path_II_ref");
  const double total = ref_i.counts + ref_ii.counts;
  if (!(total > 0.0)) throw std::domain_error("reference intensities are zero");
  const double w_i = ref_i.counts / total;
  const double w_ii = ref_ii.counts / total;
  const double w_err = std::hypot(ref_ii.counts * ref_i.err, ref_i.counts * ref_ii.err) / (total * total);

  auto weighted = [](double w, double we, const Measured& x) {
    return Measured{w * x.value, std::hypot(x.value * we, w * x.err)};
  };

  const Measured kept_ii = ratio(need_intensity(s, "path_II_on"), ref_ii);
  const Measured flipped_ii{1.0 - kept_ii.value, kept_ii.err};
  const Measured up_i = ratio(need_intensity(s, "path_I_up"), ref_i);
  r.populations[{1, 0, 1}] = weighted(w_ii, w_err, flipped_ii);

  // Contrast of the flippers-off fringe for perfect optics given the measured
  // path weights; equals 1 for balanced paths.
  const double ideal_ref = 2.0 * std::sqrt(w_i * w_ii);
  auto visibility = [&](const std::string& key) {
    const auto& ref = need_scan(s, key);
    if (!(ref.contrast() > 1e-12)) throw std::domain_error("reference contrast '" + key + "' is zero");
    r.reference_contrasts[key] = ref.contrast();
    return Measured{ref.contrast() / ideal_ref, ref.contrast_err() / ideal_ref};
  };
  auto rel = [](const Measured& m) { return m.value != 0.0 ? m.err / m.value : 0.0; };

  if (!is_w) {
    r.populations[{0, 1, 0}] = weighted(w_i, w_err, up_i);
    const auto& c = need_scan(s, "ghz");
    const Measured v = visibility("ghz_ref");
    const double val = 0.5 * c.contrast() / v.value;
    r.cross_magnitudes[{BasisLabel{0, 1, 0}, BasisLabel{1, 0, 1}}] = {
        val, std::hypot(0.5 * c.contrast_err() / v.value, val * rel(v))};
    return r;
  }

  const Measured down_i = ratio(need_intensity(s, "path_I_down"), ref_i);
  r.populations[{0, 1, 1}] = weighted(w_i, w_err, up_i);
  r.populations[{0, 0, 2}] = weighted(w_i, w_err, down_i);

  const auto w = w_labels();
  const auto& c_ab = need_scan(s, "ab");
  const Measured v_ab = visibility("ab_ref");
  const double ab = 0.5 * c_ab.contrast() / v_ab.value;
  const double ab_err = std::hypot(0.5 * c_ab.contrast_err() / v_ab.value, ab * rel(v_ab));

  const auto& c_ac = need_scan(s, "ac");
  const Measured v_ac = visibility("ac_ref");
  const double ac_sum = c_ac.contrast() / v_ac.value;
  const double ac = ac_sum - ab;
  const double ac_err = std::sqrt(std::pow(c_ac.contrast_err() / v_ac.value, 2) +
                                  std::pow(ac_sum * rel(v_ac), 2) + ab_err * ab_err);

  const auto& c_bc = need_scan(s, "bc");
  const double bc = 0.5 * c_bc.contrast();

  r.cross_magnitudes[std::minmax(w[0], w[1])] = {ab, ab_err};
  r.cross_magnitudes[std::minmax(w[0], w[2])] = {ac, ac_err};
  r.cross_magnitudes[std::minmax(w[1], w[2])] = {bc, 0.5 * c_bc.contrast_err()};
  return r;
}

PureState target_state(StateKind kind) {
  switch (kind) {
    case StateKind::GHZ: return make_ghz(GHZParams::balanced());
    case StateKind::W_sym: return make_w(WParams::symmetric());
    case StateKind::W_asym: return make_w(WParams::asymmetric());
  }
  throw std::invalid_argument("unknown state kind");
}

DensityMatrix prepared_state(StateKind kind, double flip_error, double dephasing) {
  PreparationSpec p;
  p.kind = kind;
  p.flip_error = flip_error;
  p.dephasing = dephasing;
  auto out = run_beamline(preparation(p));
  if (out.degenerate()) throw std::runtime_error("preparation transmits no neutrons");
  return *out.rho;
}

CampaignReport run_campaign(const CampaignSettings& settings) {
  CampaignReport rep;
  rep.settings = settings;
  PreparationSpec p;
  p.kind = settings.kind;
  p.flip_error = settings.flip_error;
  p.dephasing = settings.dephasing;
  const auto out = run_beamline(preparation(p));
  if (out.degenerate()) throw std::runtime_error("preparation transmits no neutrons");
  const DensityMatrix& rho = *out.rho;
  rep.survival = out.survival;
  rep.fidelity = fidelity(rho, target_state(settings.kind));

  rep.elements = extract_elements(acquire_scans(settings));
  const ElementMap elems = rep.elements.elements();

  auto exact = [](WitnessName name, double value) {
    WitnessReport r;
    r.name = name;
    r.value = value;
    return r;
  };

  if (settings.kind == StateKind::GHZ) {
    const BasisLabel x{0, 1, 0};
    const BasisLabel y{1, 0, 1};
    rep.measured.push_back(witness_from_elements(elems, {WitnessName::GHZ, 3, x, y}));
    rep.measured.push_back(witness_from_elements(elems, {WitnessName::KSEP, 3, x, y}));
    auto g = exact(WitnessName::GHZ, witness_ghz(rho));
    g.phi = std::make_pair(x, y);
    rep.exact.push_back(g);
    auto k = exact(WitnessName::KSEP, witness_ksep(rho, 3, x, y));
    k.k = 3;
    k.phi = std::make_pair(x, y);
    rep.exact.push_back(k);
  } else {
    const BasisLabel x{0, 1, 1};
    const BasisLabel y{0, 0, 2};
    rep.measured.push_back(witness_from_elements(elems, {WitnessName::W_scaled, 3, x, y}));
    rep.measured.push_back(witness_from_elements(elems, {WitnessName::W_raw, 3, x, y}));
    rep.measured.push_back(witness_from_elements(elems, {WitnessName::KSEP, 3, x, y}));
    rep.exact.push_back(exact(WitnessName::W_scaled, witness_w(rho, WConvention::scaled)));
    rep.exact.push_back(exact(WitnessName::W_raw, witness_w(rho, WConvention::raw)));
    auto k = exact(WitnessName::KSEP, witness_ksep(rho, 3, x, y));
    k.k = 3;
    k.phi = std::make_pair(x, y);
    rep.exact.push_back(k);
  }
  return rep;
}

double calibrate(CalibrationParameter parameter, double target, StateKind kind, double base_flip_error,
                 double base_dephasing) {
  if (!(target > 0.0 && target <= 1.0)) throw std::invalid_argument("calibration target must lie in (0, 1]");
  constexpr double kTol = 1e-4;
  const double lo = 0.0;
  const double hi = parameter == CalibrationParameter::delta ? std::numbers::pi / 4.0 : 1.0;
  const PureState ideal = target_state(kind);
  auto f = [&](double x) {
    const double delta = parameter == CalibrationParameter::delta ? x : base_flip_error;
    const double p = parameter == CalibrationParameter::p ? x : base_dephasing;
    return fidelity(prepared_state(kind, delta, p), ideal);
  };

  constexpr int kChecks = 32;
  double prev = f(lo);
  const double f_lo = prev;
  for (int i = 1; i <= kChecks; ++i) {
    const double cur = f(lo + (hi - lo) * i / kChecks);
    if (cur > prev + 1e-12) throw CalibrationError("fidelity is not monotone over the calibration bracket");
    prev = cur;
  }
  const double f_hi = prev;
  if (target > f_lo + kTol || target < f_hi - kTol) {
    std::ostringstream os;
    os << "target fidelity " << target << " unreachable: bracket gives [" << f_hi << ", " << f_lo << "]";
    throw CalibrationError(os.str());
  }
  if (target >= f_lo) return lo;
  if (target <= f_hi) return hi;

  double a = lo;
  double b = hi;
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    const double mid = 0.5 * (a + b);
    if (f(mid) > target) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace gme
