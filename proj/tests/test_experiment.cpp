#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gme/experiment.hpp"

using namespace gme;

namespace {

constexpr double kPi = std::numbers::pi;

double exact_mag(const DensityMatrix& rho, const char* a, const char* b) {
  return std::abs(rho.entry(BasisLabel::parse(a), BasisLabel::parse(b)));
}

ScanSpec spec_for(StateKind kind, ChainKind chain) {
  ScanSpec s;
  s.preparation = preparation({kind});
  s.chain = chain;
  return s;
}

}  // namespace

TEST(FitSinusoid, RecoversNoiselessParameters) {
  for (double a : {10.0, 1234.5}) {
    for (double b : {0.0, 0.3, 0.99}) {
      for (double off : {-2.0, 0.0, 1.3}) {
        std::vector<double> ph = phase_grid(16), y;
        for (double p : ph) y.push_back(a + a * b * std::sin(p + off));
        const auto f = fit_sinusoid(ph, y, std::vector<double>(ph.size(), 1.0));
        EXPECT_NEAR(f.mean, a, 1e-9 * a);
        EXPECT_NEAR(f.amplitude, a * b, 1e-9 * a);
        if (b > 0) EXPECT_NEAR(std::remainder(f.offset - off, 2 * kPi), 0.0, 1e-9);
        EXPECT_NEAR(f.contrast, b, 1e-9);
      }
    }
  }
}

TEST(FitSinusoid, RejectsBadInput) {
  EXPECT_THROW(fit_sinusoid({0, 1}, {1, 2}, {1, 1}), std::invalid_argument);
  EXPECT_THROW(fit_sinusoid(phase_grid(8), std::vector<double>(7, 1.0), std::vector<double>(8, 1.0)),
               std::invalid_argument);
}

TEST(SimulateScan, Examples) {
  auto s = spec_for(StateKind::GHZ, ChainKind::coherence_ghz);
  EXPECT_NEAR(simulate_scan(s).contrast(), 1.0, 1e-6);

  s.visibility = 0.455;
  const auto vis = simulate_scan(s);
  EXPECT_NEAR(vis.contrast(), 0.455, std::max(1e-9, vis.contrast_err()));

  auto blocked = spec_for(StateKind::GHZ, ChainKind::coherence_ghz);
  blocked.preparation = preparation({StateKind::GHZ, 0, 0, true, 0});
  const auto b = simulate_scan(blocked);
  EXPECT_NEAR(b.contrast(), 0.0, std::max(1e-9, 3 * b.contrast_err()));

  auto poisson = spec_for(StateKind::W_asym, ChainKind::coherence_ab);
  poisson.poisson = true;
  poisson.counts_per_point = 1e3;
  const auto pr = simulate_scan(poisson);
  EXPECT_LE(pr.contrast(), 1 + 3 * pr.contrast_err());
  EXPECT_TRUE(std::isfinite(pr.fit.chi2));
}

TEST(SimulateScan, GridPreconditions) {
  auto s = spec_for(StateKind::GHZ, ChainKind::coherence_ghz);
  s.grid = phase_grid(6);
  EXPECT_THROW(simulate_scan(s), std::invalid_argument);
  s.grid = {0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
  EXPECT_THROW(simulate_scan(s), std::invalid_argument);
  s.grid = phase_grid(16);
  s.counts_per_point = 0;
  EXPECT_THROW(simulate_scan(s), std::invalid_argument);
}

TEST(SimulateScan, DeterministicPerSeed) {
  auto s = spec_for(StateKind::W_sym, ChainKind::coherence_ac);
  s.poisson = true;
  s.seed = 99;
  EXPECT_EQ(simulate_scan(s).counts, simulate_scan(s).counts);
  auto t = s;
  t.seed = 100;
  EXPECT_NE(simulate_scan(s).counts, simulate_scan(t).counts);
}

TEST(ExtractElements, IdealWSym) {
  CampaignSettings s;
  s.kind = StateKind::W_sym;
  const auto r = extract_elements(acquire_scans(s));
  for (const auto& [l, m] : r.populations) EXPECT_NEAR(m.value, 1.0 / 3, 1e-6) << l.str();
  EXPECT_EQ(r.cross_magnitudes.size(), 3u);
  for (const auto& [p, m] : r.cross_magnitudes) EXPECT_NEAR(m.value, 1.0 / 3, 1e-6);
}

TEST(ExtractElements, IdealWAsym) {
  CampaignSettings s;
  s.kind = StateKind::W_asym;
  const auto r = extract_elements(acquire_scans(s));
  const auto ab = r.cross_magnitudes.at({BasisLabel::parse("011"), BasisLabel::parse("101")});
  EXPECT_NEAR(ab.value, 0.3535533905932738, 1e-6);
}

TEST(ExtractElements, MissingScanIsNamed) {
  CampaignSettings s;
  s.kind = StateKind::W_sym;
  auto scans = acquire_scans(s);
  scans.scans.erase("bc");
  try {
    extract_elements(scans);
    FAIL();
  } catch (const MissingScanError& e) {
    EXPECT_NE(std::string(e.what()).find("bc"), std::string::npos);
  }
  auto s2 = acquire_scans(s);
  s2.intensities.erase("path_I_ref");
  EXPECT_THROW(extract_elements(s2), MissingScanError);
}

TEST(ExtractElements, ZeroReferenceContrastIsAnError) {
  CampaignSettings s;
  s.kind = StateKind::W_sym;
  auto scans = acquire_scans(s);
  auto& ref = scans.scans.at("ab_ref");
  for (auto& c : ref.counts) c = 100.0;
  ref.fit = fit_sinusoid(ref.phases, ref.counts, std::vector<double>(ref.counts.size(), 10.0));
  EXPECT_THROW(extract_elements(scans), std::domain_error);
}

TEST(Closure, ZeroNoiseMatchesDirectElements) {
  for (auto kind : {StateKind::GHZ, StateKind::W_sym, StateKind::W_asym}) {
    for (double v : {1.0, 0.455}) {
      CampaignSettings s;
      s.kind = kind;
      s.visibility = v;
      const auto r = extract_elements(acquire_scans(s));
      const auto rho = prepared_state(kind, 0, 0);
      for (const auto& [l, m] : r.populations) EXPECT_NEAR(m.value, rho.population(l), 1e-6) << l.str();
      for (const auto& [p, m] : r.cross_magnitudes)
        EXPECT_NEAR(m.value, std::abs(rho.entry(p.first, p.second)), 1e-6) << p.first.str() << p.second.str();
    }
  }
}

TEST(Closure, ExtractionScalesWithDephasing) {
  std::vector<double> ab, ac, bc;
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    CampaignSettings s;
    s.kind = StateKind::W_asym;
    s.dephasing = p;
    const auto r = extract_elements(acquire_scans(s));
    ab.push_back(r.cross_magnitudes.at({BasisLabel::parse("011"), BasisLabel::parse("101")}).value);
    ac.push_back(r.cross_magnitudes.at({BasisLabel::parse("002"), BasisLabel::parse("101")}).value);
    bc.push_back(r.cross_magnitudes.at({BasisLabel::parse("002"), BasisLabel::parse("011")}).value);
  }
  const double ps[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(ab[static_cast<std::size_t>(i)], ab[0] * (1 - ps[i]), 1e-6);
    EXPECT_NEAR(ac[static_cast<std::size_t>(i)], ac[0] * (1 - ps[i]), 1e-6);
    EXPECT_NEAR(bc[static_cast<std::size_t>(i)], bc[0], 1e-6);
  }
}

TEST(Closure, PoissonContrastUnbiased) {
  auto s = spec_for(StateKind::W_sym, ChainKind::coherence_ab);
  s.counts_per_point = 1e3;
  s.poisson = true;
  const double exact = simulate_scan(spec_for(StateKind::W_sym, ChainKind::coherence_ab)).contrast();
  double sum = 0, sum2 = 0;
  const int n = 100;
  for (int i = 0; i < n; ++i) {
    s.seed = static_cast<std::uint64_t>(i) + 1;
    const double c = simulate_scan(s).contrast();
    sum += c;
    sum2 += c * c;
  }
  const double mean = sum / n;
  const double sd = std::sqrt((sum2 / n - mean * mean) * n / (n - 1));
  EXPECT_LE(std::abs(mean - exact), 2 * sd / std::sqrt(n));
}

TEST(RunCampaign, Examples) {
  CampaignSettings g;
  const auto ideal = run_campaign(g);
  EXPECT_NEAR(ideal.measured.front().value, 0.5, 1e-6);
  EXPECT_NEAR(ideal.fidelity, 1.0, 1e-12);

  CampaignSettings w;
  w.kind = StateKind::W_sym;
  w.dephasing = 1.0;
  const auto dephased = run_campaign(w);
  for (const auto& rep : dephased.exact) {
    if (rep.name == WitnessName::W_scaled) EXPECT_NEAR(rep.value, -1.0 / 6, 1e-9);
    if (rep.name == WitnessName::KSEP) EXPECT_NEAR(rep.value, 1.0 / 3, 1e-9);
  }
  for (const auto& rep : dephased.measured) {
    if (rep.name == WitnessName::W_scaled) EXPECT_NEAR(rep.value, -1.0 / 6, 1e-6);
    if (rep.name == WitnessName::KSEP) EXPECT_NEAR(rep.value, 1.0 / 3, 1e-6);
  }
}

TEST(RunCampaign, CalibratedGHZBand) {
  const double delta = calibrate(CalibrationParameter::delta, 0.985, StateKind::GHZ);
  CampaignSettings g;
  g.flip_error = delta;
  const auto r = run_campaign(g);
  EXPECT_NEAR(r.fidelity, 0.985, 1e-4);
  EXPECT_GE(r.measured.front().value, 0.44);
  EXPECT_LE(r.measured.front().value, 0.50);
}

TEST(Calibrate, Examples) {
  EXPECT_NEAR(calibrate(CalibrationParameter::delta, 1.0, StateKind::GHZ), 0.0, 1e-4);
  EXPECT_NEAR(calibrate(CalibrationParameter::p, 5.0 / 9 + 1e-6, StateKind::W_sym), 1.0, 1e-3);
  const double p = calibrate(CalibrationParameter::p, 0.646, StateKind::W_sym);
  EXPECT_GT(p, 0.0);
  EXPECT_LT(p, 1.0);
  EXPECT_NEAR(fidelity(prepared_state(StateKind::W_sym, 0, p), target_state(StateKind::W_sym)), 0.646, 1e-4);
  EXPECT_THROW(calibrate(CalibrationParameter::p, 0.3, StateKind::W_sym), CalibrationError);
  EXPECT_THROW(calibrate(CalibrationParameter::delta, 0.0, StateKind::GHZ), std::invalid_argument);
}
