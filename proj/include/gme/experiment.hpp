// experiment.hpp
// Simulated measurement campaign: blocked-path intensity runs, phase scans
// with optional Poisson counting noise, sinusoid fits, element extraction
// and witness assembly.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gme/beamline.hpp"
#include "gme/states.hpp"
#include "gme/witnesses.hpp"

namespace gme {

/// counts ~ mean + amplitude * sin(phase + offset).
struct SinusoidFit {
  double mean = 0.0;
  double amplitude = 0.0;
  double offset = 0.0;
  double mean_err = 0.0;
  double amplitude_err = 0.0;
  double contrast = 0.0;
  double contrast_err = 0.0;
  double chi2 = 0.0;
};

/// Weighted linear least squares on {1, sin, cos}. sigmas must be positive;
/// pass all-ones for an unweighted fit. Needs at least 4 points.
SinusoidFit fit_sinusoid(const std::vector<double>& phases, const std::vector<double>& counts,
                         const std::vector<double>& sigmas);

/// n equally spaced phases covering one period: k * 2pi / n.
std::vector<double> phase_grid(int n = 16);

struct ScanResult {
  std::vector<double> phases;
  std::vector<double> counts;
  SinusoidFit fit;

  double contrast() const noexcept { return fit.contrast; }
  double contrast_err() const noexcept { return fit.contrast_err; }
  double fit_value(std::size_t i) const;
};

struct ScanSpec {
  BeamlineConfig preparation;
  ChainKind chain = ChainKind::coherence_ab;
  std::vector<double> grid = phase_grid();
  double counts_per_point = 1e6;
  bool poisson = false;
  std::uint64_t seed = 0;
  double visibility = 1.0;
  int repeats = 1;  // counts are summed over repeats
};

/// Throws std::invalid_argument for N <= 0, fewer than 8 points, or a grid
/// that does not cover a full period.
ScanResult simulate_scan(const ScanSpec& spec);

/// Summed counts of a fixed-configuration intensity run.
struct IntensityResult {
  double counts = 0.0;
  double err = 0.0;
};

IntensityResult measure_intensity(const BeamlineConfig& config, double counts_per_run, int repeats, bool poisson,
                                  std::uint64_t seed, double visibility = 1.0);

struct CampaignSettings {
  StateKind kind = StateKind::GHZ;
  double dephasing = 0.0;
  double visibility = 1.0;
  double flip_error = 0.0;
  double counts_per_point = 1e6;
  bool poisson = false;
  std::uint64_t seed = 0;
  int points = 16;
  int scan_repeats = 4;
  int intensity_repeats = 10;
};

/// Raw data of a campaign, keyed by run name:
///   intensities: path_II_on, path_II_ref, path_I_up, path_I_down (W only), path_I_ref
///   scans (W):   ab, ab_ref, ac, ac_ref, bc
///   scans (GHZ): ghz, ghz_ref
struct CampaignScans {
  StateKind kind = StateKind::GHZ;
  std::map<std::string, IntensityResult> intensities;
  std::map<std::string, ScanResult> scans;
};

CampaignScans acquire_scans(const CampaignSettings& settings);

struct Measured {
  double value = 0.0;
  double err = 0.0;
};

struct CampaignResult {
  StateKind kind = StateKind::GHZ;
  std::map<BasisLabel, Measured> populations;
  std::map<std::pair<BasisLabel, BasisLabel>, Measured> cross_magnitudes;
  std::map<std::string, double> reference_contrasts;

  ElementMap elements() const;
};

class MissingScanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Populations from blocked-path intensity ratios; cross magnitudes from
/// the fringe contrasts:
///   2|<011|rho|101>| = C_ab / V,  |<002|rho|101>| = C_ac / V - |<011|rho|101>|,
///   2|<002|rho|011>| = C_bc,      2|<010|rho|101>| = C_ghz / V,
/// where V is the instrument visibility recovered from the matching
/// reference scan. Uncertainties are combined in quadrature.
CampaignResult extract_elements(const CampaignScans& scans);

struct CampaignReport {
  CampaignSettings settings;
  CampaignResult elements;
  std::vector<WitnessReport> measured;  // from extracted elements
  std::vector<WitnessReport> exact;     // from the simulated density matrix
  double fidelity = 0.0;                // simulated rho vs ideal target
  double survival = 0.0;
};

/// Ideal target state for a preparation kind.
PureState target_state(StateKind kind);

/// Prepared density matrix (no analysis chain, no blocker).
DensityMatrix prepared_state(StateKind kind, double flip_error, double dephasing);

CampaignReport run_campaign(const CampaignSettings& settings);

enum class CalibrationParameter { delta, p };

class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bisection on delta (bracket [0, pi/4]) or p (bracket [0, 1]) so the
/// prepared-state fidelity matches target within 1e-4. The other parameter
/// is held at its value in base. Monotonicity over the bracket is checked first.
double calibrate(CalibrationParameter parameter, double target, StateKind kind, double base_flip_error = 0.0,
                 double base_dephasing = 0.0);

}  // namespace gme
