// beamline.hpp
// Operator-level model of the two-path interferometer: a splitter, in-path
// spin flippers, phase shifters, absorbers and blockers, then a
// post-recombination analysis chain ending in a spin-up supermirror.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gme/tensor_core.hpp"

namespace gme {

enum class ComponentKind {
  splitter,
  rf_flipper,
  dc_flipper,
  phase_shifter,
  spin_phase_shifter,
  absorber,
  blocker,
  dephaser,
  supermirror,
};

enum class Location { path_I, path_II, both, post_recombination };

std::string to_string(ComponentKind kind);
std::string to_string(Location location);
ComponentKind parse_component_kind(const std::string& s);
Location parse_location(const std::string& s);

/// Kind-specific parameters; unused fields keep their defaults.
struct ComponentParams {
  double flip_angle = 0.0;        // rf_flipper, dc_flipper (radians)
  int frequency_multiplier = 1;   // rf_flipper: 1 or 2
  double phase = 0.0;             // phase_shifter (chi) / spin_phase_shifter (phi)
  double transmission = 1.0;      // absorber
  double dephasing = 0.0;         // dephaser
  int blocked_path = 0;           // blocker: 0 = path I, 1 = path II
};

struct Component {
  ComponentKind kind = ComponentKind::splitter;
  Location location = Location::both;
  ComponentParams params;

  /// Throws std::invalid_argument on out-of-range parameters or placement.
  void validate() const;

  static Component splitter();
  static Component rf_flipper(Location where, double theta, int m);
  static Component dc_flipper(Location where, double theta);
  static Component phase_shifter(double chi);
  static Component spin_phase_shifter(double phi);
  static Component absorber(Location where, double transmission);
  static Component blocker(int path);
  static Component dephaser(double p);
  static Component supermirror();
};

struct BeamlineConfig {
  std::vector<Component> components;

  /// Exactly one splitter, first; at most one supermirror, last or
  /// second-to-last.
  void validate() const;
};

struct BeamOutput {
  std::optional<DensityMatrix> rho;  // post-selected, renormalized; empty when survival == 0
  double survival = 0.0;

  bool degenerate() const noexcept { return !rho.has_value(); }
};

using SpinEnergyMatrix = Eigen::Matrix<Complex, kSpinDim * kEnergyDim, kSpinDim * kEnergyDim>;

/// RF flip on spin (x) energy, index spin*3 + energy:
///   |up,e>   -> cos(t/2)|up,e>   + i sin(t/2)|down,e+m>
///   |down,e> -> cos(t/2)|down,e> + i sin(t/2)|up,e-m>
/// Kets whose partner falls outside {0,1,2} are left fixed, which keeps the
/// matrix unitary; run_beamline refuses to rotate population through them.
SpinEnergyMatrix rf_flipper_unitary(double theta, int m);

/// Spin-energy kets with no in-range flip partner at multiplier m.
std::vector<std::pair<int, int>> rf_unpaired_states(int m);

/// |up> -> cos(t/2)|up> + i sin(t/2)|down>, |down> -> cos(t/2)|down> + i sin(t/2)|up>.
Eigen::Matrix2cd dc_flipper_unitary(double theta);

/// Propagates |path I, up, E0> through the components. Throws TruncationError
/// when an RF flip would leave the energy ladder.
BeamOutput run_beamline(const BeamlineConfig& config);

// ---------------------------------------------------------------------------
// Preparation and analysis presets.

enum class StateKind { GHZ, W_sym, W_asym };
std::string to_string(StateKind kind);
StateKind parse_state_kind(const std::string& s);

struct PreparationSpec {
  StateKind kind = StateKind::GHZ;
  /// Flip-angle error: every in-path flipper runs at nominal * (1 - delta/pi).
  double flip_error = 0.0;
  /// Path dephasing applied after preparation.
  double dephasing = 0.0;
  /// false gives the reference beamline (in-path flippers switched off).
  bool flippers_on = true;
  std::optional<int> blocked_path;
};

/// In-interferometer part: splitter, flippers, absorber (W_sym), dephaser, blocker.
BeamlineConfig preparation(const PreparationSpec& spec);

enum class ChainKind { plain, spin_flip_pi, coherence_ab, coherence_ac, coherence_bc, coherence_ghz };
std::string to_string(ChainKind kind);
ChainKind parse_chain_kind(const std::string& s);

/// Post-recombination analysis components for one measurement mode. The
/// scan phase drives the path phase shifter (ab, ac, ghz) or the spin phase
/// shifter (bc).
std::vector<Component> analysis_chain(ChainKind kind, double scan_phase);

/// Preparation followed by an analysis chain.
BeamlineConfig with_chain(const BeamlineConfig& prep, ChainKind kind, double scan_phase);

/// Probability of a count in the forward output port. visibility in (0, 1]
/// scales the inter-path interference term.
double detector_probability(const BeamOutput& out, double visibility = 1.0);

}  // namespace gme
