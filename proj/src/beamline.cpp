#include "gme/beamline.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace gme {

namespace {

const Complex kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;
constexpr double kSupportTol = 1e-14;
constexpr double kSurvivalFloor = 1e-15;

int se_index(int spin, int energy) { return spin * kEnergyDim + energy; }

bool acts_on_path(Location loc, int path) {
  switch (loc) {
    case Location::path_I: return path == 0;
    case Location::path_II: return path == 1;
    case Location::both:
    case Location::post_recombination: return true;
  }
  return false;
}

// Lifts a spin-energy operator to the full space, acting on the paths
// selected by loc and as the identity elsewhere.
Mat12 lift(const SpinEnergyMatrix& u, Location loc) {
  Mat12 out = Mat12::Identity();
  constexpr int block = kSpinDim * kEnergyDim;
  for (int p = 0; p < kPathDim; ++p) {
    if (acts_on_path(loc, p)) out.block(p * block, p * block, block, block) = u;
  }
  return out;
}

SpinEnergyMatrix spin_only(const Eigen::Matrix2cd& s) {
  SpinEnergyMatrix u = SpinEnergyMatrix::Zero();
  for (int a = 0; a < kSpinDim; ++a) {
    for (int b = 0; b < kSpinDim; ++b) {
      for (int e = 0; e < kEnergyDim; ++e) u(se_index(a, e), se_index(b, e)) = s(a, b);
    }
  }
  return u;
}

Mat12 path_diag(Complex on_path_i, Complex on_path_ii) {
  Mat12 out = Mat12::Zero();
  for (int i = 0; i < kDim; ++i) {
    out(i, i) = BasisLabel::from_index(static_cast<std::size_t>(i)).path == 0 ? on_path_i : on_path_ii;
  }
  return out;
}

void check_angle(double theta, const char* what) {
  if (!std::isfinite(theta)) throw std::invalid_argument(std::string(what) + ": flip angle must be finite");
}

void check_multiplier(int m) {
  if (m != 1 && m != 2) throw std::invalid_argument("rf_flipper: frequency multiplier must be 1 or 2");
}

void check_truncation(const Mat12& rho, const Component& c) {
  if (std::abs(std::sin(c.params.flip_angle / 2.0)) < 1e-15) return;
  for (const auto& [spin, energy] : rf_unpaired_states(c.params.frequency_multiplier)) {
    for (int p = 0; p < kPathDim; ++p) {
      if (!acts_on_path(c.location, p)) continue;
      const BasisLabel l{p, spin, energy};
      const auto i = static_cast<Eigen::Index>(label_index(l));
      if (rho(i, i).real() > kSupportTol) {
        std::ostringstream os;
        os << "rf_flipper (m=" << c.params.frequency_multiplier << ") would move |" << l.str()
           << "> outside the energy levels {0,1,2}";
        throw TruncationError(os.str());
      }
    }
  }
}

}  // namespace

std::string to_string(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::splitter: return "splitter";
    case ComponentKind::rf_flipper: return "rf_flipper";
    case ComponentKind::dc_flipper: return "dc_flipper";
    case ComponentKind::phase_shifter: return "phase_shifter";
    case ComponentKind::spin_phase_shifter: return "spin_phase_shifter";
    case ComponentKind::absorber: return "absorber";
    case ComponentKind::blocker: return "blocker";
    case ComponentKind::dephaser: return "dephaser";
    case ComponentKind::supermirror: return "supermirror";
  }
  return "?";
}

std::string to_string(Location location) {
  switch (location) {
    case Location::path_I: return "path_I";
    case Location::path_II: return "path_II";
    case Location::both: return "both";
    case Location::post_recombination: return "post_recombination";
  }
  return "?";
}

ComponentKind parse_component_kind(const std::string& s) {
  for (auto k : {ComponentKind::splitter, ComponentKind::rf_flipper, ComponentKind::dc_flipper,
                 ComponentKind::phase_shifter, ComponentKind::spin_phase_shifter, ComponentKind::absorber,
                 ComponentKind::blocker, ComponentKind::dephaser, ComponentKind::supermirror}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown component kind '" + s + "'");
}

Location parse_location(const std::string& s) {
  for (auto l : {Location::path_I, Location::path_II, Location::both, Location::post_recombination}) {
    if (to_string(l) == s) return l;
  }
  throw std::invalid_argument("unknown location '" + s + "'");
}

void Component::validate() const {
  const auto& p = params;
  switch (kind) {
    case ComponentKind::splitter: break;
    case ComponentKind::rf_flipper:
      check_angle(p.flip_angle, "rf_flipper");
      check_multiplier(p.frequency_multiplier);
      break;
    case ComponentKind::dc_flipper: check_angle(p.flip_angle, "dc_flipper"); break;
    case ComponentKind::phase_shifter:
    case ComponentKind::spin_phase_shifter:
      if (!std::isfinite(p.phase)) throw std::invalid_argument(to_string(kind) + ": phase must be finite");
      break;
    case ComponentKind::absorber:
      if (!(p.transmission >= 0.0 && p.transmission <= 1.0)) {
        throw std::invalid_argument("absorber: transmission must lie in [0, 1]");
      }
      if (location != Location::path_I && location != Location::path_II) {
        throw std::invalid_argument("absorber must sit in path_I or path_II");
      }
      break;
    case ComponentKind::blocker:
      if (p.blocked_path != 0 && p.blocked_path != 1) {
        throw std::invalid_argument("blocker: blocked path must be 0 (I) or 1 (II)");
      }
      break;
    case ComponentKind::dephaser:
      if (!(p.dephasing >= 0.0 && p.dephasing <= 1.0)) {
        throw std::invalid_argument("dephaser: strength must lie in [0, 1]");
      }
      break;
    case ComponentKind::supermirror: break;
  }
}

Component Component::splitter() { return {ComponentKind::splitter, Location::both, {}}; }

Component Component::rf_flipper(Location where, double theta, int m) {
  Component c{ComponentKind::rf_flipper, where, {}};
  c.params.flip_angle = theta;
  c.params.frequency_multiplier = m;
  return c;
}

Component Component::dc_flipper(Location where, double theta) {
  Component c{ComponentKind::dc_flipper, where, {}};
  c.params.flip_angle = theta;
  return c;
}

Component Component::phase_shifter(double chi) {
  Component c{ComponentKind::phase_shifter, Location::path_II, {}};
  c.params.phase = chi;
  return c;
}

Component Component::spin_phase_shifter(double phi) {
  Component c{ComponentKind::spin_phase_shifter, Location::post_recombination, {}};
  c.params.phase = phi;
  return c;
}

Component Component::absorber(Location where, double transmission) {
  Component c{ComponentKind::absorber, where, {}};
  c.params.transmission = transmission;
  return c;
}

Component Component::blocker(int path) {
  Component c{ComponentKind::blocker, Location::both, {}};
  c.params.blocked_path = path;
  return c;
}

Component Component::dephaser(double p) {
  Component c{ComponentKind::dephaser, Location::both, {}};
  c.params.dephasing = p;
  return c;
}

Component Component::supermirror() { return {ComponentKind::supermirror, Location::post_recombination, {}}; }

void BeamlineConfig::validate() const {
  if (components.empty() || components.front().kind != ComponentKind::splitter) {
    throw std::invalid_argument("beamline must start with a splitter");
  }
  std::size_t splitters = 0;
  std::size_t mirrors = 0;
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    c.validate();
    if (c.kind == ComponentKind::splitter) ++splitters;
    if (c.kind == ComponentKind::supermirror) {
      ++mirrors;
      if (i + 2 < components.size()) {
        throw std::invalid_argument("supermirror must be the last or second-to-last component");
      }
    }
  }
  if (splitters != 1) throw std::invalid_argument("beamline must contain exactly one splitter");
  if (mirrors > 1) throw std::invalid_argument("beamline may contain at most one supermirror");
}

std::vector<std::pair<int, int>> rf_unpaired_states(int m) {
  check_multiplier(m);
  std::vector<std::pair<int, int>> out;
  for (int e = 0; e < kEnergyDim; ++e) {
    if (e + m >= kEnergyDim) out.emplace_back(1, e);  // up, would drop below E0 - 2 hbar omega
    if (e - m < 0) out.emplace_back(0, e);            // down, would rise above E0
  }
  return out;
}

SpinEnergyMatrix rf_flipper_unitary(double theta, int m) {
  check_angle(theta, "rf_flipper");
  check_multiplier(m);
  const double c = std::cos(theta / 2.0);
  const Complex s = kI * std::sin(theta / 2.0);
  SpinEnergyMatrix u = SpinEnergyMatrix::Identity();
  for (int e = 0; e + m < kEnergyDim; ++e) {
    const int up = se_index(1, e);
    const int down = se_index(0, e + m);
    u(up, up) = c;
    u(down, up) = s;
    u(down, down) = c;
    u(up, down) = s;
  }
  return u;
}

Eigen::Matrix2cd dc_flipper_unitary(double theta) {
  check_angle(theta, "dc_flipper");
  const double c = std::cos(theta / 2.0);
  const Complex s = kI * std::sin(theta / 2.0);
  Eigen::Matrix2cd u;
  u << c, s, s, c;  // basis (down, up)
  return u;
}

BeamOutput run_beamline(const BeamlineConfig& config) {
  config.validate();

  Vec12 in = Vec12::Zero();
  in(static_cast<Eigen::Index>(label_index({0, 1, 0}))) = 1.0;
  Mat12 rho = in * in.adjoint();

  auto apply = [&rho](const Mat12& k) { rho = (k * rho * k.adjoint()).eval(); };

  for (const auto& c : config.components) {
    switch (c.kind) {
      case ComponentKind::splitter: {
        Eigen::Matrix2cd h;
        h << 1.0, 1.0, 1.0, -1.0;
        h /= std::sqrt(2.0);
        apply(kron_operator(Eigen::MatrixXcd(h), Eigen::MatrixXcd::Identity(2, 2), Eigen::MatrixXcd::Identity(3, 3)));
        break;
      }
      case ComponentKind::rf_flipper:
        check_truncation(rho, c);
        apply(lift(rf_flipper_unitary(c.params.flip_angle, c.params.frequency_multiplier), c.location));
        break;
      case ComponentKind::dc_flipper:
        apply(lift(spin_only(dc_flipper_unitary(c.params.flip_angle)), c.location));
        break;
      case ComponentKind::phase_shifter:
        apply(path_diag(1.0, std::exp(kI * c.params.phase)));
        break;
      case ComponentKind::spin_phase_shifter: {
        Eigen::Matrix2cd s = Eigen::Matrix2cd::Identity();
        s(1, 1) = std::exp(kI * c.params.phase);
        apply(lift(spin_only(s), c.location));
        break;
      }
      case ComponentKind::absorber: {
        const double amp = std::sqrt(c.params.transmission);
        apply(c.location == Location::path_I ? path_diag(amp, 1.0) : path_diag(1.0, amp));
        break;
      }
      case ComponentKind::blocker:
        apply(path_projector(1 - c.params.blocked_path));
        break;
      case ComponentKind::dephaser: {
        const double p = c.params.dephasing;
        const Mat12 d0 = path_projector(0);
        const Mat12 d1 = path_projector(1);
        rho = ((1.0 - p) * rho + p * (d0 * rho * d0 + d1 * rho * d1)).eval();
        break;
      }
      case ComponentKind::supermirror: {
        Eigen::Matrix2cd up = Eigen::Matrix2cd::Zero();
        up(1, 1) = 1.0;
        apply(lift(spin_only(up), Location::both));
        break;
      }
    }
  }

  BeamOutput out;
  out.survival = rho.trace().real();
  if (out.survival <= kSurvivalFloor) {
    out.survival = 0.0;
    return out;
  }
  Mat12 normalized = 0.5 * (rho + rho.adjoint()) / out.survival;
  normalized /= normalized.trace().real();
  out.rho.emplace(normalized);
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(StateKind kind) {
  switch (kind) {
    case StateKind::GHZ: return "GHZ";
    case StateKind::W_sym: return "W_sym";
    case StateKind::W_asym: return "W_asym";
  }
  return "?";
}

StateKind parse_state_kind(const std::string& s) {
  if (s == "GHZ" || s == "ghz") return StateKind::GHZ;
  if (s == "W_sym" || s == "w_sym") return StateKind::W_sym;
  if (s == "W_asym" || s == "w_asym") return StateKind::W_asym;
  throw std::invalid_argument("unknown state kind '" + s + "' (expected ghz, w_sym or w_asym)");
}

BeamlineConfig preparation(const PreparationSpec& spec) {
  if (!(spec.flip_error >= 0.0 && spec.flip_error <= kPi)) {
    throw std::invalid_argument("flip error must lie in [0, pi]");
  }
  const double scale = 1.0 - spec.flip_error / kPi;
  BeamlineConfig cfg;
  cfg.components.push_back(Component::splitter());
  if (spec.flippers_on) {
    if (spec.kind == StateKind::GHZ) {
      cfg.components.push_back(Component::rf_flipper(Location::path_II, kPi * scale, 1));
    } else {
      cfg.components.push_back(Component::rf_flipper(Location::path_I, kPi * scale, 2));
      cfg.components.push_back(Component::rf_flipper(Location::path_I, kPi / 2.0 * scale, 1));
      cfg.components.push_back(Component::rf_flipper(Location::path_II, kPi * scale, 1));
    }
  }
  if (spec.kind == StateKind::W_sym) cfg.components.push_back(Component::absorber(Location::path_II, 0.5));
  if (spec.dephasing > 0.0) cfg.components.push_back(Component::dephaser(spec.dephasing));
  if (spec.blocked_path) cfg.components.push_back(Component::blocker(*spec.blocked_path));
  return cfg;
}

std::string to_string(ChainKind kind) {
  switch (kind) {
    case ChainKind::plain: return "plain";
    case ChainKind::spin_flip_pi: return "spin_flip_pi";
    case ChainKind::coherence_ab: return "coherence_ab";
    case ChainKind::coherence_ac: return "coherence_ac";
    case ChainKind::coherence_bc: return "coherence_bc";
    case ChainKind::coherence_ghz: return "coherence_ghz";
  }
  return "?";
}

ChainKind parse_chain_kind(const std::string& s) {
  for (auto k : {ChainKind::plain, ChainKind::spin_flip_pi, ChainKind::coherence_ab, ChainKind::coherence_ac,
                 ChainKind::coherence_bc, ChainKind::coherence_ghz}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown analysis chain '" + s + "'");
}

std::vector<Component> analysis_chain(ChainKind kind, double scan_phase) {
  constexpr auto post = Location::post_recombination;
  switch (kind) {
    case ChainKind::plain: return {Component::supermirror()};
    case ChainKind::spin_flip_pi: return {Component::rf_flipper(post, kPi, 1), Component::supermirror()};
    case ChainKind::coherence_ab:
      return {Component::phase_shifter(scan_phase), Component::dc_flipper(post, kPi / 2.0),
              Component::supermirror()};
    case ChainKind::coherence_ac:
      return {Component::phase_shifter(scan_phase), Component::rf_flipper(post, kPi / 2.0, 1),
              Component::dc_flipper(post, kPi / 2.0), Component::supermirror()};
    case ChainKind::coherence_bc:
      return {Component::spin_phase_shifter(scan_phase), Component::rf_flipper(post, kPi / 2.0, 1),
              Component::supermirror()};
    case ChainKind::coherence_ghz:
      return {Component::phase_shifter(scan_phase), Component::rf_flipper(post, kPi / 2.0, 1),
              Component::supermirror()};
  }
  return {};
}

BeamlineConfig with_chain(const BeamlineConfig& prep, ChainKind kind, double scan_phase) {
  BeamlineConfig cfg = prep;
  for (auto& c : analysis_chain(kind, scan_phase)) cfg.components.push_back(std::move(c));
  return cfg;
}

double detector_probability(const BeamOutput& out, double visibility) {
  if (!(visibility > 0.0 && visibility <= 1.0)) throw std::invalid_argument("visibility must lie in (0, 1]");
  if (out.degenerate()) return 0.0;
  const Mat12& m = out.rho->matrix();
  constexpr int block = kSpinDim * kEnergyDim;
  const double direct = m.block(0, 0, block, block).trace().real() + m.block(block, block, block, block).trace().real();
  const double cross = m.block(0, block, block, block).trace().real();
  return out.survival * 0.5 * (direct + 2.0 * visibility * cross);
}

}  // namespace gme
