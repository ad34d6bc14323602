#include "gme/serialize.hpp"

#include <cstdio>
#include <sstream>

namespace gme {

std::string format_g12(double x) {
  if (x == 0.0) x = 0.0;  // fold -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json to_json(const PureState& psi) {
  json amps = json::array();
  for (std::size_t i = 0; i < static_cast<std::size_t>(kDim); ++i) {
    const Complex a = psi.amplitudes()(static_cast<Eigen::Index>(i));
    amps.push_back({{"label", BasisLabel::from_index(i).str()}, {"re", a.real()}, {"im", a.imag()}});
  }
  return {{"amplitudes", amps}};
}

json to_json(const DensityMatrix& rho) {
  json rows = json::array();
  for (int r = 0; r < kDim; ++r) {
    json row = json::array();
    for (int c = 0; c < kDim; ++c) row.push_back({rho.matrix()(r, c).real(), rho.matrix()(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

DensityMatrix density_from_json(const json& j) {
  if (j.contains("density")) {
    const auto& rows = j.at("density");
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(kDim)) {
      throw std::invalid_argument("density must be a 12x12 array of [re, im] pairs");
    }
    Mat12 m;
    for (int r = 0; r < kDim; ++r) {
      const auto& row = rows.at(static_cast<std::size_t>(r));
      if (!row.is_array() || row.size() != static_cast<std::size_t>(kDim)) {
        throw std::invalid_argument("density row " + std::to_string(r) + " must have 12 entries");
      }
      for (int c = 0; c < kDim; ++c) {
        const auto& e = row.at(static_cast<std::size_t>(c));
        m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
      }
    }
    return DensityMatrix(m);
  }
  if (j.contains("amplitudes")) {
    Vec12 v = Vec12::Zero();
    for (const auto& a : j.at("amplitudes")) {
      const auto l = BasisLabel::parse(a.at("label").get<std::string>());
      v(static_cast<Eigen::Index>(label_index(l))) = Complex(a.at("re").get<double>(), a.value("im", 0.0));
    }
    return DensityMatrix::from_pure(PureState(v));
  }
  throw std::invalid_argument("state document needs an \"amplitudes\" or \"density\" field");
}

json to_json(const WitnessReport& r) {
  json j{{"name", to_string(r.name)},
         {"value", r.value},
         {"k", r.k ? json(*r.k) : json(nullptr)},
         {"element_source", to_string(r.element_source)}};
  j["phi"] = r.phi ? json::array({r.phi->first.str(), r.phi->second.str()}) : json(nullptr);
  json assumed = json::array();
  for (const auto& l : r.assumed_zero) assumed.push_back(l.str());
  j["assumed_zero"] = assumed;
  return j;
}

json to_json(const Component& c) {
  json params = json::object();
  const auto& p = c.params;
  switch (c.kind) {
    case ComponentKind::rf_flipper:
      params["flip_angle"] = p.flip_angle;
      params["frequency_multiplier"] = p.frequency_multiplier;
      break;
    case ComponentKind::dc_flipper: params["flip_angle"] = p.flip_angle; break;
    case ComponentKind::phase_shifter:
    case ComponentKind::spin_phase_shifter: params["phase"] = p.phase; break;
    case ComponentKind::absorber: params["transmission"] = p.transmission; break;
    case ComponentKind::blocker: params["blocked_path"] = p.blocked_path == 0 ? "path_I" : "path_II"; break;
    case ComponentKind::dephaser: params["dephasing"] = p.dephasing; break;
    case ComponentKind::splitter:
    case ComponentKind::supermirror: break;
  }
  return {{"kind", to_string(c.kind)}, {"location", to_string(c.location)}, {"params", params}};
}

Component component_from_json(const json& j) {
  Component c;
  c.kind = parse_component_kind(j.at("kind").get<std::string>());
  c.location = parse_location(j.value("location", std::string("both")));
  const json params = j.value("params", json::object());
  auto& p = c.params;
  p.flip_angle = params.value("flip_angle", 0.0);
  p.frequency_multiplier = params.value("frequency_multiplier", 1);
  p.phase = params.value("phase", 0.0);
  p.transmission = params.value("transmission", 1.0);
  p.dephasing = params.value("dephasing", 0.0);
  if (params.contains("blocked_path")) {
    const auto& b = params.at("blocked_path");
    if (b.is_string()) {
      p.blocked_path = parse_location(b.get<std::string>()) == Location::path_I ? 0 : 1;
    } else {
      p.blocked_path = b.get<int>();
    }
  }
  c.validate();
  return c;
}

json to_json(const BeamlineConfig& cfg) {
  json comps = json::array();
  for (const auto& c : cfg.components) comps.push_back(to_json(c));
  return {{"components", comps}};
}

BeamlineConfig beamline_from_json(const json& j) {
  if (!j.contains("components") || !j.at("components").is_array()) {
    throw std::invalid_argument("beamline document needs a \"components\" array");
  }
  BeamlineConfig cfg;
  for (const auto& c : j.at("components")) cfg.components.push_back(component_from_json(c));
  cfg.validate();
  return cfg;
}

json to_json(const BeamOutput& out) {
  json j{{"survival", out.survival}, {"degenerate", out.degenerate()}};
  j["density"] = out.rho ? to_json(*out.rho) : json(nullptr);
  return j;
}

json to_json(const SinusoidFit& f) {
  return {{"mean", f.mean},         {"amplitude", f.amplitude},       {"offset", f.offset},
          {"mean_err", f.mean_err}, {"amplitude_err", f.amplitude_err}, {"contrast", f.contrast},
          {"contrast_err", f.contrast_err}, {"chi2", f.chi2}};
}

json to_json(const CampaignResult& r) {
  json pops = json::object();
  for (const auto& [l, m] : r.populations) pops[l.str()] = {{"value", m.value}, {"err", m.err}};
  json mags = json::object();
  for (const auto& [p, m] : r.cross_magnitudes) {
    mags[p.first.str() + "," + p.second.str()] = {{"value", m.value}, {"err", m.err}};
  }
  json refs = json::object();
  for (const auto& [k, v] : r.reference_contrasts) refs[k] = v;
  return {{"state", to_string(r.kind)}, {"populations", pops}, {"cross_magnitudes", mags}, {"reference_contrasts", refs}};
}

json to_json(const CampaignReport& r) {
  const auto& s = r.settings;
  json settings{{"state", to_string(s.kind)},
                {"dephasing", s.dephasing},
                {"visibility", s.visibility},
                {"flip_error", s.flip_error},
                {"counts_per_point", s.counts_per_point},
                {"poisson", s.poisson},
                {"seed", s.seed},
                {"points", s.points},
                {"scan_repeats", s.scan_repeats},
                {"intensity_repeats", s.intensity_repeats}};
  json measured = json::array();
  for (const auto& w : r.measured) measured.push_back(to_json(w));
  json exact = json::array();
  for (const auto& w : r.exact) exact.push_back(to_json(w));
  return {{"settings", settings}, {"elements", to_json(r.elements)}, {"witnesses_measured", measured},
          {"witnesses_exact", exact}, {"fidelity", r.fidelity}, {"survival", r.survival}};
}

std::string density_csv(const DensityMatrix& rho) {
  std::ostringstream os;
  os << "row,col,re,im\n";
  for (int r = 0; r < kDim; ++r) {
    for (int c = 0; c < kDim; ++c) {
      const Complex x = rho.matrix()(r, c);
      os << BasisLabel::from_index(static_cast<std::size_t>(r)).str() << ','
         << BasisLabel::from_index(static_cast<std::size_t>(c)).str() << ',' << format_g12(x.real()) << ','
         << format_g12(x.imag()) << '\n';
    }
  }
  return os.str();
}

std::string scan_csv(const ScanResult& scan) {
  std::ostringstream os;
  os << "phase_rad,counts,fit_value\n";
  for (std::size_t i = 0; i < scan.phases.size(); ++i) {
    os << format_g12(scan.phases[i]) << ',' << format_g12(scan.counts[i]) << ',' << format_g12(scan.fit_value(i))
       << '\n';
  }
  return os.str();
}

}  // namespace gme
