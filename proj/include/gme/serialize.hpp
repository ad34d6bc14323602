// serialize.hpp
// JSON and CSV encodings shared by the command-line tool and tests.
//
// JSON documents carry "schema_version". CSV floats use 12 significant
// digits so reruns are byte-identical.

#pragma once

#include <string>

#include <json.hpp>

#include "gme/beamline.hpp"
#include "gme/experiment.hpp"
#include "gme/witnesses.hpp"

namespace gme {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

using nlohmann::json;

/// %.12g
std::string format_g12(double x);

json to_json(const PureState& psi);
json to_json(const DensityMatrix& rho);
/// Accepts {"amplitudes": [{"label": "101", "re": x, "im": y}, ...]} or
/// {"density": [[[re, im], ...12], ...12]}; density wins when both are present.
DensityMatrix density_from_json(const json& j);

json to_json(const WitnessReport& r);

json to_json(const Component& c);
Component component_from_json(const json& j);
json to_json(const BeamlineConfig& cfg);
/// {"components": [{"kind": ..., "location": ..., "params": {...}}, ...]}
BeamlineConfig beamline_from_json(const json& j);
json to_json(const BeamOutput& out);

json to_json(const SinusoidFit& f);
json to_json(const CampaignResult& r);
json to_json(const CampaignReport& r);

/// Header "row,col,re,im", one line per entry, labels as ket strings.
std::string density_csv(const DensityMatrix& rho);
/// Header "phase_rad,counts,fit_value".
std::string scan_csv(const ScanResult& scan);

}  // namespace gme
