// gme_cli: states, witnesses, beamlines, scans, campaigns and table reproduction.
//
// Every JSON document carries schema_version and a manifest (command,
// parameters, seed, tool version, outputs). No timestamps are written, so a
// rerun with the same manifest produces byte-identical output.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "gme/beamline.hpp"
#include "gme/experiment.hpp"
#include "gme/serialize.hpp"
#include "gme/states.hpp"
#include "gme/witnesses.hpp"

using namespace gme;

namespace {

constexpr double kAmplitudeTol = 1e-3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json manifest(const std::string& command, const json& params, std::optional<std::uint64_t> seed,
              const std::vector<std::string>& outputs) {
  return {{"command", command},
          {"parameters", params},
          {"seed", seed ? json(*seed) : json(nullptr)},
          {"tool_version", kToolVersion},
          {"outputs", outputs}};
}

json document(const std::string& command, const json& params, std::optional<std::uint64_t> seed,
              const std::vector<std::string>& outputs) {
  return {{"schema_version", kSchemaVersion}, {"manifest", manifest(command, params, seed, outputs)}};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

// Pretty JSON to the output path, or stdout when none is given.
void emit(const json& doc, const std::string& out) {
  const std::string text = doc.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    write_file(out, text);
  }
}

json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("malformed JSON in '" + path + "': " + e.what());
  }
}

std::vector<std::string> nonempty(std::initializer_list<std::string> paths) {
  std::vector<std::string> v;
  for (const auto& p : paths)
    if (!p.empty()) v.push_back(p);
  return v;
}

// Command-line amplitudes are rounded by hand; accept a squared norm within
// kAmplitudeTol of 1 and rescale.
template <typename Params>
Params renormalized(Params p, std::initializer_list<double Params::*> fields, const char* what) {
  double n2 = 0.0;
  for (auto f : fields) {
    if (p.*f < 0.0) throw UsageError(std::string(what) + " amplitudes must be nonnegative");
    n2 += (p.*f) * (p.*f);
  }
  if (std::abs(n2 - 1.0) > kAmplitudeTol) {
    std::ostringstream os;
    os << what << " amplitudes are not normalized: sum of squares " << n2 << " (tolerance " << kAmplitudeTol << ")";
    throw UsageError(os.str());
  }
  for (auto f : fields) p.*f /= std::sqrt(n2);
  return p;
}

PureState builtin_target(const std::string& name) {
  if (name == "ghz") return make_ghz(GHZParams::balanced());
  if (name == "w_sym") return make_w(WParams::symmetric());
  if (name == "w_asym") return make_w(WParams::asymmetric());
  throw UsageError("unknown builtin state '" + name + "' (expected ghz, w_sym or w_asym)");
}

StateKind kind_of(const std::string& name) {
  try {
    return parse_state_kind(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// ---------------------------------------------------------------------------

struct StateOpts {
  std::string kind;
  double a = 0, b = 0, c = 0, d = 0, e = 0;
  std::string out, csv;
};

int cmd_state(const StateOpts& o) {
  std::optional<PureState> psi;
  json params{{"kind", o.kind}};
  if (o.kind == "w") {
    const auto p = renormalized(WParams{o.a, o.b, o.c}, {&WParams::a, &WParams::b, &WParams::c}, "W");
    psi = make_w(p);
    params.update({{"a", o.a}, {"b", o.b}, {"c", o.c}});
  } else if (o.kind == "ghz") {
    const auto p = renormalized(GHZParams{o.d, o.e}, {&GHZParams::d, &GHZParams::e}, "GHZ");
    psi = make_ghz(p);
    params.update({{"d", o.d}, {"e", o.e}});
  } else {
    throw UsageError("--kind must be w or ghz");
  }
  const auto rho = DensityMatrix::from_pure(*psi);
  json doc = document("state", params, std::nullopt, nonempty({o.out, o.csv}));
  doc["amplitudes"] = to_json(*psi).at("amplitudes");
  doc["density"] = to_json(rho);
  if (!o.csv.empty()) write_file(o.csv, density_csv(rho));
  emit(doc, o.out);
  return 0;
}

// ---------------------------------------------------------------------------

struct WitnessOpts {
  std::string builtin, state_file, witness = "all", target;
  bool scaled = false, raw = false;
  int k = 3;
  std::string phi1 = "010", phi2 = "101";
  double dephase = 0.0;
  std::string out;
};

int cmd_witness(const WitnessOpts& o) {
  if (o.builtin.empty() == o.state_file.empty()) throw UsageError("give exactly one of --builtin or --state-file");
  if (o.scaled && o.raw) throw UsageError("--scaled and --raw are exclusive");
  DensityMatrix rho = o.builtin.empty() ? density_from_json(read_json(o.state_file))
                                        : DensityMatrix::from_pure(builtin_target(o.builtin));
  if (o.dephase > 0.0) rho = path_dephase(rho, DephasingStrength(o.dephase));

  const std::string target_name = !o.target.empty() ? o.target : o.builtin;
  const auto conv = o.raw ? WConvention::raw : WConvention::scaled;
  json reports = json::array();
  auto add = [&](WitnessName name, double value) {
    WitnessReport r;
    r.name = name;
    r.value = value;
    reports.push_back(to_json(r));
  };
  const bool all = o.witness == "all";
  if (all || o.witness == "ghz") add(WitnessName::GHZ, witness_ghz(rho));
  if (all || o.witness == "w") add(o.raw ? WitnessName::W_raw : WitnessName::W_scaled, witness_w(rho, conv));
  if (all || o.witness == "ksep") {
    WitnessReport r;
    r.name = WitnessName::KSEP;
    r.k = o.k;
    const auto p1 = BasisLabel::parse(o.phi1);
    const auto p2 = BasisLabel::parse(o.phi2);
    r.phi = std::make_pair(p1, p2);
    r.value = witness_ksep(rho, o.k, p1, p2);
    reports.push_back(to_json(r));
  }
  json fid = nullptr;
  if (all || o.witness == "fidelity") {
    if (target_name.empty()) {
      if (!all) throw UsageError("--witness fidelity with --state-file needs --target");
    } else {
      const auto t = builtin_target(target_name);
      fid = {{"target", target_name}, {"fidelity", fidelity(rho, t)}, {"witness", fidelity_witness(rho, t)}};
    }
  }
  if (!all && reports.empty() && fid.is_null()) throw UsageError("unknown witness '" + o.witness + "'");

  json params{{"builtin", o.builtin}, {"state_file", o.state_file}, {"witness", o.witness},
              {"convention", o.raw ? "raw" : "scaled"}, {"k", o.k}, {"phi1", o.phi1}, {"phi2", o.phi2},
              {"dephase", o.dephase}, {"target", target_name}};
  json doc = document("witness", params, std::nullopt, nonempty({o.out}));
  doc["witnesses"] = reports;
  doc["fidelity"] = fid;
  if (!o.out.empty()) emit(doc, o.out);
  std::cout << doc.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct SimulateOpts {
  std::string config, out, csv;
  double visibility = 1.0;
};

int cmd_simulate(const SimulateOpts& o) {
  const auto cfg = beamline_from_json(read_json(o.config));
  const auto beam = run_beamline(cfg);
  json doc = document("simulate", {{"config", o.config}, {"visibility", o.visibility}}, std::nullopt,
                      nonempty({o.out, o.csv}));
  doc["beamline"] = to_json(cfg);
  doc["output"] = to_json(beam);
  doc["detector_probability"] = detector_probability(beam, o.visibility);
  if (!o.csv.empty()) {
    if (beam.degenerate()) throw std::runtime_error("no transmitted state to write: survival is 0");
    write_file(o.csv, density_csv(*beam.rho));
  }
  emit(doc, o.out);
  return 0;
}

// ---------------------------------------------------------------------------

struct ScanOpts {
  std::string state = "ghz", config, chain;
  double flip_error = 0.0, dephase = 0.0, visibility = 1.0, counts = 1e6;
  int points = 16, repeats = 1;
  bool poisson = false;
  std::uint64_t seed = 0;
  std::string out, json_out;
};

int cmd_scan(const ScanOpts& o) {
  ScanSpec spec;
  if (!o.config.empty()) {
    spec.preparation = beamline_from_json(read_json(o.config));
  } else {
    PreparationSpec p;
    p.kind = kind_of(o.state);
    p.flip_error = o.flip_error;
    p.dephasing = o.dephase;
    spec.preparation = preparation(p);
  }
  std::string chain = o.chain;
  if (chain.empty()) chain = o.state == "ghz" && o.config.empty() ? "coherence_ghz" : "coherence_ab";
  try {
    spec.chain = parse_chain_kind(chain);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  spec.grid = phase_grid(o.points);
  spec.counts_per_point = o.counts;
  spec.poisson = o.poisson;
  spec.seed = o.seed;
  spec.visibility = o.visibility;
  spec.repeats = o.repeats;
  const auto scan = simulate_scan(spec);
  const std::string csv = scan_csv(scan);
  if (o.out.empty()) {
    std::cout << csv;
  } else {
    write_file(o.out, csv);
  }
  if (!o.json_out.empty()) {
    json params{{"state", o.config.empty() ? o.state : ""}, {"config", o.config}, {"chain", chain},
                {"flip_error", o.flip_error}, {"dephase", o.dephase}, {"visibility", o.visibility},
                {"counts_per_point", o.counts}, {"points", o.points}, {"repeats", o.repeats}, {"poisson", o.poisson}};
    json doc = document("scan", params, o.seed, nonempty({o.out, o.json_out}));
    doc["fit"] = to_json(scan.fit);
    emit(doc, o.json_out);
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct CampaignOpts {
  std::string state = "ghz";
  double flip_error = 0.0, dephase = 0.0, visibility = 1.0, counts = 1e6;
  std::optional<double> fidelity_target, dephased_fidelity;
  bool poisson = false;
  std::uint64_t seed = 0;
  int points = 16, scan_repeats = 4, intensity_repeats = 10;
  std::string out, scans_dir;
};

int cmd_campaign(const CampaignOpts& o) {
  CampaignSettings s;
  s.kind = kind_of(o.state);
  s.flip_error = o.flip_error;
  s.dephasing = o.dephase;
  if (o.fidelity_target) s.flip_error = calibrate(CalibrationParameter::delta, *o.fidelity_target, s.kind);
  if (o.dephased_fidelity) {
    s.dephasing = calibrate(CalibrationParameter::p, *o.dephased_fidelity, s.kind, s.flip_error);
  }
  s.visibility = o.visibility;
  s.counts_per_point = o.counts;
  s.poisson = o.poisson;
  s.seed = o.seed;
  s.points = o.points;
  s.scan_repeats = o.scan_repeats;
  s.intensity_repeats = o.intensity_repeats;

  std::vector<std::string> outputs = nonempty({o.out});
  const auto report = run_campaign(s);
  if (!o.scans_dir.empty()) {
    for (const auto& [key, scan] : acquire_scans(s).scans) {
      const std::string path = o.scans_dir + "/scan_" + key + ".csv";
      write_file(path, scan_csv(scan));
      outputs.push_back(path);
    }
  }
  json params{{"state", o.state}, {"flip_error", o.flip_error}, {"dephase", o.dephase},
              {"fidelity_target", o.fidelity_target ? json(*o.fidelity_target) : json(nullptr)},
              {"dephased_fidelity", o.dephased_fidelity ? json(*o.dephased_fidelity) : json(nullptr)},
              {"visibility", o.visibility}, {"counts_per_point", o.counts}, {"poisson", o.poisson},
              {"points", o.points}, {"scan_repeats", o.scan_repeats}, {"intensity_repeats", o.intensity_repeats}};
  json doc = document("campaign", params, o.seed, outputs);
  doc["report"] = to_json(report);
  emit(doc, o.out);
  return 0;
}

// ---------------------------------------------------------------------------

struct PaperValue {
  double value;
  double err;
};

struct ReproduceOpts {
  std::string table = "I";
  bool ideal = false, paper = false, json_stdout = false, poisson = false;
  double counts = 1e6, visibility = 1.0;
  std::uint64_t seed = 0;
  std::string out;
};

// Published fidelities, used as calibration targets.
const std::map<StateKind, double> kPreparedFidelity = {
    {StateKind::GHZ, 0.985}, {StateKind::W_sym, 0.987}, {StateKind::W_asym, 0.948}};
const std::map<StateKind, double> kDegradedFidelity = {{StateKind::W_sym, 0.646}, {StateKind::W_asym, 0.611}};

struct Row {
  StateKind kind;
  std::string witness;
  std::optional<double> noiseless, noiseless_exact, with_noise, with_noise_exact;
  std::optional<PaperValue> paper_noiseless, paper_with_noise;
  bool phi_unspecified = false;
  json calibration = json::object();
};

double pick(const std::vector<WitnessReport>& reps, WitnessName name) {
  for (const auto& r : reps)
    if (r.name == name) return r.value;
  throw std::runtime_error("campaign did not report " + to_string(name));
}

std::string fmt(std::optional<double> v, int prec = 3) {
  if (!v) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", prec, *v);
  return buf;
}

std::string fmt(std::optional<PaperValue> v) {
  if (!v) return "NA";
  return fmt(v->value, 2) + "+-" + fmt(v->err, 2);
}

int cmd_reproduce(const ReproduceOpts& o) {
  if (o.table != "I" && o.table != "II") throw UsageError("--table must be I or II");
  const bool t1 = o.table == "I";
  const WitnessName w_name = t1 ? WitnessName::W_scaled : WitnessName::KSEP;
  const WitnessName ghz_name = t1 ? WitnessName::GHZ : WitnessName::KSEP;

  std::map<StateKind, std::pair<PaperValue, std::optional<PaperValue>>> paper;
  if (t1) {
    paper = {{StateKind::GHZ, {{0.49, 0.01}, std::nullopt}},
             {StateKind::W_sym, {{0.47, 0.03}, PaperValue{-0.04, 0.02}}},
             {StateKind::W_asym, {{0.46, 0.02}, PaperValue{-0.01, 0.01}}}};
  } else {
    paper = {{StateKind::GHZ, {{0.49, 0.01}, std::nullopt}},
             {StateKind::W_sym, {{0.65, 0.02}, PaperValue{0.31, 0.01}}},
             {StateKind::W_asym, {{0.45, 0.01}, PaperValue{0.11, 0.01}}}};
  }

  std::vector<Row> rows;
  for (auto kind : {StateKind::GHZ, StateKind::W_sym, StateKind::W_asym}) {
    Row row;
    row.kind = kind;
    const bool ghz = kind == StateKind::GHZ;
    row.witness = t1 ? (ghz ? "I_GHZ" : "I_W (scaled)") : "I_3sep";
    row.paper_noiseless = paper[kind].first;
    row.paper_with_noise = paper[kind].second;
    row.phi_unspecified = !t1 && !ghz;
    if (!o.paper) {
      CampaignSettings s;
      s.kind = kind;
      s.visibility = o.visibility;
      s.counts_per_point = o.counts;
      s.poisson = o.poisson;
      s.seed = o.seed;
      if (!o.ideal) s.flip_error = calibrate(CalibrationParameter::delta, kPreparedFidelity.at(kind), kind);
      row.calibration["flip_error"] = s.flip_error;
      const auto clean = run_campaign(s);
      row.noiseless = pick(clean.measured, ghz ? ghz_name : w_name);
      row.noiseless_exact = pick(clean.exact, ghz ? ghz_name : w_name);
      row.calibration["fidelity"] = clean.fidelity;
      if (!ghz) {
        s.dephasing = calibrate(CalibrationParameter::p, kDegradedFidelity.at(kind), kind, s.flip_error);
        const auto noisy = run_campaign(s);
        row.with_noise = pick(noisy.measured, w_name);
        row.with_noise_exact = pick(noisy.exact, w_name);
        row.calibration["dephasing"] = s.dephasing;
        row.calibration["dephased_fidelity"] = noisy.fidelity;
      }
    }
    rows.push_back(row);
  }

  json jrows = json::array();
  auto opt = [](std::optional<double> v) { return v ? json(*v) : json(nullptr); };
  auto popt = [](std::optional<PaperValue> v) {
    return v ? json{{"value", v->value}, {"err", v->err}} : json(nullptr);
  };
  for (const auto& r : rows) {
    json j{{"state", to_string(r.kind)},
           {"witness", r.witness},
           {"paper_noiseless", popt(r.paper_noiseless)},
           {"paper_with_noise", popt(r.paper_with_noise)}};
    if (!o.paper) {
      j["noiseless"] = opt(r.noiseless);
      j["noiseless_exact"] = opt(r.noiseless_exact);
      j["with_noise"] = opt(r.with_noise);
      j["with_noise_exact"] = opt(r.with_noise_exact);
      j["calibration"] = r.calibration;
    }
    if (!t1) {
      j["phi"] = {"011", "002"};
      if (r.kind == StateKind::GHZ) j["phi"] = {"010", "101"};
      j["flags"] = r.phi_unspecified ? json::array({"phi-unspecified in paper"}) : json::array();
    }
    jrows.push_back(j);
  }
  json params{{"table", o.table}, {"ideal", o.ideal}, {"paper", o.paper}, {"counts_per_point", o.counts},
              {"poisson", o.poisson}, {"visibility", o.visibility}};
  json doc = document("reproduce", params, o.seed, nonempty({o.out}));
  doc["rows"] = jrows;
  if (!o.out.empty()) emit(doc, o.out);

  if (o.json_stdout) {
    std::cout << doc.dump(2) << "\n";
    return 0;
  }
  std::printf("Table %s (%s)\n", o.table.c_str(),
              o.paper ? "paper values" : (o.ideal ? "ideal simulation" : "flip error calibrated to paper fidelities"));
  if (o.paper) {
    std::printf("%-8s %-14s %-14s %-14s\n", "state", "witness", "paper", "paper_noise");
  } else {
    std::printf("%-8s %-14s %-10s %-10s %-14s %-14s\n", "state", "witness", "noiseless", "with_noise", "paper",
                "paper_noise");
  }
  for (const auto& r : rows) {
    const std::string flag = r.phi_unspecified ? "  [phi-unspecified in paper]" : "";
    if (o.paper) {
      std::printf("%-8s %-14s %-14s %-14s%s\n", to_string(r.kind).c_str(), r.witness.c_str(),
                  fmt(r.paper_noiseless).c_str(), fmt(r.paper_with_noise).c_str(), flag.c_str());
    } else {
      std::printf("%-8s %-14s %-10s %-10s %-14s %-14s%s\n", to_string(r.kind).c_str(), r.witness.c_str(),
                  fmt(r.noiseless).c_str(), fmt(r.with_noise).c_str(), fmt(r.paper_noiseless).c_str(),
                  fmt(r.paper_with_noise).c_str(), flag.c_str());
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct SampleTestOpts {
  std::uint64_t samples = 10000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out;
};

struct SuiteMax {
  double ghz = -1e300, w = -1e300, k2 = -1e300, k3 = -1e300;
  std::uint64_t violations = 0;
};

int cmd_sample_test(const SampleTestOpts& o) {
  if (o.samples == 0) throw UsageError("--samples must be positive");
  if (o.threads == 0) throw UsageError("--threads must be positive");
  constexpr double kTol = 1e-9;
  // Each sample index owns its seeds, so the reduction is independent of the split.
  std::vector<SuiteMax> shard(o.threads);
  std::atomic<std::uint64_t> next{0};
  auto work = [&](unsigned t) {
    SuiteMax& m = shard[t];
    for (std::uint64_t i = next++; i < o.samples; i = next++) {
      const std::uint64_t s = o.seed + i;
      const auto bi = sample_biseparable(s);
      const double g = witness_ghz(bi);
      const double w = witness_w(bi);
      m.ghz = std::max(m.ghz, g);
      m.w = std::max(m.w, w);
      m.violations += (g > kTol) + (w > kTol);
      const auto r2 = sample_ksep(2, s ^ 0x9e3779b97f4a7c15ULL);
      const auto r3 = sample_ksep(3, s ^ 0xc2b2ae3d27d4eb4fULL);
      for (const auto& [a, b] : phi_dictionary()) {
        const double v2 = witness_ksep(r2, 2, a, b);
        const double v3 = witness_ksep(r3, 3, a, b);
        m.k2 = std::max(m.k2, v2);
        m.k3 = std::max(m.k3, v3);
        m.violations += (v2 > kTol) + (v3 > kTol);
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < o.threads; ++t) pool.emplace_back(work, t);
  work(0);
  for (auto& th : pool) th.join();

  SuiteMax total;
  for (const auto& m : shard) {
    total.ghz = std::max(total.ghz, m.ghz);
    total.w = std::max(total.w, m.w);
    total.k2 = std::max(total.k2, m.k2);
    total.k3 = std::max(total.k3, m.k3);
    total.violations += m.violations;
  }
  json doc = document("sample-test", {{"samples", o.samples}, {"tolerance", kTol}}, o.seed, nonempty({o.out}));
  doc["suites"] = {
      {"biseparable_ghz", {{"max", total.ghz}, {"samples", o.samples}}},
      {"biseparable_w_scaled", {{"max", total.w}, {"samples", o.samples}}},
      {"ksep_2", {{"max", total.k2}, {"samples", o.samples}, {"phi_pairs", phi_dictionary().size()}}},
      {"ksep_3", {{"max", total.k3}, {"samples", o.samples}, {"phi_pairs", phi_dictionary().size()}}},
  };
  doc["violations"] = total.violations;
  doc["pass"] = total.violations == 0;
  emit(doc, o.out);
  return total.violations == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Genuine multipartite entanglement toolkit for single-neutron path/spin/energy states"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  StateOpts so;
  auto* st = app.add_subcommand("state", "Build a W or GHZ state and write amplitudes and density matrix");
  st->add_option("--kind", so.kind, "w or ghz")->required()->check(CLI::IsMember({"w", "ghz"}));
  st->add_option("--a", so.a, "W amplitude on |101>");
  st->add_option("--b", so.b, "W amplitude on |011>");
  st->add_option("--c", so.c, "W amplitude on |002>");
  st->add_option("--d", so.d, "GHZ amplitude on |101>");
  st->add_option("--e", so.e, "GHZ amplitude on |010>");
  st->add_option("--out", so.out, "JSON output path (stdout if omitted)");
  st->add_option("--csv", so.csv, "density matrix CSV output path");

  WitnessOpts wo;
  auto* wi = app.add_subcommand("witness", "Evaluate entanglement witnesses on a state");
  wi->add_option("--builtin", wo.builtin, "ghz, w_sym or w_asym");
  wi->add_option("--state-file", wo.state_file, "JSON state with \"amplitudes\" or \"density\"");
  wi->add_option("--witness", wo.witness, "ghz, w, ksep, fidelity or all")
      ->check(CLI::IsMember({"ghz", "w", "ksep", "fidelity", "all"}));
  wi->add_flag("--scaled", wo.scaled, "W witness as raw/2 (default)");
  wi->add_flag("--raw", wo.raw, "W witness without the 1/2 scaling");
  wi->add_option("--k", wo.k, "k for the k-separability witness")->check(CLI::IsMember({2, 3}));
  wi->add_option("--phi1", wo.phi1, "first product basis label, e.g. 010");
  wi->add_option("--phi2", wo.phi2, "second product basis label, e.g. 101");
  wi->add_option("--dephase", wo.dephase, "path dephasing p applied first")->check(CLI::Range(0.0, 1.0));
  wi->add_option("--target", wo.target, "fidelity target: ghz, w_sym or w_asym");
  wi->add_option("--out", wo.out, "also write the report here");

  SimulateOpts mo;
  auto* si = app.add_subcommand("simulate", "Run a beamline JSON config and report the output state");
  si->add_option("--config", mo.config, "beamline JSON")->required();
  si->add_option("--visibility", mo.visibility, "instrument visibility in (0,1]");
  si->add_option("--out", mo.out, "JSON output path");
  si->add_option("--csv", mo.csv, "density matrix CSV output path");

  ScanOpts co;
  auto* sc = app.add_subcommand("scan", "Simulate one phase scan and write phase_rad,counts,fit_value CSV");
  sc->add_option("--state", co.state, "ghz, w_sym or w_asym preparation");
  sc->add_option("--config", co.config, "beamline JSON preparation instead of --state");
  sc->add_option("--chain", co.chain,
                 "plain, spin_flip_pi, coherence_ab, coherence_ac, coherence_bc or coherence_ghz");
  sc->add_option("--flip-error", co.flip_error, "flip angle error delta (rad)");
  sc->add_option("--dephase", co.dephase, "dephaser strength p")->check(CLI::Range(0.0, 1.0));
  sc->add_option("--visibility", co.visibility, "instrument visibility in (0,1]");
  sc->add_option("--counts", co.counts, "expected counts per point");
  sc->add_option("--points", co.points, "phase points over 2pi");
  sc->add_option("--repeats", co.repeats, "summed repeats per point");
  sc->add_flag("--poisson", co.poisson, "Poisson-sample the counts");
  sc->add_option("--seed", co.seed, "RNG seed");
  sc->add_option("--out", co.out, "CSV output path (stdout if omitted)");
  sc->add_option("--json", co.json_out, "fit summary JSON path");

  CampaignOpts ca;
  auto* cp = app.add_subcommand("campaign", "Run the full measurement campaign for one state");
  cp->add_option("--state", ca.state, "ghz, w_sym or w_asym");
  cp->add_option("--flip-error", ca.flip_error, "flip angle error delta (rad)");
  cp->add_option("--fidelity-target", ca.fidelity_target, "calibrate delta to this preparation fidelity");
  cp->add_option("--dephase", ca.dephase, "dephaser strength p")->check(CLI::Range(0.0, 1.0));
  cp->add_option("--dephased-fidelity", ca.dephased_fidelity, "calibrate p to this fidelity");
  cp->add_option("--visibility", ca.visibility, "instrument visibility in (0,1]");
  cp->add_option("--counts", ca.counts, "expected counts per point");
  cp->add_flag("--poisson", ca.poisson, "Poisson-sample the counts");
  cp->add_option("--seed", ca.seed, "RNG seed");
  cp->add_option("--points", ca.points, "phase points per scan");
  cp->add_option("--scan-repeats", ca.scan_repeats, "repeats per contrast scan");
  cp->add_option("--intensity-repeats", ca.intensity_repeats, "repeats per intensity run");
  cp->add_option("--out", ca.out, "JSON output path");
  cp->add_option("--scans-dir", ca.scans_dir, "directory for per-scan CSV files");

  ReproduceOpts ro;
  auto* rp = app.add_subcommand("reproduce", "Tabulate simulated witness values next to the published tables");
  rp->add_option("--table", ro.table, "I or II")->check(CLI::IsMember({"I", "II"}));
  rp->add_flag("--ideal", ro.ideal, "noiseless column without flip errors");
  rp->add_flag("--paper", ro.paper, "published values only");
  rp->add_flag("--json", ro.json_stdout, "print JSON instead of the text table");
  rp->add_option("--counts", ro.counts, "expected counts per point");
  rp->add_flag("--poisson", ro.poisson, "Poisson-sample the counts");
  rp->add_option("--visibility", ro.visibility, "instrument visibility in (0,1]");
  rp->add_option("--seed", ro.seed, "RNG seed");
  rp->add_option("--out", ro.out, "JSON output path");

  SampleTestOpts to;
  auto* sa = app.add_subcommand("sample-test", "Run the witness nonpositivity suites on seeded separable samples");
  sa->add_option("--samples", to.samples, "samples per suite");
  sa->add_option("--seed", to.seed, "first seed");
  sa->add_option("--threads", to.threads, "worker threads (results do not depend on it)");
  sa->add_option("--out", to.out, "JSON output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*st) return cmd_state(so);
    if (*wi) return cmd_witness(wo);
    if (*si) return cmd_simulate(mo);
    if (*sc) return cmd_scan(co);
    if (*cp) return cmd_campaign(ca);
    if (*rp) return cmd_reproduce(ro);
    if (*sa) return cmd_sample_test(to);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
