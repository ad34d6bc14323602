#include "gme/witnesses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace gme {

namespace {

const BasisLabel kGhzX{0, 1, 0};
const BasisLabel kGhzY{1, 0, 1};

double expectation(const DensityMatrix& rho, const Vec12& v) {
  return (v.adjoint() * rho.matrix() * v)(0, 0).real();
}

ProductState swap_factors(const ProductState& from, const ProductState& to, const SubsystemSet& subs) {
  ProductState out = from;
  if (subs.contains(kPath)) out.path = to.path;
  if (subs.contains(kSpin)) out.spin = to.spin;
  if (subs.contains(kEnergy)) out.energy = to.energy;
  return out;
}

Vec12 unit_kron(const ProductState& p) {
  const Vec12 v = kron(p.path, p.spin, p.energy);
  const double n = v.norm();
  if (!(n > 0.0)) throw std::invalid_argument("product state has a zero factor");
  return v / n;
}

// Population source used by the element-based evaluation. Tracks which
// defaulted labels were consulted.
class PopulationLookup {
 public:
  PopulationLookup(const ElementMap& elements, std::set<BasisLabel> required)
      : elements_(elements), required_(std::move(required)) {}

  double operator()(const BasisLabel& l) {
    if (auto v = elements_.population(l)) return *v;
    if (required_.count(l)) {
      throw MissingElementError("missing required population <" + l.str() + "|rho|" + l.str() + ">");
    }
    assumed_.insert(l);
    return 0.0;
  }

  std::vector<BasisLabel> assumed() const { return {assumed_.begin(), assumed_.end()}; }

 private:
  const ElementMap& elements_;
  std::set<BasisLabel> required_;
  std::set<BasisLabel> assumed_;
};

double required_magnitude(const ElementMap& elements, const BasisLabel& a, const BasisLabel& b) {
  if (auto v = elements.magnitude(a, b)) return *v;
  throw MissingElementError("missing required element |<" + a.str() + "|rho|" + b.str() + ">|");
}

}  // namespace

std::string to_string(WitnessName name) {
  switch (name) {
    case WitnessName::GHZ: return "GHZ";
    case WitnessName::W_raw: return "W_raw";
    case WitnessName::W_scaled: return "W_scaled";
    case WitnessName::KSEP: return "KSEP";
  }
  return "?";
}

std::string to_string(ElementSource source) {
  return source == ElementSource::exact ? "exact" : "measured";
}

std::vector<SwapTerm> ghz_swap_terms() {
  return {{kGhzX, kGhzY, SubsystemSet{1}}, {kGhzX, kGhzY, SubsystemSet{2}}, {kGhzX, kGhzY, SubsystemSet{3}}};
}

std::vector<SwapTerm> w_swap_terms() {
  const auto w = w_labels();
  std::vector<SwapTerm> out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      out.push_back({w[static_cast<std::size_t>(i)], w[static_cast<std::size_t>(j)], SubsystemSet{i + 1}});
    }
  }
  return out;
}

double witness_ghz(const DensityMatrix& rho) {
  double value = std::abs(rho.entry(kGhzX, kGhzY));
  for (const auto& t : ghz_swap_terms()) value -= std::sqrt(swapped_pair_population(rho, t.x, t.y, t.subs));
  return value;
}

double witness_w(const DensityMatrix& rho, WConvention convention) {
  const auto w = w_labels();
  double value = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i != j) value += std::abs(rho.entry(w[i], w[j]));
    }
  }
  for (const auto& t : w_swap_terms()) value -= std::sqrt(swapped_pair_population(rho, t.x, t.y, t.subs));
  return convention == WConvention::scaled ? 0.5 * value : value;
}

double witness_ksep(const DensityMatrix& rho, int k, const ProductState& phi1, const ProductState& phi2) {
  if (k != 2 && k != 3) throw std::domain_error("witness_ksep: k must be 2 or 3");
  const Vec12 v1 = unit_kron(phi1);
  const Vec12 v2 = unit_kron(phi2);
  double value = std::abs((v1.adjoint() * rho.matrix() * v2)(0, 0));
  const double power = 1.0 / (2.0 * k);
  for (const auto& partition : Partition::all_with_parts(k)) {
    double prod = 1.0;
    for (const auto& part : partition.parts()) {
      const Vec12 a = unit_kron(swap_factors(phi1, phi2, part));
      const Vec12 b = unit_kron(swap_factors(phi2, phi1, part));
      prod *= std::max(0.0, expectation(rho, a)) * std::max(0.0, expectation(rho, b));
    }
    value -= std::pow(prod, power);
  }
  return value;
}

double witness_ksep(const DensityMatrix& rho, int k, const BasisLabel& phi1, const BasisLabel& phi2) {
  if (k != 2 && k != 3) throw std::domain_error("witness_ksep: k must be 2 or 3");
  double value = std::abs(rho.entry(phi1, phi2));
  const double power = 1.0 / (2.0 * k);
  for (const auto& partition : Partition::all_with_parts(k)) {
    double prod = 1.0;
    for (const auto& part : partition.parts()) {
      prod *= std::max(0.0, swapped_pair_population(rho, phi1, phi2, part));
    }
    value -= std::pow(prod, power);
  }
  return value;
}

double witness_ksep(const DensityMatrix& rho, int k, const PureState& phi1, const PureState& phi2) {
  const auto f1 = factorize(phi1);
  const auto f2 = factorize(phi2);
  if (!f1 || !f2) throw std::invalid_argument("witness_ksep: phi1 and phi2 must be product states");
  return witness_ksep(rho, k, *f1, *f2);
}

const std::vector<std::pair<BasisLabel, BasisLabel>>& phi_dictionary() {
  static const std::vector<std::pair<BasisLabel, BasisLabel>> dict = [] {
    const char* pairs[][2] = {
        {"010", "101"}, {"011", "002"}, {"101", "011"}, {"101", "002"}, {"000", "111"},
        {"001", "110"}, {"002", "112"}, {"012", "100"}, {"010", "001"}, {"110", "011"},
        {"100", "012"}, {"111", "002"}, {"000", "011"}, {"102", "010"}, {"112", "000"},
        {"001", "010"}, {"101", "110"}, {"012", "101"}, {"111", "000"}, {"100", "102"},
    };
    std::vector<std::pair<BasisLabel, BasisLabel>> out;
    for (const auto& p : pairs) out.emplace_back(BasisLabel::parse(p[0]), BasisLabel::parse(p[1]));
    return out;
  }();
  return dict;
}

WitnessReport best_ksep(const DensityMatrix& rho, int k) {
  WitnessReport best;
  best.name = WitnessName::KSEP;
  best.k = k;
  best.value = -std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : phi_dictionary()) {
    const double v = witness_ksep(rho, k, a, b);
    if (v > best.value) {
      best.value = v;
      best.phi = std::make_pair(a, b);
    }
  }
  return best;
}

double fidelity_witness(const DensityMatrix& rho, const PureState& target) {
  return fidelity(rho, target) - 0.5;
}

// ---------------------------------------------------------------------------

void ElementMap::set_population(const BasisLabel& label, double value) {
  label_index(label);
  pops_[label] = value;
}

void ElementMap::set_magnitude(const BasisLabel& bra, const BasisLabel& ket, double value) {
  label_index(bra);
  label_index(ket);
  mags_[std::minmax(bra, ket)] = value;
}

std::optional<double> ElementMap::population(const BasisLabel& label) const {
  if (auto it = pops_.find(label); it != pops_.end()) return it->second;
  return std::nullopt;
}

std::optional<double> ElementMap::magnitude(const BasisLabel& bra, const BasisLabel& ket) const {
  if (bra == ket) return population(bra);
  if (auto it = mags_.find(std::minmax(bra, ket)); it != mags_.end()) return it->second;
  return std::nullopt;
}

ElementMap ElementMap::from_density(const DensityMatrix& rho) {
  ElementMap m;
  for (std::size_t i = 0; i < static_cast<std::size_t>(kDim); ++i) {
    const auto a = BasisLabel::from_index(i);
    m.set_population(a, rho.population(a));
    for (std::size_t j = i + 1; j < static_cast<std::size_t>(kDim); ++j) {
      const auto b = BasisLabel::from_index(j);
      m.set_magnitude(a, b, std::abs(rho.entry(a, b)));
    }
  }
  return m;
}

WitnessReport witness_from_elements(const ElementMap& elements, const WitnessRequest& request) {
  WitnessReport report;
  report.name = request.name;
  report.element_source = ElementSource::measured;

  switch (request.name) {
    case WitnessName::GHZ: {
      PopulationLookup pop(elements, {kGhzX, kGhzY});
      double value = required_magnitude(elements, kGhzX, kGhzY);
      for (const auto& t : ghz_swap_terms()) {
        const auto [xs, ys] = swap_components(t.x, t.y, t.subs);
        value -= std::sqrt(std::max(0.0, pop(xs) * pop(ys)));
      }
      report.value = value;
      report.phi = std::make_pair(kGhzX, kGhzY);
      report.assumed_zero = pop.assumed();
      break;
    }
    case WitnessName::W_raw:
    case WitnessName::W_scaled: {
      const auto w = w_labels();
      PopulationLookup pop(elements, {w.begin(), w.end()});
      double value = 0.0;
      for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
          if (i != j) value += required_magnitude(elements, w[i], w[j]);
        }
      }
      for (const auto& t : w_swap_terms()) {
        const auto [xs, ys] = swap_components(t.x, t.y, t.subs);
        value -= std::sqrt(std::max(0.0, pop(xs) * pop(ys)));
      }
      report.value = request.name == WitnessName::W_scaled ? 0.5 * value : value;
      report.assumed_zero = pop.assumed();
      break;
    }
    case WitnessName::KSEP: {
      if (request.k != 2 && request.k != 3) throw std::domain_error("witness_ksep: k must be 2 or 3");
      PopulationLookup pop(elements, {request.phi1, request.phi2});
      double value = required_magnitude(elements, request.phi1, request.phi2);
      const double power = 1.0 / (2.0 * request.k);
      for (const auto& partition : Partition::all_with_parts(request.k)) {
        double prod = 1.0;
        for (const auto& part : partition.parts()) {
          const auto [xs, ys] = swap_components(request.phi1, request.phi2, part);
          prod *= std::max(0.0, pop(xs) * pop(ys));
        }
        value -= std::pow(prod, power);
      }
      report.value = value;
      report.k = request.k;
      report.phi = std::make_pair(request.phi1, request.phi2);
      report.assumed_zero = pop.assumed();
      break;
    }
  }
  return report;
}

}  // namespace gme
