#include "oqr/rotor.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "oqr/units.hpp"

namespace oqr {

MoleculeSpec MoleculeSpec::from_spectroscopic(std::string name, double b_cm_inv, double mu_debye) {
  if (!(b_cm_inv > 0.0) || !std::isfinite(b_cm_inv)) {
    throw std::invalid_argument("rotational constant must be positive");
  }
  if (!(mu_debye >= 0.0) || !std::isfinite(mu_debye)) {
    throw std::invalid_argument("dipole moment must be non-negative");
  }
  return MoleculeSpec(std::move(name), units::cm_inv_to_internal(b_cm_inv),
                      units::debye_to_internal(mu_debye));
}

double MoleculeSpec::b_cm_inv() const { return units::internal_to_cm_inv(b_); }
double MoleculeSpec::mu_debye() const { return units::internal_to_debye(mu_); }

MoleculeSpec molecule_preset(const std::string& name) {
  if (name == "HCN") return MoleculeSpec::from_spectroscopic("HCN", 1.457, 2.89);
  throw std::invalid_argument("unknown molecule preset: " + name);
}

std::vector<std::string> molecule_preset_names() { return {"HCN"}; }

RotLabel RotLabel::make(int j, int m) {
  if (j < 0 || std::abs(m) > j) {
    throw std::invalid_argument("invalid rotational label |" + std::to_string(j) + "," +
                                std::to_string(m) + ">");
  }
  return RotLabel{j, m};
}

double rot_energy(int j, const MoleculeSpec& mol) {
  if (j < 0) throw std::invalid_argument("J must be non-negative");
  return mol.b() * static_cast<double>(j) * static_cast<double>(j + 1);
}

double cos_theta_element(int j, int m) {
  if (j < 0 || std::abs(m) > j) {
    throw std::invalid_argument("cos_theta_element requires |M| <= J");
  }
  const double jp = j + 1.0;
  const double mm = static_cast<double>(m) * m;
  return std::sqrt((jp * jp - mm) / ((2.0 * j + 1.0) * (2.0 * j + 3.0)));
}

double revival_time(const MoleculeSpec& mol) { return units::kPi / mol.b(); }

std::vector<WeightedLabel> boltzmann_weights(double temperature_k, const MoleculeSpec& mol,
                                             double cutoff, EnsembleWeighting weighting) {
  if (!(temperature_k > 0.0)) throw std::invalid_argument("temperature must be positive");
  if (!(cutoff > 0.0 && cutoff < 1.0)) throw std::invalid_argument("cutoff must lie in (0, 1)");

  const double kt = units::kBoltzmannInternal * temperature_k;
  const auto factor = [&](int j) { return std::exp(-rot_energy(j, mol) / kt); };

  // Level probabilities p_J (with or without degeneracy) until negligible.
  std::vector<double> level;
  double z = 0.0;
  for (int j = 0;; ++j) {
    const double g = weighting == EnsembleWeighting::Sublevel ? 2.0 * j + 1.0 : 1.0;
    const double term = g * factor(j);
    level.push_back(term);
    z += term;
    if (term < 1e-18 * z && j > 0) break;
  }

  int j_star = 0;
  double cumulative = 0.0;
  for (int j = 0; j < static_cast<int>(level.size()); ++j) {
    cumulative += level[j] / z;
    j_star = j;
    if (cumulative >= 1.0 - cutoff) break;
  }

  std::vector<WeightedLabel> table;
  double kept = 0.0;
  for (int j = 0; j <= j_star; ++j) kept += level[j];
  for (int j = 0; j <= j_star; ++j) {
    const double per_sublevel =
        weighting == EnsembleWeighting::Sublevel ? level[j] / (2.0 * j + 1.0) : level[j];
    for (int m = -j; m <= j; ++m) table.push_back({RotLabel{j, m}, per_sublevel / kept});
  }
  if (weighting == EnsembleWeighting::Sublevel) {
    double sum = 0.0;
    for (const auto& w : table) sum += w.weight;
    for (auto& w : table) w.weight /= sum;
  }
  return table;
}

}  // namespace oqr
