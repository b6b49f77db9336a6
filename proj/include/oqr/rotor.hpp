#pragma once

#include <compare>
#include <string>
#include <vector>

namespace oqr {

/// Rigid linear rotor. B and mu are held in internal units (see units.hpp).
class MoleculeSpec {
 public:
  /// Throws std::invalid_argument unless B > 0 and mu >= 0.
  static MoleculeSpec from_spectroscopic(std::string name, double b_cm_inv, double mu_debye);

  const std::string& name() const { return name_; }
  double b() const { return b_; }    // rad/ps
  double mu() const { return mu_; }  // rad/ps per V/m
  double b_cm_inv() const;
  double mu_debye() const;

 private:
  MoleculeSpec(std::string name, double b, double mu) : name_(std::move(name)), b_(b), mu_(mu) {}
  std::string name_;
  double b_;
  double mu_;
};

/// Built-in molecules by name ("HCN"). Throws std::invalid_argument otherwise.
MoleculeSpec molecule_preset(const std::string& name);
std::vector<std::string> molecule_preset_names();

struct RotLabel {
  int j = 0;
  int m = 0;

  /// Throws std::invalid_argument unless j >= 0 and |m| <= j.
  static RotLabel make(int j, int m);
  auto operator<=>(const RotLabel&) const = default;
};

/// E_J = B J (J+1) in rad/ps.
double rot_energy(int j, const MoleculeSpec& mol);

/// <J+1 M| cos(theta) |J M>. Throws std::invalid_argument for |M| > J.
double cos_theta_element(int j, int m);

/// Period of the revival, pi / B, in ps.
double revival_time(const MoleculeSpec& mol);

/// How the thermal ensemble weights its (J0, M) members.
enum class EnsembleWeighting {
  /// exp(-E_J/kT) / sum_J (2J+1) exp(-E_J/kT) per sublevel; sums to one.
  Sublevel,
  /// Every sublevel of level J carries P(J) = exp(-E_J/kT) / sum_J exp(-E_J/kT).
  /// The weights then sum to sum_J (2J+1) P(J) > 1.
  Level,
};

struct WeightedLabel {
  RotLabel label;
  double weight = 0.0;
};

inline constexpr double kDefaultBoltzmannCutoff = 1e-6;

/// Boltzmann weights over (J0, M), sorted by (J0, M). The table stops at the
/// smallest J* whose cumulative probability reaches 1 - cutoff.
/// Sublevel weights are renormalized to sum to one after truncation. Level
/// weights are renormalized so the kept P(J) sum to one.
/// Throws std::invalid_argument for temperature <= 0 or cutoff outside (0, 1).
std::vector<WeightedLabel> boltzmann_weights(double temperature_k, const MoleculeSpec& mol,
                                             double cutoff = kDefaultBoltzmannCutoff,
                                             EnsembleWeighting weighting = EnsembleWeighting::Sublevel);

}  // namespace oqr
