#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "superact/quantum_state.hpp"

namespace superact {

/// Photon path labels. t1/t2 go straight to their terminals; a1, b1, c1 feed
/// the first-copy inputs of the three parity-check PBSs and a2, b2, c2 the
/// second-copy inputs.
enum class Mode { t1, t2, a1, b1, c1, a2, b2, c2 };
enum class Polarization { H, V };

std::string_view mode_name(Mode m);
/// Throws std::invalid_argument for an unknown label.
Mode parse_mode(std::string_view name);

struct Photon {
  Mode mode;
  Polarization pol;
};

struct PhotonPair {
  std::array<Photon, 2> photons;
};

enum class EmissionOrder { Ideal, DoublePair };

/// Pairs emitted by the four sources. Source s (0-based) only produces
/// photons on its own modes.
struct EmissionEvent {
  std::array<std::vector<PhotonPair>, 4> sources;
  EmissionOrder order = EmissionOrder::Ideal;

  /// Throws std::invalid_argument when a pair carries a foreign mode.
  void validate() const;
  std::array<int, 4> occupancy() const;
};

/// The pair emitted by `source` (0..3) in its HH or VV branch.
PhotonPair emit(int source, Polarization branch);

/// Builds an event from per-source branch strings such as {"H", "HH", "", "V"}.
EmissionEvent make_event(const std::array<std::string, 4>& branches);

/// Terminal counts in the order t1, t2, a3, a4, b3, b4, c3, c4.
using DetectionPattern = std::array<int, 8>;
inline constexpr std::array<std::string_view, 8> kTerminalNames = {"t1", "t2", "a3", "a4",
                                                                  "b3", "b4", "c3", "c4"};

/// Stepping-motor state of the two half-wave plates of one copy.
struct MotorSetting {
  bool m2 = false;
  bool m3 = false;
};

/// M2 flips the polarization on paths a and b of its copy; M3 flips path b.
struct HwpSettings {
  std::array<MotorSetting, 2> copies{};
};

DetectionPattern route_photons(const EmissionEvent& event, const HwpSettings& settings = {});
bool is_eightfold_coincidence(const DetectionPattern& pattern);

struct EventRecord {
  std::string class_label;
  std::array<int, 4> occupancy;
  std::array<std::string, 4> branches;
  HwpSettings settings;
  DetectionPattern pattern;
  bool passed;
};

struct ClassSummary {
  std::string label;
  std::array<int, 4> occupancy;
  bool ideal;
  int events;
  int passing;
};

struct EnumerationReport {
  std::vector<ClassSummary> classes;
  std::vector<EventRecord> records;
  int total_events = 0;
  /// Passing events outside the ideal class.
  int false_accepts = 0;
};

/// Every way of distributing four pairs over the four sources, every
/// multiset of HH/VV branches per source, and all 16 motor settings.
EnumerationReport enumerate_same_order_events();

std::string class_label(const std::array<int, 4>& occupancy);
std::string enumeration_csv(const EnumerationReport& report);

struct PreparationRow {
  std::string label;
  bool m1, m2, m3;
  double probability;
  /// Probability that the heralding photon is counted with this setting.
  double herald_efficiency;
};

struct PreparationSchedule {
  double p;
  double p_prime;
  std::vector<PreparationRow> rows;
};

PreparationSchedule preparation_schedule(double p);

/// Three-qubit state produced by the given motor flags.
DensityMatrix component_state(bool m1, bool m2, bool m3);

/// Herald-weighted average of the component states.
DensityMatrix mixture(const PreparationSchedule& schedule);

std::string schedule_csv(const PreparationSchedule& schedule);

/// g^2 / (2 (1 + p))
double generation_probability(double p, double g);

}  // namespace superact
