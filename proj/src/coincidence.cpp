#include "superact/coincidence.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "superact/format.hpp"

namespace superact {

namespace {

constexpr std::array<std::string_view, 8> kModeNames = {"t1", "t2", "a1", "b1", "c1", "a2", "b2", "c2"};

struct SourceBranches {
  std::array<Photon, 2> hh;
  std::array<Photon, 2> vv;
};

// Output modes of each source in its HH and VV branch.
const std::array<SourceBranches, 4> kSources = {{
    {{{{Mode::t1, Polarization::H}, {Mode::a1, Polarization::H}}},
     {{{Mode::t1, Polarization::V}, {Mode::c1, Polarization::V}}}},
    {{{{Mode::b1, Polarization::H}, {Mode::c1, Polarization::H}}},
     {{{Mode::b1, Polarization::V}, {Mode::a1, Polarization::V}}}},
    {{{{Mode::a2, Polarization::H}, {Mode::c2, Polarization::H}}},
     {{{Mode::a2, Polarization::V}, {Mode::b2, Polarization::V}}}},
    {{{{Mode::t2, Polarization::H}, {Mode::b2, Polarization::H}}},
     {{{Mode::t2, Polarization::V}, {Mode::c2, Polarization::V}}}},
}};

bool source_emits(int source, Mode m) {
  const auto& s = kSources[static_cast<std::size_t>(source)];
  for (const auto& ph : s.hh)
    if (ph.mode == m) return true;
  for (const auto& ph : s.vv)
    if (ph.mode == m) return true;
  return false;
}

enum Terminal { T1, T2, A3, A4, B3, B4, C3, C4 };

// Terminal reached by an unflipped photon: [party][copy][pol].
constexpr Terminal kRoute[3][2][2] = {
    {{A3, A4}, {A4, A3}},
    {{B4, B3}, {B3, B4}},
    {{C3, C4}, {C4, C3}},
};

std::string branches_for(int h, int v) { return std::string(static_cast<std::size_t>(h), 'H') + std::string(static_cast<std::size_t>(v), 'V'); }

}  // namespace

std::string_view mode_name(Mode m) { return kModeNames[static_cast<std::size_t>(m)]; }

Mode parse_mode(std::string_view name) {
  for (std::size_t i = 0; i < kModeNames.size(); ++i)
    if (kModeNames[i] == name) return static_cast<Mode>(i);
  throw std::invalid_argument("unknown mode label \"" + std::string(name) + "\"");
}

void EmissionEvent::validate() const {
  for (int s = 0; s < 4; ++s) {
    for (const auto& pair : sources[static_cast<std::size_t>(s)]) {
      for (const auto& ph : pair.photons) {
        if (static_cast<std::size_t>(ph.mode) >= kModeNames.size()) {
          throw std::invalid_argument("unknown mode label");
        }
        if (!source_emits(s, ph.mode)) {
          throw std::invalid_argument("source " + std::to_string(s + 1) + " cannot emit into mode " +
                                      std::string(mode_name(ph.mode)));
        }
      }
    }
  }
}

std::array<int, 4> EmissionEvent::occupancy() const {
  std::array<int, 4> n{};
  for (std::size_t s = 0; s < 4; ++s) n[s] = static_cast<int>(sources[s].size());
  return n;
}

PhotonPair emit(int source, Polarization branch) {
  if (source < 0 || source > 3) throw std::invalid_argument("source index must be 0..3");
  const auto& s = kSources[static_cast<std::size_t>(source)];
  return {branch == Polarization::H ? s.hh : s.vv};
}

EmissionEvent make_event(const std::array<std::string, 4>& branches) {
  EmissionEvent e;
  for (int s = 0; s < 4; ++s) {
    for (char c : branches[static_cast<std::size_t>(s)]) {
      if (c != 'H' && c != 'V') throw std::invalid_argument("branch letters must be H or V");
      e.sources[static_cast<std::size_t>(s)].push_back(emit(s, c == 'H' ? Polarization::H : Polarization::V));
    }
  }
  const auto n = e.occupancy();
  e.order = n == std::array<int, 4>{1, 1, 1, 1} ? EmissionOrder::Ideal : EmissionOrder::DoublePair;
  return e;
}

DetectionPattern route_photons(const EmissionEvent& event, const HwpSettings& settings) {
  event.validate();
  DetectionPattern out{};
  for (const auto& source : event.sources) {
    for (const auto& pair : source) {
      for (const auto& ph : pair.photons) {
        if (ph.mode == Mode::t1) {
          ++out[T1];
          continue;
        }
        if (ph.mode == Mode::t2) {
          ++out[T2];
          continue;
        }
        const int index = static_cast<int>(ph.mode) - static_cast<int>(Mode::a1);
        const int copy = index / 3;
        const int party = index % 3;
        const MotorSetting& m = settings.copies[static_cast<std::size_t>(copy)];
        const bool flip = (party == 0 && m.m2) || (party == 1 && (m.m2 != m.m3));
        int pol = ph.pol == Polarization::H ? 0 : 1;
        if (flip) pol ^= 1;
        ++out[kRoute[party][copy][pol]];
      }
    }
  }
  return out;
}

bool is_eightfold_coincidence(const DetectionPattern& pattern) {
  return std::all_of(pattern.begin(), pattern.end(), [](int c) { return c == 1; });
}

std::string class_label(const std::array<int, 4>& n) {
  std::string label;
  for (std::size_t s = 0; s < 4; ++s) {
    if (s > 0) label += '-';
    if (n[s] == 0) {
      label += '0';
    } else {
      label += 'g' + std::to_string(s + 1);
      if (n[s] > 1) label += '^' + std::to_string(n[s]);
    }
  }
  return label;
}

EnumerationReport enumerate_same_order_events() {
  EnumerationReport report;
  std::array<int, 4> n{};
  for (n[0] = 4; n[0] >= 0; --n[0])
    for (n[1] = 4 - n[0]; n[1] >= 0; --n[1])
      for (n[2] = 4 - n[0] - n[1]; n[2] >= 0; --n[2]) {
        n[3] = 4 - n[0] - n[1] - n[2];
        ClassSummary summary{class_label(n), n, n == std::array<int, 4>{1, 1, 1, 1}, 0, 0};
        // Number of H branches per source, counted down so all-H comes first.
        std::array<int, 4> h{};
        for (h[0] = n[0]; h[0] >= 0; --h[0])
          for (h[1] = n[1]; h[1] >= 0; --h[1])
            for (h[2] = n[2]; h[2] >= 0; --h[2])
              for (h[3] = n[3]; h[3] >= 0; --h[3]) {
                std::array<std::string, 4> branches;
                for (std::size_t s = 0; s < 4; ++s) branches[s] = branches_for(h[s], n[s] - h[s]);
                const EmissionEvent event = make_event(branches);
                for (int c1 = 0; c1 < 4; ++c1)
                  for (int c2 = 0; c2 < 4; ++c2) {
                    HwpSettings hwp;
                    hwp.copies[0] = {(c1 & 2) != 0, (c1 & 1) != 0};
                    hwp.copies[1] = {(c2 & 2) != 0, (c2 & 1) != 0};
                    const DetectionPattern pattern = route_photons(event, hwp);
                    const bool passed = is_eightfold_coincidence(pattern);
                    report.records.push_back({summary.label, n, branches, hwp, pattern, passed});
                    ++summary.events;
                    ++report.total_events;
                    if (passed) {
                      ++summary.passing;
                      if (!summary.ideal) ++report.false_accepts;
                    }
                  }
              }
        report.classes.push_back(summary);
      }
  return report;
}

std::string enumeration_csv(const EnumerationReport& report) {
  std::ostringstream os;
  os << "class,n1,n2,n3,n4,src1,src2,src3,src4,m2_copy1,m3_copy1,m2_copy2,m3_copy2";
  for (auto t : kTerminalNames) os << ',' << t;
  os << ",verdict\n";
  for (const auto& r : report.records) {
    os << r.class_label;
    for (int x : r.occupancy) os << ',' << x;
    for (const auto& b : r.branches) os << ',' << (b.empty() ? "0" : b);
    for (const auto& m : r.settings.copies) os << ',' << (m.m2 ? "in" : "out") << ',' << (m.m3 ? "in" : "out");
    for (int c : r.pattern) os << ',' << c;
    os << ',' << (r.passed ? "pass" : "reject") << '\n';
  }
  return os.str();
}

PreparationSchedule preparation_schedule(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("preparation_schedule: p must lie in [0, 1]");
  const double pp = 2.0 * p / (1.0 + p);
  PreparationSchedule s{p, pp, {}};
  // With PBS_t1 inserted only one polarization of the herald reaches its
  // detector.
  const PreparationRow all[] = {
      {"G0+", true, false, false, pp, 0.5},
      {"G0", false, false, false, (1.0 - pp) / 4.0, 1.0},
      {"G1", false, true, false, (1.0 - pp) / 4.0, 1.0},
      {"G2", false, false, true, (1.0 - pp) / 4.0, 1.0},
      {"G3", false, true, true, (1.0 - pp) / 4.0, 1.0},
  };
  for (const auto& row : all)
    if (row.probability > 0.0) s.rows.push_back(row);
  return s;
}

DensityMatrix component_state(bool m1, bool m2, bool m3) {
  Matrix m(8, 8);
  if (m1) {
    m = make_ghz(0, 1).projector();
  } else {
    m(0, 0) = 0.5;
    m(7, 7) = 0.5;
  }
  DensityMatrix rho = DensityMatrix::from_matrix(m);
  if (m2) rho = apply_local(rho, pauli_x(), 0);
  if (m2 != m3) rho = apply_local(rho, pauli_x(), 1);
  return rho;
}

DensityMatrix mixture(const PreparationSchedule& schedule) {
  Matrix sum(8, 8);
  double weight = 0.0;
  for (const auto& row : schedule.rows) {
    const double w = row.probability * row.herald_efficiency;
    sum += w * component_state(row.m1, row.m2, row.m3).matrix();
    weight += w;
  }
  if (weight <= 0.0) throw std::invalid_argument("mixture: schedule has no weight");
  sum *= 1.0 / weight;
  return DensityMatrix::from_matrix(sum.hermitian_part());
}

std::string schedule_csv(const PreparationSchedule& schedule) {
  std::ostringstream os;
  os << "component,m1,m2,m3,probability,herald_efficiency\n";
  for (const auto& r : schedule.rows) {
    os << r.label << ',' << (r.m1 ? "in" : "out") << ',' << (r.m2 ? "in" : "out") << ','
       << (r.m3 ? "in" : "out") << ',' << format_double(r.probability) << ','
       << format_double(r.herald_efficiency) << '\n';
  }
  return os.str();
}

double generation_probability(double p, double g) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("generation_probability: p must lie in [0, 1]");
  if (!(g >= 0.0)) throw std::invalid_argument("generation_probability: g must be nonnegative");
  return g * g / (2.0 * (1.0 + p));
}

}  // namespace superact
