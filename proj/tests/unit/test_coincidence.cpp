#include <doctest.h>

#include <cmath>

#include "superact/coincidence.hpp"

using namespace superact;

namespace {
struct TableRow {
  std::array<std::string, 4> branches;
  DetectionPattern pattern;
  bool pass;
};

// Rows 1-8 of the double-pair table: per-source branches, terminal counts
// (t1 t2 a3 a4 b3 b4 c3 c4) and verdict.
const TableRow kTable[] = {
    {{"H", "H", "H", "H"}, {1, 1, 1, 1, 1, 1, 1, 1}, true},
    {{"V", "V", "V", "V"}, {1, 1, 1, 1, 1, 1, 1, 1}, true},
    {{"H", "HH", "", "H"}, {1, 1, 1, 0, 1, 2, 2, 0}, false},
    {{"H", "HH", "", "V"}, {1, 1, 1, 0, 0, 2, 3, 0}, false},
    {{"H", "HV", "", "H"}, {1, 1, 1, 1, 2, 1, 1, 0}, false},
    {{"V", "HV", "", "V"}, {1, 1, 0, 1, 1, 1, 2, 1}, false},
    {{"H", "HV", "", "V"}, {1, 1, 1, 1, 1, 1, 2, 0}, false},
    {{"V", "HV", "", "H"}, {1, 1, 0, 1, 2, 1, 1, 1}, false},
};

int total(const DetectionPattern& d) {
  int s = 0;
  for (int c : d) s += c;
  return s;
}
}  // namespace

TEST_CASE("modes") {
  CHECK(parse_mode("c2") == Mode::c2);
  CHECK(mode_name(Mode::b1) == "b1");
  CHECK_THROWS_AS(parse_mode("d1"), std::invalid_argument);
}

TEST_CASE("event construction") {
  const auto e = make_event({"H", "HH", "", "V"});
  CHECK(e.occupancy() == std::array<int, 4>{1, 2, 0, 1});
  CHECK(e.order == EmissionOrder::DoublePair);
  CHECK(make_event({"H", "V", "H", "V"}).order == EmissionOrder::Ideal);
  CHECK_THROWS_AS(make_event({"X", "", "", ""}), std::invalid_argument);
  CHECK_THROWS_AS(emit(4, Polarization::H), std::invalid_argument);

  EmissionEvent bad;
  bad.sources[0].push_back({{{{Mode::t1, Polarization::H}, {Mode::b2, Polarization::H}}}});
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(route_photons(bad), std::invalid_argument);
}

TEST_CASE("routing reproduces the double-pair table") {
  for (const auto& row : kTable) {
    const auto e = make_event(row.branches);
    const auto d = route_photons(e);
    CHECK(d == row.pattern);
    CHECK(is_eightfold_coincidence(d) == row.pass);
    int photons = 0;
    for (int n : e.occupancy()) photons += 2 * n;
    CHECK(total(d) == photons);
  }
  CHECK(route_photons(EmissionEvent{}) == DetectionPattern{});
  CHECK_FALSE(is_eightfold_coincidence(DetectionPattern{}));
}

TEST_CASE("exhaustive same-order enumeration") {
  const auto report = enumerate_same_order_events();
  CHECK(report.false_accepts == 0);
  CHECK(report.classes.size() == 35);
  int events = 0;
  bool saw_g2 = false, saw_g3 = false;
  for (const auto& c : report.classes) {
    events += c.events;
    if (c.ideal) {
      CHECK(c.label == "g1-g2-g3-g4");
      CHECK(c.passing > 0);
    } else {
      CHECK(c.passing == 0);
    }
    if (c.label == "g1-g2^2-0-g4") saw_g2 = true;
    if (c.label == "g1-0-g3^2-g4") saw_g3 = true;
  }
  CHECK(saw_g2);
  CHECK(saw_g3);
  CHECK(events == report.total_events);
  CHECK(report.records.size() == static_cast<std::size_t>(report.total_events));
  for (const auto& r : report.records) {
    if (r.passed) CHECK(r.class_label == "g1-g2-g3-g4");
    int photons = 0;
    for (int n : r.occupancy) photons += 2 * n;
    CHECK(total(r.pattern) == photons);
  }
  // Both ideal rows of the table pass without wave plates.
  int ideal_plain = 0;
  for (const auto& r : report.records)
    if (r.class_label == "g1-g2-g3-g4" && r.passed && !r.settings.copies[0].m2 && !r.settings.copies[0].m3 &&
        !r.settings.copies[1].m2 && !r.settings.copies[1].m3)
      ++ideal_plain;
  CHECK(ideal_plain == 2);

  const auto csv = enumeration_csv(report);
  CHECK(csv.rfind("class,n1,n2,n3,n4", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == report.total_events + 1);
}

TEST_CASE("a wave plate on path c would let double pairs through") {
  // Flip the polarization of every photon entering the c parity check of one
  // copy, which is what a plate on that path would do.
  int false_passes = 0;
  for (const auto& r : enumerate_same_order_events().records) {
    if (r.class_label == "g1-g2-g3-g4") continue;
    if (r.settings.copies[0].m2 || r.settings.copies[0].m3 || r.settings.copies[1].m2 || r.settings.copies[1].m3)
      continue;
    for (Mode target : {Mode::c1, Mode::c2}) {
      EmissionEvent e = make_event(r.branches);
      for (auto& source : e.sources)
        for (auto& pair : source)
          for (auto& ph : pair.photons)
            if (ph.mode == target) ph.pol = ph.pol == Polarization::H ? Polarization::V : Polarization::H;
      if (is_eightfold_coincidence(route_photons(e))) ++false_passes;
    }
  }
  CHECK(false_passes > 0);
}

TEST_CASE("preparation schedule") {
  const auto s = preparation_schedule(0.5);
  CHECK(std::abs(s.p_prime - 2.0 / 3.0) < 1e-15);
  REQUIRE(s.rows.size() == 5);
  CHECK(s.rows[0].label == "G0+");
  CHECK(std::abs(s.rows[0].probability - 2.0 / 3.0) < 1e-15);
  double sum = 0.0;
  for (const auto& r : s.rows) sum += r.probability;
  CHECK(std::abs(sum - 1.0) < 1e-15);
  for (std::size_t i = 1; i < 5; ++i) CHECK(std::abs(s.rows[i].probability - 1.0 / 12.0) < 1e-15);

  const auto one = preparation_schedule(1.0);
  REQUIRE(one.rows.size() == 1);
  CHECK(one.rows[0].probability == 1.0);
  CHECK(preparation_schedule(0.0).rows.size() == 4);
  CHECK_THROWS_AS(preparation_schedule(1.5), std::invalid_argument);

  const auto csv = schedule_csv(s);
  CHECK(csv.rfind("component,m1,m2,m3,probability,herald_efficiency\n", 0) == 0);
  CHECK(csv.find("G0+,in,out,out,0.66666666666666663,0.5") != std::string::npos);
}

TEST_CASE("component states") {
  const auto g0 = component_state(false, false, false);
  CHECK(g0(0, 0).real() == 0.5);
  CHECK(g0(7, 7).real() == 0.5);
  CHECK(std::abs(g0(0, 7)) == 0.0);
  auto classical = [](int i) {
    return 0.5 * (make_ghz(i, 1).projector() + make_ghz(i, -1).projector());
  };
  CHECK(max_abs_diff(component_state(true, false, false).matrix(), make_ghz(0, 1).projector()) < 1e-15);
  CHECK(max_abs_diff(component_state(false, true, false).matrix(), classical(1)) < 1e-15);
  CHECK(max_abs_diff(component_state(false, false, true).matrix(), classical(2)) < 1e-15);
  CHECK(max_abs_diff(component_state(false, true, true).matrix(), classical(3)) < 1e-15);
}

TEST_CASE("schedule mixture reproduces noisy GHZ") {
  for (int i = 0; i <= 20; ++i) {
    const double p = i / 20.0;
    CAPTURE(p);
    CHECK(max_abs_diff(mixture(preparation_schedule(p)).matrix(), noisy_ghz(p).matrix()) <= 1e-14);
  }
}

TEST_CASE("generation probability") {
  CHECK(generation_probability(1.0, 0.1) == doctest::Approx(0.01 / 4));
  CHECK(generation_probability(0.0, 0.1) == doctest::Approx(0.01 / 2));
  for (double p : {0.1, 0.36, 0.5, 0.9}) {
    // Herald-weighted fraction of kept events, times the g^2/2 fusion rate.
    double kept = 0.0;
    for (const auto& r : preparation_schedule(p).rows) kept += r.probability * r.herald_efficiency;
    CHECK(std::abs(generation_probability(p, 0.2) - kept * 0.04 / 2) < 1e-15);
  }
  CHECK_THROWS_AS(generation_probability(-0.1, 0.1), std::invalid_argument);
}
