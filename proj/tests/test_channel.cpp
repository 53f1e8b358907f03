#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <vector>

#include "channel.hpp"
#include "errors.hpp"
#include "fixture.hpp"
#include "rng.hpp"

using namespace scf;

static doctest::Approx near(double v) { return doctest::Approx(v).epsilon(1e-9); }

TEST_CASE("link rates at the decoding thresholds") {
  CHECK(link_rate(1e6, std::pow(10.0, 1.527)) == near(5114831.616952597));
  CHECK(link_rate(1e6, std::pow(10.0, 1.144)) == near(3900293.772049739));
  CHECK(link_rate(2e6, 1.0) == near(2e6));  // log2(2) = 1
  CHECK_THROWS_AS(link_rate(0.0, 1.0), error);
  CHECK_THROWS_AS(link_rate(1e6, 0.0), error);
}

TEST_CASE("inverse-gain mean") {
  CHECK(m_constant({6, 6, 1.0}) == doctest::Approx(1.44).epsilon(1e-12));
  CHECK(m_constant({6, 6, std::pow(10.0, 0.1)}) ==
        doctest::Approx(1.1438326580029654).epsilon(1e-12));
  CHECK(m_constant({3, 4, 1.7}) == doctest::Approx(1.1764705882352942).epsilon(1e-12));
  // matches the general moment at n = -1
  CHECK(m_constant({5, 3, 2.0}) == near(fading_moment(-1, 5, 3, 2.0)));
  CHECK_THROWS_AS(m_constant({1.0, 6, 1.0}), error);  // E[1/g] diverges at m = 1
  CHECK_THROWS_AS(m_constant({6, 1.0, 1.0}), error);
  CHECK_THROWS_AS(m_constant({6, 6, 0.0}), error);
}

TEST_CASE("moments of the squared gain") {
  // first moment is the mean by construction
  CHECK(fading_moment(1, 6, 6, 1.0) == near(1.0));
  CHECK(fading_moment(1, 6, 6, 1.8) == near(1.8));
  CHECK(fading_moment(1, 2.5, 7.3, 0.4) == near(0.4));
  CHECK(fading_moment(0, 6, 6, 1.0) == near(1.0));
  CHECK(fading_moment(2, 6, 6, 1.0) == near(1.4583333333333317));
  CHECK(fading_moment(3, 6, 6, 1.0) == near(3.2407407407407303));

  SUBCASE("divergent orders are rejected") {
    CHECK_THROWS_WITH_AS(fading_moment(6, 6, 6, 1.0),
                         "fading_moment: divergent moment (need -m < n < m_s)", error);
    CHECK_THROWS_AS(fading_moment(-6, 6, 6, 1.0), error);
    CHECK_THROWS_AS(fading_moment(4, 3, 4, 1.0), error);
  }
}

namespace {

// plain Simpson over [0, cut] with enough panels to support a 1e-7 comparison
double pdf_quadrature(const std::function<double(double)>& f, double cut, int panels) {
  double acc = 0.0;
  const double h = cut / panels;
  for (int i = 0; i < panels; ++i) {
    const double a = i * h;
    acc += h / 6.0 * (f(a) + 4.0 * f(a + 0.5 * h) + f(a + h));
  }
  return acc;
}

}  // namespace

TEST_CASE("density integrates to one and reproduces the moments") {
  const struct {
    double m, m_s, g;
  } cases[] = {{6, 6, 1.0}, {6, 6, std::pow(10.0, 0.1)}, {2.5, 8, 0.7}, {4, 3, 2.2}};
  for (const auto& c : cases) {
    CAPTURE(c.m);
    CAPTURE(c.m_s);
    auto pdf = [&](double g) { return fading_pdf(g, c.m, c.m_s, c.g); };
    // heavy-tailed: integrate far out relative to the mean
    const double cut = 4000.0 * c.g;
    CHECK(pdf_quadrature(pdf, cut, 50000) == doctest::Approx(1.0).epsilon(1e-3));

    for (double n : {0.5, 1.0, 1.3, -0.5}) {
      if (!(c.m + n > 0) || !(c.m_s - n > 0)) continue;
      // at g = 0 a negative order fights the vanishing density; the product
      // tends to 0 whenever m + n > 1, which holds for every case here
      auto mn = [&](double g) { return g == 0.0 ? 0.0 : std::pow(g, n) * pdf(g); };
      CHECK(pdf_quadrature(mn, cut, 50000) ==
            doctest::Approx(fading_moment(n, c.m, c.m_s, c.g)).epsilon(1e-3));
    }
  }
}

TEST_CASE("density edge behavior at zero gain") {
  CHECK(fading_pdf(0.0, 6, 6, 1.0) == 0.0);           // shape m > 1
  CHECK(fading_pdf(0.0, 1.0, 6, 1.0) > 0.0);          // m = 1: finite limit
  CHECK(std::isinf(fading_pdf(0.0, 0.5, 6, 1.0)));    // m < 1: diverges
  CHECK(std::isfinite(fading_pdf(1e-12, 0.5, 6, 1.0)));
  CHECK_THROWS_AS(fading_pdf(-0.1, 6, 6, 1.0), error);
  // m = 1 limit agrees with the generic formula just off zero
  const double lim = fading_pdf(0.0, 1.0, 4, 1.3);
  CHECK(fading_pdf(1e-9, 1.0, 4, 1.3) == doctest::Approx(lim).epsilon(1e-6));
}

TEST_CASE("sampled fading matches the analytic mean and inverse mean") {
  Rng rng(123);
  const double g = std::pow(10.0, 0.1);
  double sum = 0.0, inv = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const double x = sample_fading(rng, 6, 6, g);
    REQUIRE(x > 0.0);
    sum += x;
    inv += 1.0 / x;
  }
  CHECK(sum / n == doctest::Approx(g).epsilon(0.01));
  CHECK(inv / n == doctest::Approx(1.1438326580029654).epsilon(0.02));
}

TEST_CASE("average transmit power") {
  ChannelParams p = testfix::reference_channel();
  const double mg = 1.1438326580029654;

  // v2i at the target's initial stand-off, assembled from the definition
  CHECK(avg_power(p, LinkClass::v2i, 200.0) ==
        near(mg * std::pow(10.0, 1.527) * 1e-8 * std::pow(200.0, 2.2)));
  CHECK(avg_power(p, LinkClass::v2i, 200.0) == near(0.044425107005966684));
  CHECK(avg_power(p, LinkClass::v2v, 300.0) == near(0.014341844240350553));
  CHECK(avg_power(p, LinkClass::v2i, 0.0) == 0.0);  // d^a with a > 0

  // power doubles per ~2^(1/a) distance factor
  CHECK(avg_power(p, LinkClass::v2v, 200.0) ==
        near(4.0 * avg_power(p, LinkClass::v2v, 100.0)));

  SUBCASE("strict flavor rejects out-of-range distances") {
    CHECK_THROWS_AS(avg_power(p, LinkClass::v2i, 500.0001), error);
    CHECK_THROWS_AS(avg_power(p, LinkClass::v2v, 300.0001), error);
    CHECK_THROWS_AS(avg_power(p, LinkClass::v2i, -1.0), error);
    CHECK(avg_power(p, LinkClass::v2i, 500.0) > 0.0);  // the edge itself is fine
  }
  SUBCASE("total flavor returns zero instead") {
    CHECK(avg_power_or_zero(p, LinkClass::v2i, 500.0001) == 0.0);
    CHECK(avg_power_or_zero(p, LinkClass::v2v, 1e9) == 0.0);
    CHECK(avg_power_or_zero(p, LinkClass::v2i, 123.0) ==
          near(avg_power(p, LinkClass::v2i, 123.0)));
  }
}

TEST_CASE("channel validation") {
  ChannelParams p = testfix::reference_channel();
  CHECK_NOTHROW(validate(p));
  SUBCASE("noise") {
    p.noise_w = 0.0;
    CHECK_THROWS_AS(validate(p), error);
  }
  SUBCASE("fading shapes") {
    p.fading.m = 1.0;
    CHECK_THROWS_AS(validate(p), error);
  }
  SUBCASE("link constants") {
    p.v2v.range_m = 0.0;
    CHECK_THROWS_AS(validate(p), error);
  }
}

TEST_CASE("frozen window energies for the reference scenario") {
  ChannelParams p = testfix::reference_channel();
  Kinematics kin = testfix::reference_kinematics();

  // the target's own download of its 138 Mbit share
  const double direct_end = 26.980360319704918;
  CHECK(energy_v2i_closed(p, kin.target, 0.0, direct_end) == near(4.375774610139095));

  // relay 1 pre-storing 27 Mbit starting at t = 0
  CHECK(energy_v2i_closed(p, kin.relays[0].state, 0.0, 5.278766149507484) ==
        near(1.2219557773053271));

  // relay 1 forwarding those bits behind the direct download
  CHECK(energy_v2v_closed(p, kin.relays[0], direct_end, 33.902915793214945) ==
        near(0.017418173047692012));

  // vehicle 15 passes its serving unit inside the window: folded profile
  CHECK(energy_v2i_closed(p, kin.relays[14].state, 0.0, 10.0) ==
        near(0.01559909013339662));
}

TEST_CASE("closed-form energies agree with adaptive quadrature") {
  ChannelParams p = testfix::reference_channel();
  Rng rng(987654);

  SUBCASE("v2i windows, ahead / behind / straddling the unit") {
    for (int trial = 0; trial < 150; ++trial) {
      VehicleState v;
      v.id = trial;
      v.offset_m = -500.0 + 1000.0 * rng.uniform();
      v.speed_mps = 5.0 + 25.0 * rng.uniform();
      const double dwell = (500.0 - v.offset_m) / v.speed_mps;
      double a = dwell * rng.uniform();
      double b = dwell * rng.uniform();
      if (a > b) std::swap(a, b);
      const double closed = energy_v2i_closed(p, v, a, b);
      const double numeric = energy_numeric(
          p, LinkClass::v2i,
          [&](double t) { return v2i_distance_at(v, t); }, a, b);
      CHECK(closed == doctest::Approx(numeric).epsilon(1e-9));
    }
  }

  SUBCASE("v2v windows, approaching / receding / through closest pass") {
    for (int trial = 0; trial < 150; ++trial) {
      RelayTiming r;
      r.closing_speed_mps = 10.0 + 30.0 * rng.uniform();
      r.encounter_s = 50.0 * rng.uniform();
      r.window_s = 600.0 / r.closing_speed_mps;
      double a = r.encounter_s + r.window_s * rng.uniform();
      double b = r.encounter_s + r.window_s * rng.uniform();
      if (a > b) std::swap(a, b);
      const double closed = energy_v2v_closed(p, r, a, b);
      const double numeric = energy_numeric(
          p, LinkClass::v2v,
          [&](double t) {
            return std::abs(300.0 - r.closing_speed_mps * (t - r.encounter_s));
          },
          a, b);
      CHECK(closed == doctest::Approx(numeric).epsilon(1e-9));
    }
  }

  SUBCASE("forced branch coverage") {
    VehicleState v{0, -100.0, 10.0};  // crosses the unit at t = 10
    auto dist = [&](double t) { return v2i_distance_at(v, t); };
    for (auto [a, b] : std::vector<std::pair<double, double>>{
             {0.0, 8.0}, {12.0, 30.0}, {2.0, 25.0}, {10.0, 10.0}, {0.0, 60.0}}) {
      CHECK(energy_v2i_closed(p, v, a, b) ==
            doctest::Approx(energy_numeric(p, LinkClass::v2i, dist, a, b))
                .epsilon(1e-9));
    }
    RelayTiming r;
    r.closing_speed_mps = 20.0;
    r.encounter_s = 5.0;
    r.window_s = 30.0;  // closest pass at t = 20
    auto vdist = [&](double t) { return std::abs(300.0 - 20.0 * (t - 5.0)); };
    for (auto [a, b] : std::vector<std::pair<double, double>>{
             {5.0, 18.0}, {22.0, 35.0}, {6.0, 34.0}, {20.0, 20.0}, {5.0, 35.0}}) {
      CHECK(energy_v2v_closed(p, r, a, b) ==
            doctest::Approx(energy_numeric(p, LinkClass::v2v, vdist, a, b))
                .epsilon(1e-9));
    }
  }
}

TEST_CASE("window domain checks") {
  ChannelParams p = testfix::reference_channel();
  VehicleState v{0, 200, 10.97};
  const double dwell = 300.0 / 10.97;
  CHECK_THROWS_AS(energy_v2i_closed(p, v, 0.0, dwell + 0.1), error);
  CHECK_THROWS_AS(energy_v2i_closed(p, v, -0.1, 1.0), error);
  CHECK_THROWS_AS(energy_v2i_closed(p, v, 2.0, 1.0), error);
  CHECK(energy_v2i_closed(p, v, 0.0, dwell) > 0.0);  // exactly the dwell is fine
  CHECK(energy_v2i_closed(p, v, 3.0, 3.0) == 0.0);

  RelayTiming r;
  r.closing_speed_mps = 26.41;
  r.encounter_s = 23.4;
  r.window_s = 22.7;
  CHECK_THROWS_AS(energy_v2v_closed(p, r, 23.0, 30.0), error);
  CHECK_THROWS_AS(energy_v2v_closed(p, r, 30.0, 46.2), error);
  CHECK(energy_v2v_closed(p, r, 23.4, 46.1) > 0.0);
}

TEST_CASE("quadrature handles profiles that leave and re-enter range") {
  ChannelParams p = testfix::reference_channel();
  // sawtooth distance that pops above v2v range in the middle third
  auto dist = [](double t) { return 250.0 + 100.0 * std::sin(t); };
  const double e = energy_numeric(p, LinkClass::v2v, dist, 0.0, 10.0, 1e-10);
  CHECK(e > 0.0);
  // windows fully out of range cost nothing
  CHECK(energy_numeric(p, LinkClass::v2v, [](double) { return 400.0; }, 0.0, 5.0) ==
        0.0);
  CHECK(energy_numeric(p, LinkClass::v2i, dist, 4.0, 4.0) == 0.0);
}
