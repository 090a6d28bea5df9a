#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "generators.hpp"
#include "qwalk/adaptive.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/message.hpp"
#include "qwalk/rng.hpp"
#include "qwalk/units.hpp"

using namespace qwalk;
using std::numbers::pi;
using std::numbers::sqrt2;

namespace {

constexpr Complex I{0.0, 1.0};

AdaptiveState state_with(std::array<double, 2> w, Message y0, Message y1, double gamma = 0.9) {
  AdaptiveState s;
  s.gamma = gamma;
  s.w = w;
  s.y = {y0.h, y0.v, y1.h, y1.v};
  return s;
}

bool close(Complex a, Complex b, double tol = 1e-12) { return std::abs(a - b) < tol; }

}  // namespace

TEST_CASE("adaptive_update with zero memory copies the last arrival") {
  RngStream rng(3);
  AdaptiveState s = initial_state(0.0, rng);
  const Complex y1h = s.y[2];
  const Complex y1v = s.y[3];
  s = adaptive_update(s, Port::zero, Message{1.0, 0.0});
  CHECK(s.w[0] == doctest::Approx(1.0));
  CHECK(s.w[1] == doctest::Approx(0.0));
  CHECK(close(s.yh(Port::zero), 1.0));
  CHECK(close(s.yv(Port::zero), 0.0));
  CHECK(s.y[2] == y1h);
  CHECK(s.y[3] == y1v);
}

TEST_CASE("adaptive_update arithmetic on the weights") {
  AdaptiveState s = state_with({0.5, 0.5}, {1.0, 0.0}, {1.0, 0.0}, 0.5);
  s = adaptive_update(s, Port::one, Message{0.0, 1.0});
  CHECK(s.w[0] == doctest::Approx(0.25));
  CHECK(s.w[1] == doctest::Approx(0.75));
  CHECK(close(s.yh(Port::one), 0.5));
  CHECK(close(s.yv(Port::one), 0.5));
}

TEST_CASE("repeated arrivals converge geometrically to the fixed point") {
  for (const double gamma : {0.5, 0.9, 0.98}) {
    CAPTURE(gamma);
    AdaptiveState s = state_with({0.5, 0.5}, {0.0, 0.0}, {0.0, 1.0}, gamma);
    for (int i = 0; i < 1000; ++i) s = adaptive_update(s, Port::zero, Message{1.0, 0.0});
    const double bound = std::pow(gamma, 1000) + 1e-12;
    CHECK(std::abs(s.yh(Port::zero) - 1.0) < bound);
    CHECK(std::abs(s.w[0] - 1.0) < bound);

    // From a random start the distance shrinks by the same factor.
    RngStream rng(11);
    AdaptiveState r = initial_state(gamma, rng);
    const double start = std::abs(r.yh(Port::zero) - 1.0);
    for (int i = 0; i < 1000; ++i) r = adaptive_update(r, Port::zero, Message{1.0, 0.0});
    CHECK(std::abs(r.yh(Port::zero) - 1.0) < std::pow(gamma, 1000) * start + 1e-12);
  }
}

TEST_CASE("bs_route splits a single adapted feed evenly") {
  const AdaptiveState s = state_with({1.0, 0.0}, {1.0, 0.0}, {0.0, 0.0});
  const Routing r0 = bs_route(s, 0.25);
  const Routing r1 = bs_route(s, 0.75);
  CHECK(r0.p_port0 == doctest::Approx(0.5));
  CHECK(r0.port == Port::zero);
  CHECK(r1.port == Port::one);
  CHECK(close(r0.message.h, 1.0));
  CHECK(close(r1.message.h, I));
  CHECK(std::abs(std::arg(r1.message.h) - std::arg(r0.message.h)) == doctest::Approx(pi / 2));
}

TEST_CASE("bs_route interference of a balanced coherent feed") {
  for (const double delta : {0.0, pi}) {
    CAPTURE(delta);
    const Complex a0 = 1.0;
    const Complex a1 = I * std::exp(I * delta);
    const AdaptiveState s = state_with({0.5, 0.5}, {a0, 0.0}, {a1, 0.0});
    // Direct 2x2 arithmetic: [[1, i], [i, 1]] / sqrt2 applied to (a0, a1) / sqrt2.
    const Complex z0 = (a0 + I * a1) / 2.0;
    const Complex z1 = (I * a0 + a1) / 2.0;
    const double expected_p0 = std::norm(z0) / (std::norm(z0) + std::norm(z1));
    const Routing r = bs_route(s, 0.5);
    CHECK(r.p_port0 == doctest::Approx(expected_p0).epsilon(1e-12));
    if (delta == 0.0) {
      CHECK(r.p_port0 < 1e-12);
      CHECK(r.port == Port::one);
    } else {
      CHECK(r.p_port0 > 1.0 - 1e-12);
      CHECK(r.port == Port::zero);
    }
  }
}

TEST_CASE("pbs_route transmits h and reflects v") {
  const Routing h = pbs_route(state_with({1.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}), 0.999);
  CHECK(h.port == Port::zero);
  CHECK(h.p_port0 == doctest::Approx(1.0));
  CHECK(close(h.message.h, 1.0));
  CHECK(close(h.message.v, 0.0));

  const Routing v = pbs_route(state_with({1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}), 0.0);
  CHECK(v.port == Port::one);
  CHECK(v.p_port0 == doctest::Approx(0.0));
  CHECK(close(v.message.h, 0.0));
  CHECK(close(v.message.v, I));

  const AdaptiveState both = state_with({0.5, 0.5}, {1.0, 0.0}, {0.0, 1.0});
  const Routing r = pbs_route(both, 0.999);
  CHECK(r.p_port0 == doctest::Approx(1.0));
  CHECK(r.port == Port::zero);
  CHECK(close(r.message.h, 1.0 / sqrt2));
  CHECK(close(r.message.v, I / sqrt2));
}

TEST_CASE("routing without amplitude is a degenerate state") {
  const AdaptiveState s = state_with({0.5, 0.5}, {0.0, 0.0}, {0.0, 0.0});
  CHECK_THROWS_AS((void)bs_route(s, 0.5), DegenerateAmplitude);
  CHECK_THROWS_AS((void)pbs_route(s, 0.5), DegenerateAmplitude);
}

TEST_CASE("phase_shift examples") {
  const Message a = phase_shift(0.0, {1.0, 0.0});
  CHECK(close(a.h, 1.0));
  CHECK(close(a.v, 0.0));
  const Message b = phase_shift(pi, {1.0 / sqrt2, 1.0 / sqrt2});
  CHECK(close(b.h, -1.0 / sqrt2));
  CHECK(close(b.v, -1.0 / sqrt2));
  const Message c = phase_shift(pi / 2, {1.0, 0.0});
  CHECK(close(c.h, I));
}

TEST_CASE("hadamard_apply examples") {
  const Message a = hadamard_apply({1.0, 0.0});
  CHECK(close(a.h, 1.0 / sqrt2));
  CHECK(close(a.v, 1.0 / sqrt2));
  const Message b = hadamard_apply({0.0, 1.0});
  CHECK(close(b.h, 1.0 / sqrt2));
  CHECK(close(b.v, -1.0 / sqrt2));

  RngStream rng(5);
  for (int i = 0; i < 100; ++i) {
    const Message m = testing::random_message(rng);
    const Message back = hadamard_apply(hadamard_apply(m));
    CHECK(close(back.h, m.h));
    CHECK(close(back.v, m.v));
  }
}

TEST_CASE("detect increments one site") {
  Distribution d;
  detect(-2, d);
  CHECK(d.counts() == std::map<int, std::uint64_t>{{-2, 1}});

  Distribution e;
  e.add(0, 5);
  detect(0, e);
  CHECK(e.count(0) == 6);

  Distribution f;
  RngStream rng(1);
  const std::uint64_t n = 1000;
  for (std::uint64_t i = 0; i < n; ++i) detect(2 * static_cast<int>(rng.uniform() * 5) - 4, f);
  CHECK(f.total() == n);
}

TEST_CASE("Distribution frequencies and merging") {
  Distribution d;
  d.add(-1, 3);
  d.add(1, 1);
  const auto f = d.frequencies();
  CHECK(f.at(-1) == doctest::Approx(0.75));
  CHECK(f.at(1) == doctest::Approx(0.25));
  CHECK(d.frequencies(8).at(-1) == doctest::Approx(0.375));
  Distribution e;
  e.add(1, 2);
  d += e;
  CHECK(d.count(1) == 3);
  CHECK(d.total() == 6);
}

TEST_CASE("splitter unitaries are unitary") {
  CHECK(is_unitary(beam_splitter_unitary(), 1e-12));
  CHECK(is_unitary(polarizing_beam_splitter_unitary(), 1e-12));
  PortUnitary bad = beam_splitter_unitary();
  bad[0][0] *= 1.01;
  CHECK_FALSE(is_unitary(bad, 1e-12));
}

TEST_CASE("unit port counts") {
  RngStream rng(0);
  CHECK(input_port_count(Source{}) == 0);
  CHECK(output_port_count(Source{}) == 1);
  CHECK(input_port_count(BeamSplitter{initial_state(0.9, rng), RngStream{}}) == 2);
  CHECK(output_port_count(PolarizingBeamSplitter{initial_state(0.9, rng), RngStream{}}) == 2);
  CHECK(input_port_count(PhaseShifter{}) == 1);
  CHECK(output_port_count(HadamardUnit{}) == 1);
  CHECK(input_port_count(Detector{}) == 1);
  CHECK(output_port_count(Detector{}) == 0);
  CHECK(is_adaptive(BeamSplitter{AdaptiveState{}, RngStream{}}));
  CHECK_FALSE(is_adaptive(PhaseShifter{}));
}

TEST_CASE("rng streams are reproducible and distinct") {
  RngStream a(42);
  RngStream b(42);
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  const RngStream master(7);
  CHECK(master.substream(0).seed() != master.substream(1).seed());
  CHECK(master.substream(3).seed() == RngStream(7).substream(3).seed());
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("initial registers are balanced with unit messages") {
  RngStream rng(9);
  for (int i = 0; i < 50; ++i) {
    const AdaptiveState s = initial_state(0.95, rng);
    CHECK(s.w[0] == 0.5);
    CHECK(s.w[1] == 0.5);
    CHECK(std::norm(s.y[0]) + std::norm(s.y[1]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::norm(s.y[2]) + std::norm(s.y[3]) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("property: update keeps weights normalized and untouched port fixed") {
  RngStream rng(2024);
  for (int trial = 0; trial < 2000; ++trial) {
    const AdaptiveState s = testing::random_state(rng);
    const Port port = testing::random_port(rng);
    const Message m = testing::random_message(rng);
    const AdaptiveState t = adaptive_update(s, port, m);
    CHECK(std::abs(t.w[0] + t.w[1] - 1.0) <= 1e-12);
    CHECK(t.yh(other(port)) == s.yh(other(port)));
    CHECK(t.yv(other(port)) == s.yv(other(port)));
    // Registers stay inside the unit ball: a convex mix of y and m.
    CHECK(std::norm(t.yh(port)) + std::norm(t.yv(port)) <= 1.0 + 1e-12);
  }
}

TEST_CASE("property: routed messages are unit norm and probabilities valid") {
  RngStream rng(77);
  for (int trial = 0; trial < 2000; ++trial) {
    AdaptiveState s = testing::random_state(rng);
    s = adaptive_update(s, testing::random_port(rng), testing::random_message(rng));
    const double u = rng.uniform();
    for (const Routing& r : {bs_route(s, u), pbs_route(s, u)}) {
      CHECK(std::abs(r.message.norm_squared() - 1.0) <= 1e-9);
      CHECK(r.p_port0 >= 0.0);
      CHECK(r.p_port0 <= 1.0);
      CHECK((r.port == Port::zero) == (u < r.p_port0));
    }
  }
}

TEST_CASE("property: stateless transforms preserve the norm") {
  RngStream rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    const Message m = testing::random_message(rng);
    CHECK(std::abs(phase_shift(testing::random_phase(rng), m).norm_squared() - 1.0) <= 1e-12);
    CHECK(std::abs(hadamard_apply(m).norm_squared() - 1.0) <= 1e-12);
  }
}

TEST_CASE("property: port frequencies follow the routing probability") {
  // Fixed registers, many deviates: the fraction sent to port 0 approaches p0.
  RngStream rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const AdaptiveState s = testing::random_state(rng);
    const double p0 = bs_route(s, 0.0).p_port0;
    const int n = 20000;
    int zeros = 0;
    for (int i = 0; i < n; ++i) zeros += bs_route(s, rng.uniform()).port == Port::zero ? 1 : 0;
    CHECK(std::abs(zeros / static_cast<double>(n) - p0) < 5.0 * std::sqrt(0.25 / n));
  }
}
