#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "qwalk/errors.hpp"
#include "qwalk/oracle.hpp"

using namespace qwalk;
using namespace qwalk::oracle;
using std::numbers::pi;
using std::numbers::sqrt2;

namespace {

constexpr Complex I{0.0, 1.0};

// Dense brute-force walk on sites -R..R: state index 2*(x+R) + spin,
// full (coin then shift) matrix built explicitly and applied by matmul.
class DenseWalk {
 public:
  explicit DenseWalk(int radius) : r_(radius), dim_(2 * (2 * radius + 1)) {}

  [[nodiscard]] std::size_t index(int x, int spin) const { return static_cast<std::size_t>(2 * (x + r_) + spin); }

  [[nodiscard]] std::vector<std::vector<Complex>> step_matrix(const std::array<std::array<Complex, 2>, 2>& c) const {
    std::vector<std::vector<Complex>> coin(dim_, std::vector<Complex>(dim_));
    std::vector<std::vector<Complex>> shift(dim_, std::vector<Complex>(dim_));
    for (int x = -r_; x <= r_; ++x) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) coin[index(x, a)][index(x, b)] = c[a][b];
      }
      if (x - 1 >= -r_) shift[index(x - 1, 0)][index(x, 0)] = 1.0;
      if (x + 1 <= r_) shift[index(x + 1, 1)][index(x, 1)] = 1.0;
    }
    return multiply(shift, coin);
  }

  [[nodiscard]] static std::vector<std::vector<Complex>> multiply(const std::vector<std::vector<Complex>>& a,
                                                                  const std::vector<std::vector<Complex>>& b) {
    const std::size_t n = a.size();
    std::vector<std::vector<Complex>> out(n, std::vector<Complex>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
      }
    }
    return out;
  }

  [[nodiscard]] static std::vector<Complex> apply(const std::vector<std::vector<Complex>>& m,
                                                  const std::vector<Complex>& v) {
    std::vector<Complex> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
    }
    return out;
  }

  [[nodiscard]] ProbabilityMap probabilities(const std::vector<Complex>& v) const {
    ProbabilityMap p;
    for (int x = -r_; x <= r_; ++x) {
      const double q = std::norm(v[index(x, 0)]) + std::norm(v[index(x, 1)]);
      if (q > 1e-15) p[x] = q;
    }
    return p;
  }

  [[nodiscard]] std::vector<Complex> zero() const { return std::vector<Complex>(dim_); }

 private:
  int r_;
  std::size_t dim_;
};

const std::array<std::array<Complex, 2>, 2> kHadamard{{{1.0 / sqrt2, 1.0 / sqrt2}, {1.0 / sqrt2, -1.0 / sqrt2}}};

std::vector<ProbabilityMap> dense_jeong(int levels, double phi1, double phi2) {
  const DenseWalk walk(levels + 1);
  const std::array<std::array<Complex, 2>, 2> b{{{1.0 / sqrt2, I / sqrt2}, {I / sqrt2, 1.0 / sqrt2}}};
  // T = P2 B P1 with P1 = diag(e^{i phi1}, 1), P2 = diag(1, e^{i phi2}).
  const Complex e1 = std::exp(I * phi1);
  const Complex e2 = std::exp(I * phi2);
  const std::array<std::array<Complex, 2>, 2> t{{{b[0][0] * e1, b[0][1]}, {e2 * b[1][0] * e1, e2 * b[1][1]}}};
  std::vector<Complex> v = walk.zero();
  v[walk.index(0, 0)] = 1.0;
  std::vector<ProbabilityMap> out;
  const auto first = walk.step_matrix(b);
  const auto rest = walk.step_matrix(t);
  for (int l = 1; l <= levels; ++l) {
    v = DenseWalk::apply(l == 1 ? first : rest, v);
    out.push_back(walk.probabilities(v));
  }
  return out;
}

double sum(const ProbabilityMap& p) {
  double s = 0.0;
  for (const auto& [x, q] : p) s += q;
  return s;
}

void check_map(const ProbabilityMap& actual, const ProbabilityMap& expected, double tol = 1e-12) {
  CHECK(max_abs_difference(actual, expected) <= tol);
}

const std::array<double, 5> kPhi2Values{0.0, pi / 2, -pi / 2, pi, 0.3};

}  // namespace

TEST_CASE("simple random walk rows") {
  check_map(srw_distribution(1), {{-1, 0.5}, {1, 0.5}});
  check_map(srw_distribution(2), {{-2, 0.25}, {0, 0.5}, {2, 0.25}});
  check_map(srw_distribution(4), {{-4, 1.0 / 16}, {-2, 4.0 / 16}, {0, 6.0 / 16}, {2, 4.0 / 16}, {4, 1.0 / 16}});
}

TEST_CASE("path-encoded walk rows") {
  check_map(jeong_evolve(3, 0.0, 0.0)[2], {{-3, 1.0 / 8}, {-1, 5.0 / 8}, {1, 1.0 / 8}, {3, 1.0 / 8}});
  check_map(jeong_evolve(4, 0.0, 0.0)[3],
            {{-4, 1.0 / 16}, {-2, 10.0 / 16}, {0, 2.0 / 16}, {2, 2.0 / 16}, {4, 1.0 / 16}});
  check_map(jeong_evolve(5, pi / 2, -pi / 2)[4], {{-5, 1.0 / 32},
                                                  {-3, 11.0 / 32},
                                                  {-1, 4.0 / 32},
                                                  {1, 4.0 / 32},
                                                  {3, 11.0 / 32},
                                                  {5, 1.0 / 32}});
}

TEST_CASE("closed-form rows") {
  const auto r3 = closed_form(3, pi);
  CHECK(r3.at(-1) == doctest::Approx(1.0 / 8));
  CHECK(r3.at(1) == doctest::Approx(5.0 / 8));
  const auto r4 = closed_form(4, pi / 2);
  CHECK(r4.at(-2) == doctest::Approx(6.0 / 16));
  CHECK(r4.at(2) == doctest::Approx(6.0 / 16));
  CHECK(r4.at(0) == doctest::Approx(2.0 / 16));
  CHECK_THROWS_AS((void)closed_form(0, 0.0), UnsupportedStep);
  CHECK_THROWS_AS((void)closed_form(6, 0.0), UnsupportedStep);
}

TEST_CASE("closed form agrees with the state evolution") {
  for (const double phi2 : kPhi2Values) {
    CAPTURE(phi2);
    const auto evolved = jeong_evolve(5, 0.7, phi2);
    for (int l = 1; l <= 5; ++l) {
      CAPTURE(l);
      check_map(evolved[static_cast<std::size_t>(l - 1)], closed_form(l, phi2));
    }
  }
}

TEST_CASE("state evolution agrees with a dense matrix computation") {
  for (const double phi2 : kPhi2Values) {
    const auto sparse = jeong_evolve(7, 0.9, phi2);
    const auto dense = dense_jeong(7, 0.9, phi2);
    for (std::size_t l = 0; l < 7; ++l) check_map(sparse[l], dense[l]);
  }
}

TEST_CASE("distributions do not depend on phi1") {
  for (const double phi2 : kPhi2Values) {
    const auto a = jeong_evolve(10, 0.0, phi2);
    const auto b = jeong_evolve(10, 2.1, phi2);
    for (std::size_t l = 0; l < a.size(); ++l) check_map(a[l], b[l]);
  }
}

TEST_CASE("shifting phi2 by pi mirrors the distribution") {
  for (const double phi2 : kPhi2Values) {
    const auto a = jeong_evolve(9, 0.4, phi2);
    const auto b = jeong_evolve(9, 0.4, phi2 + pi);
    for (std::size_t l = 2; l < a.size(); ++l) {
      ProbabilityMap mirrored;
      for (const auto& [x, p] : b[l]) mirrored[-x] = p;
      check_map(a[l], mirrored);
    }
  }
}

TEST_CASE("first two levels coincide with the simple random walk") {
  for (const double phi2 : kPhi2Values) {
    const auto a = jeong_evolve(2, 1.3, phi2);
    check_map(a[0], srw_distribution(1));
    check_map(a[1], srw_distribution(2));
  }
}

TEST_CASE("evolution conserves the norm") {
  for (const double phi2 : kPhi2Values) {
    for (const auto& p : jeong_evolve(20, 0.2, phi2)) CHECK(std::abs(sum(p) - 1.0) <= 1e-12);
  }
  StateVector s = StateVector::basis(0, Spin::up);
  s.add(3, Spin::down, Complex{0.3, -0.4});
  const double n0 = s.norm_squared();
  for (int steps = 0; steps <= 12; ++steps) {
    CHECK(std::abs(hadamard_walk(steps, s).state.norm_squared() - n0) <= 1e-12);
  }
  CHECK_THROWS_AS((void)jeong_evolve(0, 0.0, 0.0), InvalidLevels);
  CHECK_THROWS_AS((void)jeong_evolve(21, 0.0, 0.0), InvalidLevels);
}

TEST_CASE("Hadamard walk small cases") {
  check_map(hadamard_walk(1, StateVector::basis(0, Spin::up)).probabilities, {{-1, 0.5}, {1, 0.5}});

  StateVector s = StateVector::basis(2, Spin::down, Complex{0.6, 0.0});
  s.add(-1, Spin::up, Complex{0.0, 0.8});
  const WalkResult unchanged = hadamard_walk(0, s);
  CHECK(unchanged.state.amplitude(2, Spin::down) == s.amplitude(2, Spin::down));
  CHECK(unchanged.state.amplitude(-1, Spin::up) == s.amplitude(-1, Spin::up));
}

TEST_CASE("Hadamard walk from a filtered state against the dense oracle") {
  const WalkResult r = hadamard_walk(3, StateVector::basis(-1, Spin::up, 1.0 / sqrt2));
  CHECK(sum(r.probabilities) == doctest::Approx(0.5).epsilon(1e-12));

  const DenseWalk walk(5);
  const auto step = walk.step_matrix(kHadamard);
  std::vector<Complex> v = walk.zero();
  v[walk.index(-1, 0)] = 1.0 / sqrt2;
  for (int i = 0; i < 3; ++i) v = DenseWalk::apply(step, v);
  check_map(r.probabilities, walk.probabilities(v));
}

TEST_CASE("polarization walk reference panels") {
  const RobensPanels p = robens_panels();
  check_map(p.unfiltered, {{-4, 1.0 / 16}, {-2, 10.0 / 16}, {0, 2.0 / 16}, {2, 2.0 / 16}, {4, 1.0 / 16}});
  check_map(p.kept_minus, {{-4, 1.0 / 16}, {-2, 5.0 / 16}, {0, 1.0 / 16}, {2, 1.0 / 16}});
  check_map(p.kept_plus, {{-2, 1.0 / 16}, {0, 1.0 / 16}, {2, 5.0 / 16}, {4, 1.0 / 16}});
  // The two filtered halves add up to the symmetric path-encoded row.
  check_map(p.filtered_sum, jeong_evolve(4, pi / 2, -pi / 2)[3]);
  CHECK(sum(p.kept_minus) == doctest::Approx(0.5));
  CHECK(sum(p.kept_plus) == doctest::Approx(0.5));
}

TEST_CASE("distance helpers") {
  const ProbabilityMap a{{-1, 0.5}, {1, 0.5}};
  const ProbabilityMap b{{1, 0.75}, {3, 0.25}};
  CHECK(total_variation(a, b) == doctest::Approx(0.5));
  CHECK(max_abs_difference(a, b) == doctest::Approx(0.5));
  CHECK(total_variation(a, a) == 0.0);
}

TEST_CASE("coin_and_shift moves up left and down right") {
  const std::array<Spinor, 2> identity{{{1.0, 0.0}, {0.0, 1.0}}};
  StateVector s = StateVector::basis(0, Spin::up);
  s.add(0, Spin::down, 1.0);
  const StateVector t = coin_and_shift(s, identity);
  CHECK(t.amplitude(-1, Spin::up) == Complex{1.0});
  CHECK(t.amplitude(1, Spin::down) == Complex{1.0});
  CHECK(t.amplitude(0, Spin::up) == Complex{0.0});
}
