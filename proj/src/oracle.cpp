#include "qwalk/oracle.hpp"

#include <cmath>
#include <set>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk::oracle {
namespace {

constexpr Complex kI{0.0, 1.0};

using Coin = std::array<Spinor, 2>;

Coin hadamard_coin() {
  const double s = 1.0 / std::sqrt(2.0);
  return {{{s, s}, {s, -s}}};
}

Coin beam_splitter_coin() {
  const double s = 1.0 / std::sqrt(2.0);
  return {{{s, kI * s}, {kI * s, s}}};
}

/// T = P2 B P1 = [[e^{i phi1}, i], [i e^{i(phi1+phi2)}, e^{i phi2}]] / sqrt(2).
Coin dashed_box_coin(double phi1, double phi2) {
  const double s = 1.0 / std::sqrt(2.0);
  return {{{s * std::polar(1.0, phi1), kI * s},
           {kI * s * std::polar(1.0, phi1 + phi2), s * std::polar(1.0, phi2)}}};
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

StateVector StateVector::basis(int site, Spin spin, Complex amplitude) {
  StateVector s;
  s.add(site, spin, amplitude);
  return s;
}

Complex StateVector::amplitude(int site, Spin spin) const {
  const auto it = amplitudes_.find(site);
  return it == amplitudes_.end() ? Complex{} : it->second[static_cast<std::size_t>(spin)];
}

double StateVector::norm_squared() const noexcept {
  double n = 0.0;
  for (const auto& [site, a] : amplitudes_) n += std::norm(a[0]) + std::norm(a[1]);
  return n;
}

ProbabilityMap StateVector::probabilities() const {
  ProbabilityMap p;
  for (const auto& [site, a] : amplitudes_) p[site] = std::norm(a[0]) + std::norm(a[1]);
  return p;
}

StateVector coin_and_shift(const StateVector& state, const std::array<Spinor, 2>& coin) {
  StateVector next;
  for (const auto& [x, a] : state.amplitudes()) {
    const Complex up = coin[0][0] * a[0] + coin[0][1] * a[1];
    const Complex down = coin[1][0] * a[0] + coin[1][1] * a[1];
    next.add(x - 1, Spin::up, up);
    next.add(x + 1, Spin::down, down);
  }
  return next;
}

ProbabilityMap srw_distribution(int steps) {
  if (steps < 1) throw ConfigError("random walk needs at least one step");
  ProbabilityMap p;
  const double scale = std::ldexp(1.0, -steps);
  for (int x = -steps; x <= steps; x += 2) p[x] = scale * binomial(steps, (x + steps) / 2);
  return p;
}

std::vector<ProbabilityMap> jeong_evolve(int levels, double phi1, double phi2) {
  if (levels < 1 || levels > 20) throw InvalidLevels("jeong_evolve supports 1..20 levels");
  std::vector<ProbabilityMap> out;
  out.reserve(static_cast<std::size_t>(levels));
  StateVector state = coin_and_shift(StateVector::basis(0, Spin::up), beam_splitter_coin());
  out.push_back(state.probabilities());
  const Coin box = dashed_box_coin(phi1, phi2);
  for (int l = 2; l <= levels; ++l) {
    state = coin_and_shift(state, box);
    out.push_back(state.probabilities());
  }
  return out;
}

ProbabilityMap closed_form(int step, double phi2) {
  const double c = std::cos(phi2);
  switch (step) {
    case 1: return {{-1, 1.0 / 2}, {1, 1.0 / 2}};
    case 2: return {{-2, 1.0 / 4}, {0, 2.0 / 4}, {2, 1.0 / 4}};
    case 3:
      return {{-3, 1.0 / 8}, {-1, 3.0 / 8 + 2 * c / 8}, {1, 3.0 / 8 - 2 * c / 8}, {3, 1.0 / 8}};
    case 4:
      return {{-4, 1.0 / 16},
              {-2, 4.0 / 16 + (2 + 4 * c) / 16},
              {0, 6.0 / 16 - 4.0 / 16},
              {2, 4.0 / 16 + (2 - 4 * c) / 16},
              {4, 1.0 / 16}};
    case 5:
      return {{-5, 1.0 / 32},
              {-3, 5.0 / 32 + (6 + 6 * c) / 32},
              {-1, 10.0 / 32 - 6.0 / 32},
              {1, 10.0 / 32 - 6.0 / 32},
              {3, 5.0 / 32 + (6 - 6 * c) / 32},
              {5, 1.0 / 32}};
    default:
      throw UnsupportedStep("closed-form probabilities exist for steps 1..5, got " + std::to_string(step));
  }
}

WalkResult hadamard_walk(int steps, const StateVector& initial) {
  if (steps < 0) throw ConfigError("walk steps must be non-negative");
  StateVector state = initial;
  const Coin h = hadamard_coin();
  for (int i = 0; i < steps; ++i) state = coin_and_shift(state, h);
  return {state, state.probabilities()};
}

RobensPanels robens_panels() {
  const double s = 1.0 / std::sqrt(2.0);
  RobensPanels p;
  p.unfiltered = hadamard_walk(4, StateVector::basis(0, Spin::up)).probabilities;
  p.kept_minus = hadamard_walk(3, StateVector::basis(-1, Spin::up, s)).probabilities;
  p.kept_plus = hadamard_walk(3, StateVector::basis(1, Spin::down, s)).probabilities;
  p.filtered_sum = p.kept_minus;
  for (const auto& [x, v] : p.kept_plus) p.filtered_sum[x] += v;
  return p;
}

double total_variation(const ProbabilityMap& a, const ProbabilityMap& b) {
  std::set<int> sites;
  for (const auto& [x, v] : a) sites.insert(x);
  for (const auto& [x, v] : b) sites.insert(x);
  double sum = 0.0;
  for (const int x : sites) {
    const auto ia = a.find(x);
    const auto ib = b.find(x);
    sum += std::abs((ia == a.end() ? 0.0 : ia->second) - (ib == b.end() ? 0.0 : ib->second));
  }
  return 0.5 * sum;
}

double max_abs_difference(const ProbabilityMap& a, const ProbabilityMap& b) {
  std::set<int> sites;
  for (const auto& [x, v] : a) sites.insert(x);
  for (const auto& [x, v] : b) sites.insert(x);
  double worst = 0.0;
  for (const int x : sites) {
    const auto ia = a.find(x);
    const auto ib = b.find(x);
    worst = std::max(worst, std::abs((ia == a.end() ? 0.0 : ia->second) -
                                     (ib == b.end() ? 0.0 : ib->second)));
  }
  return worst;
}

}  // namespace qwalk::oracle
