#include "qwalk/network.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "qwalk/detail/overloaded.hpp"
#include "qwalk/errors.hpp"

namespace qwalk {

using detail::overloaded;

std::string_view to_string(CutLabel label) noexcept {
  switch (label) {
    case CutLabel::t1: return "t1";
    case CutLabel::t2: return "t2";
    case CutLabel::t3: return "t3";
  }
  return "?";
}

const TapObservation* RunRecord::tap(CutLabel label) const noexcept {
  for (const auto& t : taps) {
    if (t.label == label) return &t;
  }
  return nullptr;
}

UnitId Network::add(UnitKind kind) {
  units_.push_back(std::move(kind));
  outputs_.push_back({});
  inputs_used_.push_back({false, false});
  return units_.size() - 1;
}

WireId Network::connect(Endpoint from, Endpoint to) {
  if (from.unit >= units_.size() || to.unit >= units_.size()) {
    throw InvariantBreach("wire endpoint refers to an unknown unit");
  }
  if (static_cast<int>(index(from.port)) >= output_port_count(units_[from.unit])) {
    throw InvariantBreach("wire starts at a nonexistent output port");
  }
  if (static_cast<int>(index(to.port)) >= input_port_count(units_[to.unit])) {
    throw InvariantBreach("wire ends at a nonexistent input port");
  }
  auto& out = outputs_[from.unit][index(from.port)];
  if (out) throw InvariantBreach("output port wired twice");
  auto& in = inputs_used_[to.unit][index(to.port)];
  if (in) throw InvariantBreach("input port wired twice");

  wires_.push_back({from, to});
  cuts_by_wire_.emplace_back();
  out = wires_.size() - 1;
  in = true;
  return *out;
}

void Network::annotate(CutLabel label, WireId wire, int site, Rail rail) {
  if (wire >= wires_.size()) throw InvariantBreach("annotation on unknown wire");
  cuts_.push_back({label, wire, site, rail});
  cuts_by_wire_[wire].push_back(cuts_.size() - 1);
}

void Network::set_source(UnitId id) {
  if (id >= units_.size() || !std::holds_alternative<Source>(units_[id])) {
    throw InvariantBreach("source id does not name a Source unit");
  }
  source_ = id;
}

UnitId Network::source() const {
  if (!source_) throw InvariantBreach("network has no source");
  return *source_;
}

std::vector<int> Network::detector_sites() const {
  std::vector<int> sites;
  for (const auto& u : units_) {
    if (const auto* d = std::get_if<Detector>(&u)) sites.push_back(d->site);
  }
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  return sites;
}

void Network::validate() const {
  (void)source();
  for (UnitId id = 0; id < units_.size(); ++id) {
    const int outs = output_port_count(units_[id]);
    for (int p = 0; p < outs; ++p) {
      if (!outputs_[id][static_cast<std::size_t>(p)]) {
        throw UnwiredPort("unit " + std::to_string(id) + " has an unwired output port " +
                          std::to_string(p));
      }
    }
  }

  // Kahn's algorithm: every unit must be removable for the graph to be acyclic.
  std::vector<int> indegree(units_.size(), 0);
  for (const auto& w : wires_) ++indegree[w.to.unit];
  std::vector<UnitId> ready;
  for (UnitId id = 0; id < units_.size(); ++id) {
    if (indegree[id] == 0) ready.push_back(id);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    const UnitId id = ready.back();
    ready.pop_back();
    ++visited;
    for (const auto& out : outputs_[id]) {
      if (out && --indegree[wires_[*out].to.unit] == 0) ready.push_back(wires_[*out].to.unit);
    }
  }
  if (visited != units_.size()) throw InvariantBreach("network wiring contains a cycle");
}

void Network::reset_registers(const RngStream& master) {
  for (UnitId id = 0; id < units_.size(); ++id) {
    std::visit(overloaded{
                   [&](BeamSplitter& b) {
                     b.rng = master.substream(id);
                     b.state = initial_state(b.state.gamma, b.rng);
                   },
                   [&](PolarizingBeamSplitter& b) {
                     b.rng = master.substream(id);
                     b.state = initial_state(b.state.gamma, b.rng);
                   },
                   [](auto&) {},
               },
               units_[id]);
  }
}

namespace {

void check_gamma(double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("learning rate must lie in [0, 1)");
}

AdaptiveState registers(double gamma) {
  AdaptiveState s;
  s.gamma = gamma;
  return s;
}

}  // namespace

Network build_jeong(int levels, double phi1, double phi2, double gamma) {
  if (levels < 1 || levels > kMaxJeongLevels) {
    throw InvalidLevels("levels must lie in [1, " + std::to_string(kMaxJeongLevels) + "], got " +
                        std::to_string(levels));
  }
  check_gamma(gamma);

  Network net;
  const UnitId src = net.add(Source{});
  net.set_source(src);

  // Outputs waiting to be attached at the next level, keyed by target site.
  std::map<int, Endpoint> up_feed;
  std::map<int, Endpoint> down_feed;

  const UnitId first = net.add(BeamSplitter{registers(gamma), RngStream{}});
  net.connect({src, Port::zero}, {first, Port::zero});
  up_feed[-1] = {first, Port::zero};
  down_feed[1] = {first, Port::one};

  for (int level = 2; level <= levels; ++level) {
    std::map<int, Endpoint> next_up;
    std::map<int, Endpoint> next_down;
    for (int x = -level + 1; x <= level - 1; x += 2) {
      const UnitId p1 = net.add(PhaseShifter{phi1});
      const UnitId bs = net.add(BeamSplitter{registers(gamma), RngStream{}});
      const UnitId p2 = net.add(PhaseShifter{phi2});
      net.connect({p1, Port::zero}, {bs, Port::zero});
      net.connect({bs, Port::one}, {p2, Port::zero});
      if (const auto it = up_feed.find(x); it != up_feed.end()) {
        net.connect(it->second, {p1, Port::zero});
      }
      if (const auto it = down_feed.find(x); it != down_feed.end()) {
        net.connect(it->second, {bs, Port::one});
      }
      next_up[x - 1] = {bs, Port::zero};
      next_down[x + 1] = {p2, Port::zero};
    }
    up_feed = std::move(next_up);
    down_feed = std::move(next_down);
  }

  for (const auto* feed : {&up_feed, &down_feed}) {
    for (const auto& [site, from] : *feed) {
      const UnitId det = net.add(Detector{site});
      net.connect(from, {det, Port::zero});
    }
  }
  net.validate();
  return net;
}

Network build_robens(double gamma) {
  check_gamma(gamma);

  Network net;
  const UnitId src = net.add(Source{});
  net.set_source(src);

  // Combined beam per occupied site, and the combiner's second output that
  // only carries particles while registers are still adapting.
  std::map<int, Endpoint> beam{{0, {src, Port::zero}}};
  std::map<int, Endpoint> stray;

  for (int step = 1; step <= kRobensSteps; ++step) {
    std::map<int, Endpoint> h_arm;  // keyed by target site x-1
    std::map<int, Endpoint> v_arm;  // keyed by target site x+1
    for (const auto& [x, from] : beam) {
      const UnitId had = net.add(HadamardUnit{});
      const WireId in = net.connect(from, {had, Port::zero});
      if (step == 1) net.annotate(CutLabel::t1, in, x, Rail::h);

      const UnitId split = net.add(PolarizingBeamSplitter{registers(gamma), RngStream{}});
      net.connect({had, Port::zero}, {split, Port::zero});
      if (const auto it = stray.find(x); it != stray.end()) {
        net.connect(it->second, {split, Port::one});
      }
      h_arm[x - 1] = {split, Port::zero};
      v_arm[x + 1] = {split, Port::one};
    }

    std::map<int, Endpoint> next_beam;
    std::map<int, Endpoint> next_stray;
    for (int x = -step; x <= step; x += 2) {
      const UnitId comb = net.add(PolarizingBeamSplitter{registers(gamma), RngStream{}});
      if (const auto it = h_arm.find(x); it != h_arm.end()) {
        const WireId w = net.connect(it->second, {comb, Port::zero});
        if (step == 1) net.annotate(CutLabel::t2, w, x, Rail::h);
      }
      if (const auto it = v_arm.find(x); it != v_arm.end()) {
        const WireId w = net.connect(it->second, {comb, Port::one});
        if (step == 1) net.annotate(CutLabel::t2, w, x, Rail::v);
      }
      next_beam[x] = {comb, Port::zero};
      next_stray[x] = {comb, Port::one};
    }
    beam = std::move(next_beam);
    stray = std::move(next_stray);
  }

  for (const auto* feed : {&beam, &stray}) {
    for (const auto& [site, from] : *feed) {
      const UnitId det = net.add(Detector{site});
      const WireId w = net.connect(from, {det, Port::zero});
      net.annotate(CutLabel::t3, w, site, Rail::mixed);
    }
  }
  net.validate();
  return net;
}

RunResult run(Network& net, std::uint64_t n_particles, const RngStream& rng, const RunOptions& options) {
  if (n_particles < 1) throw ConfigError("at least one particle must be emitted");
  net.validate();
  net.reset_registers(rng);

  std::vector<std::optional<CutLabel>> absorbs(net.wires().size());
  for (const auto& f : options.filters) {
    bool matched = false;
    for (const auto& cut : net.annotations()) {
      if (cut.label == f.label && cut.site == f.site) {
        absorbs[cut.wire] = f.label;
        matched = true;
      }
    }
    if (!matched) {
      throw ConfigError("removal filter " + std::string(to_string(f.label)) + "@" +
                        std::to_string(f.site) + " matches no cut point");
    }
  }

  RunResult result;
  result.emitted = n_particles;
  if (options.taps_enabled) result.records.reserve(n_particles);

  auto& units = net.units();
  const UnitId src = net.source();

  for (std::uint64_t i = 0; i < n_particles; ++i) {
    RunRecord record;
    record.particle_index = i;
    Message m{};
    std::optional<WireId> wire = net.output_wire(src, Port::zero);

    for (;;) {
      if (!wire) throw UnwiredPort("particle reached an unwired output port");
      if (options.taps_enabled) {
        for (const std::size_t c : net.annotations_on(*wire)) {
          const CutAnnotation& cut = net.annotations()[c];
          record.taps.push_back({cut.label, cut.site, m});
        }
      }
      if (absorbs[*wire]) {
        record.removed_at = absorbs[*wire];
        ++result.removed;
        break;
      }

      const Wire& w = net.wires()[*wire];
      UnitKind& unit = units[w.to.unit];
      Port out = Port::zero;
      bool detected = false;
      std::visit(overloaded{
                     [&](Detector& d) {
                       detect(d.site, result.counts);
                       record.final_site = d.site;
                       detected = true;
                     },
                     [&](PhaseShifter& p) { m = phase_shift(p.phi, m); },
                     [&](HadamardUnit&) { m = hadamard_apply(m); },
                     [&](BeamSplitter& b) {
                       b.state = adaptive_update(b.state, w.to.port, m);
                       const Routing r = bs_route(b.state, b.rng.uniform());
                       out = r.port;
                       m = r.message;
                     },
                     [&](PolarizingBeamSplitter& b) {
                       b.state = adaptive_update(b.state, w.to.port, m);
                       const Routing r = pbs_route(b.state, b.rng.uniform());
                       out = r.port;
                       m = r.message;
                     },
                     [](Source&) { throw InvariantBreach("wire leads back into the source"); },
                 },
                 unit);
      if (options.observer) options.observer({i, w.to.unit, &unit, m});
      if (detected) break;
      wire = net.output_wire(w.to.unit, out);
    }
    if (options.taps_enabled) result.records.push_back(std::move(record));
  }
  return result;
}

}  // namespace qwalk
