#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <unordered_map>

#include "modae/zeno/zeno.hpp"

namespace modae::zeno {

std::vector<ObjectiveVector> ExactFront::vectors() const {
  std::vector<ObjectiveVector> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.objectives);
  return out;
}

namespace {

struct Neighbor {
  int to;
  Ticks duration;
};

std::vector<std::vector<Neighbor>> adjacency(const ZenoConfig& c) {
  std::vector<std::vector<Neighbor>> adj(static_cast<std::size_t>(c.cities));
  for (const auto& e : c.edges) {
    adj[static_cast<std::size_t>(e.from)].push_back({e.to, e.duration});
    adj[static_cast<std::size_t>(e.to)].push_back({e.from, e.duration});
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end(), [](auto& a, auto& b) { return a.to < b.to; });
  }
  return adj;
}

Ticks combine(ObjectiveMode mode, Ticks acc, Ticks landing) {
  return mode == ObjectiveMode::CostSum ? acc + landing : std::max(acc, landing);
}

// Search state with all times relative to `now`, the smallest plane ready time.
// Passengers are interchangeable, so they are kept as a sorted multiset of
// (location, time until available there).
struct Snapshot {
  struct PlaneSlot {
    std::uint8_t pos, ready, last_end;
  };
  struct Passenger {
    std::uint8_t loc, avail;
    friend auto operator<=>(const Passenger&, const Passenger&) = default;
  };
  std::vector<PlaneSlot> planes;
  std::vector<Passenger> pax;

  std::string key() const {
    std::string k;
    k.reserve(planes.size() * 3 + pax.size() * 2);
    for (const auto& p : planes) {
      k.push_back(static_cast<char>(p.pos));
      k.push_back(static_cast<char>(p.ready));
      k.push_back(static_cast<char>(p.last_end));
    }
    for (const auto& p : pax) {
      k.push_back(static_cast<char>(p.loc));
      k.push_back(static_cast<char>(p.avail));
    }
    return k;
  }

  static Snapshot decode(const std::string& k, std::size_t planes, std::size_t pax) {
    Snapshot s;
    s.planes.resize(planes);
    s.pax.resize(pax);
    std::size_t i = 0;
    for (auto& p : s.planes) {
      p.pos = static_cast<std::uint8_t>(k[i++]);
      p.ready = static_cast<std::uint8_t>(k[i++]);
      p.last_end = static_cast<std::uint8_t>(k[i++]);
    }
    for (auto& p : s.pax) {
      p.loc = static_cast<std::uint8_t>(k[i++]);
      p.avail = static_cast<std::uint8_t>(k[i++]);
    }
    return s;
  }
};

struct Leg {
  std::int8_t plane = -1;  // -1: wait transition
  std::uint8_t from = 0;
  std::uint8_t to = 0;
  bool carry = false;
};

struct Node {
  std::int64_t parent;
  Ticks now;
  Ticks sec;
  Leg leg;  // transition that produced this node from its parent
  std::string key;
};

struct Terminal {
  ObjectiveVector objectives;
  std::int64_t parent;
  Leg leg;
};

class FrontSearch {
 public:
  FrontSearch(const ZenoConfig& c, Ticks bound) : c_(c), adj_(adjacency(c)), bound_(bound) {
    for (const auto& e : c.edges) {
      if (e.duration > 250) throw Error("exact_front supports edge durations up to 250 quanta");
    }
  }

  std::vector<Terminal> run() {
    Snapshot init;
    init.planes.assign(static_cast<std::size_t>(c_.planes),
                       {static_cast<std::uint8_t>(c_.origin()), 0, 0});
    init.pax.assign(static_cast<std::size_t>(c_.passengers),
                    {static_cast<std::uint8_t>(c_.origin()), 0});
    if (c_.origin() == c_.destination()) return {Terminal{{0, 0}, -1, {}}};
    push(-1, 0, 0, {}, std::move(init), 0);

    while (!open_.empty()) {
      auto [now, sec, idx] = open_.top();
      open_.pop();
      if (dominated_by_front(now, sec)) continue;
      auto& best = expanded_[nodes_[idx].key];
      if (best.has_value && best.sec <= sec) continue;
      best = {true, sec};
      ++expanded_count_;
      expand(idx);
    }
    return front();
  }

  std::size_t expanded() const { return expanded_count_; }

  const Node& node(std::int64_t i) const { return nodes_[static_cast<std::size_t>(i)]; }

 private:
  struct Entry {
    Ticks now;
    Ticks sec;
    std::size_t node;
    friend bool operator>(const Entry& a, const Entry& b) {
      return a.now != b.now ? a.now > b.now : a.sec != b.sec ? a.sec > b.sec : a.node > b.node;
    }
  };
  struct Best {
    bool has_value = false;
    Ticks sec = 0;
  };

  bool dominated_by_front(Ticks now, Ticks sec) const {
    for (const auto& t : terminals_) {
      if (t.objectives.makespan <= now && t.objectives.secondary <= sec) return true;
    }
    return false;
  }

  void expand(std::size_t idx) {
    const Node cur = nodes_[idx];
    const Snapshot s = Snapshot::decode(cur.key, static_cast<std::size_t>(c_.planes),
                                        static_cast<std::size_t>(c_.passengers));
    const auto dest = static_cast<std::uint8_t>(c_.destination());
    for (std::size_t i = 0; i < s.planes.size(); ++i) {
      const auto& pl = s.planes[i];
      if (pl.ready != 0) continue;
      for (const auto& nb : adj_[pl.pos]) {
        const auto d = static_cast<std::uint8_t>(nb.duration);
        const Ticks sec = combine(c_.mode, cur.sec, c_.landing(nb.to));
        Leg leg{static_cast<std::int8_t>(i), pl.pos, static_cast<std::uint8_t>(nb.to), false};
        Snapshot next = s;
        next.planes[i] = {static_cast<std::uint8_t>(nb.to), d, d};
        push(static_cast<std::int64_t>(idx), cur.now, sec, leg, next, nb.duration);

        if (pl.pos == dest) continue;
        leg.carry = true;
        for (std::size_t p = 0; p < s.pax.size(); ++p) {
          const auto& px = s.pax[p];
          if (px.loc != pl.pos || px.avail != 0) continue;
          if (p > 0 && s.pax[p - 1].loc == px.loc && s.pax[p - 1].avail == px.avail) continue;
          Snapshot carried = next;
          carried.pax[p] = {static_cast<std::uint8_t>(nb.to),
                            static_cast<std::uint8_t>(nb.to == c_.destination() ? 0 : d)};
          push(static_cast<std::int64_t>(idx), cur.now, sec, leg, std::move(carried), nb.duration);
        }
      }
      // Wait until the next event: another plane becoming ready, or a passenger
      // becoming available at this plane's city.
      int wake = std::numeric_limits<int>::max();
      for (std::size_t j = 0; j < s.planes.size(); ++j) {
        if (j != i && s.planes[j].ready > 0) wake = std::min<int>(wake, s.planes[j].ready);
      }
      for (const auto& px : s.pax) {
        if (px.loc == pl.pos && px.avail > 0) wake = std::min<int>(wake, px.avail);
      }
      if (wake != std::numeric_limits<int>::max()) {
        Snapshot next = s;
        next.planes[i].ready = static_cast<std::uint8_t>(wake);
        push(static_cast<std::int64_t>(idx), cur.now, cur.sec, Leg{}, std::move(next), 0);
      }
    }
  }

  void push(std::int64_t parent, Ticks now, Ticks sec, Leg leg, Snapshot s, Ticks leg_duration) {
    if (leg.plane >= 0 && now + leg_duration > bound_) return;
    const auto dest = static_cast<std::uint8_t>(c_.destination());
    const bool done = std::all_of(s.pax.begin(), s.pax.end(),
                                  [dest](const auto& p) { return p.loc == dest; });
    if (done && leg.plane >= 0) {
      Ticks last = 0;
      for (const auto& p : s.planes) last = std::max<Ticks>(last, p.last_end);
      add_terminal(Terminal{{now + last, sec}, parent, leg});
      return;
    }
    int shift = std::numeric_limits<int>::max();
    for (const auto& p : s.planes) shift = std::min<int>(shift, p.ready);
    auto sub = [shift](std::uint8_t v) {
      return static_cast<std::uint8_t>(std::max(0, static_cast<int>(v) - shift));
    };
    for (auto& p : s.planes) {
      p.ready = sub(p.ready);
      p.last_end = sub(p.last_end);
    }
    for (auto& p : s.pax) p.avail = sub(p.avail);
    std::sort(s.pax.begin(), s.pax.end());
    const Ticks at = now + shift;
    if (dominated_by_front(at, sec)) return;
    std::string key = s.key();
    if (auto it = expanded_.find(key); it != expanded_.end() && it->second.has_value &&
                                       it->second.sec <= sec) {
      return;
    }
    nodes_.push_back(Node{parent, at, sec, leg, std::move(key)});
    open_.push(Entry{at, sec, nodes_.size() - 1});
  }

  void add_terminal(Terminal t) {
    for (const auto& u : terminals_) {
      if (u.objectives.makespan <= t.objectives.makespan &&
          u.objectives.secondary <= t.objectives.secondary) {
        return;
      }
    }
    std::erase_if(terminals_, [&](const Terminal& u) {
      return t.objectives.makespan <= u.objectives.makespan &&
             t.objectives.secondary <= u.objectives.secondary;
    });
    terminals_.push_back(std::move(t));
  }

  std::vector<Terminal> front() const {
    auto out = terminals_;
    std::sort(out.begin(), out.end(), [](const Terminal& a, const Terminal& b) {
      return a.objectives.makespan < b.objectives.makespan;
    });
    return out;
  }

  const ZenoConfig& c_;
  std::vector<std::vector<Neighbor>> adj_;
  Ticks bound_;
  std::vector<Node> nodes_;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open_;
  std::unordered_map<std::string, Best> expanded_;
  std::vector<Terminal> terminals_;
  std::size_t expanded_count_ = 0;
};

// Turns the abstract leg sequence into a concrete schedule on the grounded task.
planning::Plan realize(const ZenoConfig& c, const planning::GroundedTask& task,
                       const std::vector<std::pair<Ticks, Leg>>& legs) {
  std::vector<int> loc(static_cast<std::size_t>(c.passengers), c.origin());
  std::vector<Ticks> arrival(static_cast<std::size_t>(c.passengers), 0);
  std::map<std::pair<int, int>, Ticks> duration;
  for (const auto& e : c.edges) {
    duration[{e.from, e.to}] = e.duration;
    duration[{e.to, e.from}] = e.duration;
  }
  planning::Plan plan;
  for (const auto& [start, leg] : legs) {
    const Ticks d = duration.at({leg.from, leg.to});
    std::string name;
    if (leg.carry) {
      int who = -1;
      for (int p = 0; p < c.passengers; ++p) {
        if (loc[static_cast<std::size_t>(p)] == leg.from &&
            arrival[static_cast<std::size_t>(p)] <= start) {
          who = p;
          break;
        }
      }
      if (who < 0) throw Error("internal: oracle witness has no passenger to carry");
      loc[static_cast<std::size_t>(who)] = leg.to;
      arrival[static_cast<std::size_t>(who)] = start + d;
      name = "(fly-carry " + plane_name(leg.plane) + " " + person_name(who) + " " +
             city_name(leg.from) + " " + city_name(leg.to) + ")";
    } else {
      name = "(fly-empty " + plane_name(leg.plane) + " " + city_name(leg.from) + " " +
             city_name(leg.to) + ")";
    }
    plan.steps.push_back(planning::PlanStep{start, task.action_id(name)});
  }
  std::sort(plan.steps.begin(), plan.steps.end());
  plan.objectives = planning::validate_and_score(task, plan);
  return plan;
}

}  // namespace

Ticks min_secondary(const ZenoConfig& c) {
  validate(c);
  const auto adj = adjacency(c);
  const auto planes = static_cast<std::size_t>(c.planes);
  const auto cities = static_cast<std::size_t>(c.cities);
  // State: plane positions followed by passenger counts per city.
  std::string start(planes + cities, 0);
  for (std::size_t i = 0; i < planes; ++i) start[i] = static_cast<char>(c.origin());
  start[planes + static_cast<std::size_t>(c.origin())] = static_cast<char>(c.passengers);

  using Item = std::pair<Ticks, std::string>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  std::unordered_map<std::string, Ticks> best;
  open.push({0, start});
  best[start] = 0;
  const auto dest = static_cast<std::size_t>(c.destination());
  while (!open.empty()) {
    auto [g, s] = open.top();
    open.pop();
    if (best[s] < g) continue;
    if (static_cast<int>(s[planes + dest]) == c.passengers) return g;
    for (std::size_t i = 0; i < planes; ++i) {
      const auto pos = static_cast<std::size_t>(s[i]);
      for (const auto& nb : adj[pos]) {
        const Ticks ng = combine(c.mode, g, c.landing(nb.to));
        for (int carry = 0; carry < 2; ++carry) {
          std::string t = s;
          t[i] = static_cast<char>(nb.to);
          if (carry) {
            if (pos == dest || t[planes + pos] == 0) continue;
            --t[planes + pos];
            ++t[planes + static_cast<std::size_t>(nb.to)];
          }
          auto it = best.find(t);
          if (it == best.end() || ng < it->second) {
            best[t] = ng;
            open.push({ng, std::move(t)});
          }
        }
      }
    }
  }
  (void)cities;
  throw Error("no plan delivers every passenger");
}

ExactFront exact_front(const ZenoConfig& config, const planning::GroundedTask& task,
                       Ticks makespan_bound) {
  validate(config);
  FrontSearch search(config, makespan_bound);
  const auto terminals = search.run();
  const Ticks floor = min_secondary(config);
  if (terminals.empty() || terminals.back().objectives.secondary > floor) {
    throw IncompleteFrontError("makespan bound " + std::to_string(makespan_bound) +
                               " is too small to reach the minimum-" +
                               std::string(planning::to_string(config.mode)) + " plan");
  }
  ExactFront out;
  out.expanded_labels = search.expanded();
  for (const auto& t : terminals) {
    std::vector<std::pair<Ticks, Leg>> legs;
    if (t.leg.plane >= 0) legs.push_back({-1, t.leg});
    Ticks start_of_last = t.parent >= 0 ? search.node(t.parent).now : 0;
    if (!legs.empty()) legs.back().first = start_of_last;
    for (std::int64_t i = t.parent; i >= 0;) {
      const auto& n = search.node(i);
      if (n.leg.plane >= 0) {
        legs.push_back({n.parent >= 0 ? search.node(n.parent).now : 0, n.leg});
      }
      i = n.parent;
    }
    std::reverse(legs.begin(), legs.end());
    FrontPoint point{t.objectives, realize(config, task, legs)};
    if (point.plan.objectives != t.objectives) {
      throw Error("internal: oracle witness plan does not reproduce its objective vector");
    }
    out.points.push_back(std::move(point));
  }
  return out;
}

}  // namespace modae::zeno
