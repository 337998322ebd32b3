#include <algorithm>
#include <queue>

#include "modae/core/error.hpp"
#include "modae/dae/dae.hpp"

namespace modae::dae {

std::vector<Ticks> h1_earliest(const GroundedTask& task) {
  const auto& actions = task.actions();
  std::vector<Ticks> h(task.atom_count(), kUnreachable);
  std::vector<int> missing(actions.size());
  std::vector<Ticks> latest(actions.size(), 0);

  using Entry = std::pair<Ticks, AtomId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  auto relax = [&](const planning::GroundedAction& a) {
    const Ticks t = latest[a.id] + a.duration;
    for (AtomId q : a.add_effects) {
      if (t < h[q]) {
        h[q] = t;
        heap.push({t, q});
      }
    }
  };
  for (AtomId p : task.init().atoms()) {
    h[p] = 0;
    heap.push({0, p});
  }
  for (const auto& a : actions) {
    missing[a.id] = static_cast<int>(a.preconditions.size());
    if (missing[a.id] == 0) relax(a);
  }
  while (!heap.empty()) {
    auto [t, p] = heap.top();
    heap.pop();
    if (t > h[p]) continue;
    for (ActionId id : task.consumers(p)) {
      latest[id] = std::max(latest[id], t);
      if (--missing[id] == 0) relax(actions[id]);
    }
  }
  return h;
}

MutexTable::MutexTable(std::size_t atom_count) : n_(atom_count), bits_(atom_count * atom_count, 0) {}

void MutexTable::set(AtomId a, AtomId b) {
  if (a == b) return;
  bits_[static_cast<std::size_t>(a) * n_ + b] = 1;
  bits_[static_cast<std::size_t>(b) * n_ + a] = 1;
}

std::size_t MutexTable::pair_count() const {
  std::size_t c = 0;
  for (std::size_t a = 0; a < n_; ++a) {
    for (std::size_t b = a + 1; b < n_; ++b) c += bits_[a * n_ + b];
  }
  return c;
}

MutexTable mutex_pairs(const GroundedTask& task) {
  const std::size_t n = task.atom_count();
  std::vector<std::uint8_t> reach(n * n, 0);
  auto r = [&](AtomId a, AtomId b) -> std::uint8_t& { return reach[a * n + b]; };
  bool changed = false;
  auto mark = [&](AtomId a, AtomId b) {
    if (!r(a, b)) {
      r(a, b) = r(b, a) = 1;
      changed = true;
    }
  };

  const auto init = task.init().atoms();
  for (AtomId a : init) {
    for (AtomId b : init) r(a, b) = 1;
  }

  std::vector<std::uint8_t> touched(n, 0);
  do {
    changed = false;
    for (const auto& act : task.actions()) {
      const auto& pre = act.preconditions;
      bool ok = true;
      for (std::size_t i = 0; ok && i < pre.size(); ++i) {
        for (std::size_t j = i; ok && j < pre.size(); ++j) ok = r(pre[i], pre[j]);
      }
      if (!ok) continue;
      for (AtomId p : act.add_effects) {
        for (AtomId q : act.add_effects) mark(p, q);
      }
      for (AtomId p : act.add_effects) touched[p] = 1;
      for (AtomId p : act.del_effects) touched[p] = 1;
      // An untouched atom that can hold together with the preconditions persists.
      for (AtomId q = 0; q < n; ++q) {
        if (touched[q] || !r(q, q)) continue;
        bool persists = true;
        for (AtomId p : pre) {
          if (!r(q, p)) {
            persists = false;
            break;
          }
        }
        if (!persists) continue;
        for (AtomId p : act.add_effects) mark(p, q);
      }
      for (AtomId p : act.add_effects) touched[p] = 0;
      for (AtomId p : act.del_effects) touched[p] = 0;
    }
  } while (changed);

  MutexTable table(n);
  for (AtomId a = 0; a < n; ++a) {
    for (AtomId b = a + 1; b < n; ++b) {
      if (!r(a, b)) table.set(a, b);
    }
  }
  return table;
}

Heuristics::Heuristics(const GroundedTask& task)
    : task_(&task), h1_(h1_earliest(task)), mutex_(mutex_pairs(task)) {
  for (Ticks t : h1_) {
    if (t != kUnreachable) times_.push_back(t);
  }
  std::sort(times_.begin(), times_.end());
  times_.erase(std::unique(times_.begin(), times_.end()), times_.end());
  by_time_.resize(times_.size());
  for (AtomId a = 0; a < h1_.size(); ++a) {
    if (h1_[a] != kUnreachable) by_time_[time_index(h1_[a])].push_back(a);
  }
}

std::size_t Heuristics::time_index(Ticks t) const {
  auto it = std::lower_bound(times_.begin(), times_.end(), t);
  if (it == times_.end() || *it != t) throw ContractViolation("time is not an h1 value");
  return static_cast<std::size_t>(it - times_.begin());
}

bool Heuristics::compatible(const std::vector<AtomId>& atoms, AtomId candidate) const {
  if (h1_[candidate] == kUnreachable) return false;
  for (AtomId a : atoms) {
    if (a == candidate || mutex_.mutex(a, candidate)) return false;
  }
  return true;
}

bool Heuristics::valid(const Individual& ind) const {
  Ticks previous = 0;
  for (const auto& s : ind.states) {
    if (s.atoms.empty()) return false;
    if (!std::is_sorted(s.atoms.begin(), s.atoms.end())) return false;
    Ticks top = 0;
    for (std::size_t i = 0; i < s.atoms.size(); ++i) {
      const AtomId a = s.atoms[i];
      if (a >= h1_.size() || h1_[a] == kUnreachable) return false;
      top = std::max(top, h1_[a]);
      for (std::size_t j = i + 1; j < s.atoms.size(); ++j) {
        if (a == s.atoms[j] || mutex_.mutex(a, s.atoms[j])) return false;
      }
    }
    if (top != s.anchor || s.anchor < previous) return false;
    previous = s.anchor;
  }
  return true;
}

void EvoParams::validate() const {
  auto in = [](double v, double lo, double hi, const char* name) {
    if (!(v >= lo && v <= hi)) {
      throw Error(std::string(name) + " out of range [" + std::to_string(lo) + ", " +
                  std::to_string(hi) + "]");
    }
  };
  in(pop_size, 10, 300, "pop-size");
  in(proba_cross, 0, 1, "proba-cross");
  in(proba_mut, 0, 1, "proba-mut");
  in(w_addgoal, 1, 10, "w-addgoal");
  in(w_delgoal, 1, 10, "w-delgoal");
  in(w_addatom, 1, 10, "w-addatom");
  in(w_delatom, 1, 10, "w-delatom");
  in(proba_change, 0, 1, "proba-change");
  in(proba_delatom, 0, 1, "proba-delatom");
  in(radius, 1, 10, "radius");
  in(w_makespan, 0, 5, "w-makespan");
  in(w_cost, 0, 5, "w-cost");
  if (w_makespan + w_cost <= 0) throw Error("w-makespan and w-cost cannot both be zero");
  if (max_length < 1) throw Error("max-length must be positive");
  if (max_atoms < 1) throw Error("max-atoms must be positive");
  if (crossover_retries < 1) throw Error("crossover-retries must be positive");
}

}  // namespace modae::dae
