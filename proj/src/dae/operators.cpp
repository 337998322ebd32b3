#include <algorithm>

#include "modae/core/error.hpp"
#include "modae/dae/dae.hpp"

namespace modae::dae {

namespace {

std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

bool chance(Rng& rng, double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

Ticks anchor_of(const Heuristics& heur, const std::vector<AtomId>& atoms) {
  Ticks t = 0;
  for (AtomId a : atoms) t = std::max(t, heur.h1(a));
  return t;
}

// Random atom whose h1 index lies in [lo, hi] and that fits with `atoms`.
std::optional<AtomId> draw_atom(const Heuristics& heur, const std::vector<AtomId>& atoms,
                                std::size_t lo, std::size_t hi, Rng& rng, int attempts = 16) {
  for (int i = 0; i < attempts; ++i) {
    const auto& bucket = heur.atoms_at(lo + uniform_index(rng, hi - lo + 1));
    const AtomId a = bucket[uniform_index(rng, bucket.size())];
    if (heur.compatible(atoms, a)) return a;
  }
  return std::nullopt;
}

// A state anchored at times()[index]: one atom of that time plus up to
// max_atoms - 1 compatible atoms from the `window` time values at or below it.
PartialState sample_state(const Heuristics& heur, std::size_t index, std::size_t window,
                          const EvoParams& params, Rng& rng) {
  PartialState s;
  const auto& bucket = heur.atoms_at(index);
  s.atoms.push_back(bucket[uniform_index(rng, bucket.size())]);
  const auto want = static_cast<std::size_t>(
      std::uniform_int_distribution<int>(1, params.max_atoms)(rng));
  const std::size_t lo = index + 1 >= window ? index + 1 - window : 0;
  while (s.atoms.size() < want) {
    auto extra = draw_atom(heur, s.atoms, lo, index, rng);
    if (!extra) break;
    s.atoms.push_back(*extra);
  }
  std::sort(s.atoms.begin(), s.atoms.end());
  s.anchor = heur.times()[index];
  return s;
}

// Index range [lo, hi] of h1 values usable between two anchors.
std::pair<std::size_t, std::size_t> window_between(const Heuristics& heur, Ticks lo, Ticks hi) {
  const auto& t = heur.times();
  const auto a = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), lo) - t.begin());
  auto b = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), hi) - t.begin());
  return {a, b == 0 ? 0 : b - 1};
}

Ticks prev_anchor(const Individual& ind, std::size_t k) {
  return k == 0 ? 0 : ind.states[k - 1].anchor;
}

Ticks next_anchor(const Individual& ind, std::size_t k, const Heuristics& heur) {
  return k + 1 < ind.states.size() ? ind.states[k + 1].anchor : heur.times().back();
}

}  // namespace

Individual init_individual(const Heuristics& heur, const EvoParams& params, Rng& rng) {
  Individual ind;
  const auto& times = heur.times();
  if (times.empty()) return ind;
  const int cap = std::min<int>(params.max_length, static_cast<int>(times.size()));
  const int length = std::uniform_int_distribution<int>(1, cap)(rng);

  std::vector<std::size_t> idx(times.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::vector<std::size_t> picked;
  std::sample(idx.begin(), idx.end(), std::back_inserter(picked), length, rng);
  std::sort(picked.begin(), picked.end());
  // No window restriction at initialization: any atom with h1 <= anchor qualifies.
  for (std::size_t i : picked) {
    ind.states.push_back(sample_state(heur, i, i + 1, params, rng));
  }
  return ind;
}

std::optional<Individual> crossover_at(const Individual& p1, const Individual& p2,
                                       std::size_t cut1, std::size_t cut2, int max_length) {
  if (cut1 > p1.states.size() || cut2 > p2.states.size()) {
    throw ContractViolation("crossover cut out of range");
  }
  if (cut1 > 0 && cut2 < p2.states.size() &&
      p1.states[cut1 - 1].anchor > p2.states[cut2].anchor) {
    return std::nullopt;
  }
  if (cut1 + (p2.states.size() - cut2) > static_cast<std::size_t>(max_length)) {
    return std::nullopt;
  }
  Individual child;
  child.states.assign(p1.states.begin(), p1.states.begin() + static_cast<std::ptrdiff_t>(cut1));
  child.states.insert(child.states.end(), p2.states.begin() + static_cast<std::ptrdiff_t>(cut2),
                      p2.states.end());
  return child;
}

Individual crossover(const Individual& p1, const Individual& p2, const EvoParams& params,
                     Rng& rng) {
  for (int attempt = 0; attempt < params.crossover_retries; ++attempt) {
    const auto c1 = std::uniform_int_distribution<std::size_t>(0, p1.states.size())(rng);
    const auto c2 = std::uniform_int_distribution<std::size_t>(0, p2.states.size())(rng);
    if (auto child = crossover_at(p1, p2, c1, c2, params.max_length)) return std::move(*child);
  }
  Individual copy;
  copy.states = p1.states;
  return copy;
}

Individual mutate_with(MutationKind kind, const Individual& ind, const Heuristics& heur,
                       const EvoParams& params, Rng& rng) {
  Individual out;
  out.states = ind.states;
  auto& st = out.states;
  const auto& times = heur.times();
  switch (kind) {
    case MutationKind::AddState: {
      if (times.empty() || st.size() >= static_cast<std::size_t>(params.max_length)) break;
      const std::size_t pos = std::uniform_int_distribution<std::size_t>(0, st.size())(rng);
      const Ticks lo = pos == 0 ? 0 : st[pos - 1].anchor;
      const Ticks hi = pos < st.size() ? st[pos].anchor : times.back();
      auto [a, b] = window_between(heur, lo, hi);
      if (a > b) break;
      const std::size_t index = a + uniform_index(rng, b - a + 1);
      st.insert(st.begin() + static_cast<std::ptrdiff_t>(pos),
                sample_state(heur, index, static_cast<std::size_t>(params.radius), params, rng));
      break;
    }
    case MutationKind::DelState: {
      if (st.empty()) break;
      st.erase(st.begin() + static_cast<std::ptrdiff_t>(uniform_index(rng, st.size())));
      break;
    }
    case MutationKind::AddChangeAtom: {
      if (st.empty()) break;
      const std::size_t k = uniform_index(rng, st.size());
      auto [a, b] = window_between(heur, prev_anchor(out, k), next_anchor(out, k, heur));
      if (a > b) break;
      auto& atoms = st[k].atoms;
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (!chance(rng, params.proba_change)) continue;
        std::vector<AtomId> others = atoms;
        others.erase(others.begin() + static_cast<std::ptrdiff_t>(i));
        if (auto r = draw_atom(heur, others, a, b, rng)) atoms[i] = *r;
      }
      if (atoms.size() < static_cast<std::size_t>(params.max_atoms) &&
          chance(rng, params.proba_change)) {
        if (auto r = draw_atom(heur, atoms, a, b, rng)) atoms.push_back(*r);
      }
      std::sort(atoms.begin(), atoms.end());
      atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
      st[k].anchor = anchor_of(heur, atoms);
      break;
    }
    case MutationKind::DelAtom: {
      if (st.empty()) break;
      const std::size_t k = uniform_index(rng, st.size());
      auto& atoms = st[k].atoms;
      if (atoms.size() < 2) break;
      const Ticks floor = prev_anchor(out, k);
      // The anchor atom survives if removing it would break the chronology.
      const auto top = *std::max_element(atoms.begin(), atoms.end(), [&](AtomId x, AtomId y) {
        return heur.h1(x) < heur.h1(y);
      });
      std::vector<AtomId> kept;
      for (AtomId x : atoms) {
        if (!chance(rng, params.proba_delatom)) kept.push_back(x);
      }
      if (kept.empty() || anchor_of(heur, kept) < floor) {
        if (std::find(kept.begin(), kept.end(), top) == kept.end()) kept.push_back(top);
        std::sort(kept.begin(), kept.end());
      }
      atoms = std::move(kept);
      st[k].anchor = anchor_of(heur, atoms);
      break;
    }
  }
  return out;
}

Individual mutate(const Individual& ind, const Heuristics& heur, const EvoParams& params,
                  Rng& rng) {
  const bool empty = ind.states.empty();
  const bool full = ind.states.size() >= static_cast<std::size_t>(params.max_length);
  const double w[4] = {full ? 0 : params.w_addgoal, empty ? 0 : params.w_delgoal,
                       empty ? 0 : params.w_addatom, empty ? 0 : params.w_delatom};
  if (w[0] + w[1] + w[2] + w[3] <= 0) {
    Individual copy;
    copy.states = ind.states;
    return copy;
  }
  std::discrete_distribution<int> pick({w[0], w[1], w[2], w[3]});
  return mutate_with(static_cast<MutationKind>(pick(rng)), ind, heur, params, rng);
}

}  // namespace modae::dae
