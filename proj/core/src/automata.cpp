#include "treelearn/automata.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace treelearn {

Alphabet::Alphabet(std::string chars) : chars_(std::move(chars)) {
  std::set<char> seen;
  for (char c : chars_) {
    if (!seen.insert(c).second)
      throw std::invalid_argument("alphabet characters must be distinct");
  }
}

std::optional<Symbol> Alphabet::index_of(char c) const {
  auto pos = chars_.find(c);
  if (pos == std::string::npos) return std::nullopt;
  return static_cast<Symbol>(pos);
}

Word Alphabet::parse_word(std::string_view text) const {
  Word w;
  w.reserve(text.size());
  for (char c : text) {
    auto s = index_of(c);
    if (!s)
      throw std::invalid_argument(std::string("symbol '") + c +
                                  "' not in alphabet");
    w.push_back(*s);
  }
  return w;
}

std::string Alphabet::format_word(const Word& w) const {
  std::string out;
  out.reserve(w.size());
  for (Symbol s : w) out.push_back(display(s));
  return out;
}

void validate(const Dfa& dfa) {
  const std::size_t n = dfa.num_states();
  const std::size_t k = dfa.alphabet.size();
  if (n == 0) throw std::invalid_argument("DFA has no states");
  if (k == 0) throw std::invalid_argument("DFA over empty alphabet");
  if (dfa.delta.size() != n * k)
    throw std::invalid_argument("transition table is not total");
  if (dfa.initial >= n)
    throw std::invalid_argument("initial state out of range");
  for (StateId t : dfa.delta)
    if (t >= n) throw std::invalid_argument("transition target out of range");
}

StateId reach(const Dfa& dfa, const Word& w) {
  StateId q = dfa.initial;
  for (Symbol a : w) {
    if (a >= dfa.alphabet.size())
      throw std::invalid_argument("word symbol outside DFA alphabet");
    q = dfa.next(q, a);
  }
  return q;
}

bool accepts(const Dfa& dfa, const Word& w) {
  return dfa.is_accepting(reach(dfa, w));
}

static Dfa one_state(const Alphabet& alphabet, bool accepting) {
  if (alphabet.size() == 0)
    throw std::invalid_argument("alphabet must be nonempty");
  Dfa d;
  d.alphabet = alphabet;
  d.initial = 0;
  d.delta.assign(alphabet.size(), 0);
  d.accepting = {accepting};
  return d;
}

Dfa trivial_top(const Alphabet& alphabet) { return one_state(alphabet, true); }
Dfa trivial_bottom(const Alphabet& alphabet) {
  return one_state(alphabet, false);
}

Dfa complement(const Dfa& dfa) {
  Dfa out = dfa;
  for (std::size_t q = 0; q < out.accepting.size(); ++q)
    out.accepting[q] = !out.accepting[q];
  return out;
}

namespace {

std::vector<StateId> reachable_states(const Dfa& dfa) {
  std::vector<bool> seen(dfa.num_states(), false);
  std::vector<StateId> order;
  std::deque<StateId> queue{dfa.initial};
  seen[dfa.initial] = true;
  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    order.push_back(q);
    for (Symbol a = 0; a < dfa.alphabet.size(); ++a) {
      StateId t = dfa.next(q, a);
      if (!seen[t]) {
        seen[t] = true;
        queue.push_back(t);
      }
    }
  }
  return order;
}

}  // namespace

Dfa minimize(const Dfa& dfa) {
  validate(dfa);
  const std::size_t k = dfa.alphabet.size();

  // Restrict to reachable states.
  std::vector<StateId> order = reachable_states(dfa);
  std::vector<StateId> compact(dfa.num_states(), 0);
  for (std::size_t i = 0; i < order.size(); ++i) compact[order[i]] = StateId(i);
  const std::size_t n = order.size();

  // Moore partition refinement, starting from accepting/rejecting.
  std::vector<std::size_t> cls(n);
  for (std::size_t i = 0; i < n; ++i) cls[i] = dfa.accepting[order[i]] ? 1 : 0;
  std::size_t num_classes = 2;
  for (;;) {
    std::map<std::vector<std::size_t>, std::size_t> sig_to_class;
    std::vector<std::size_t> next_cls(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::size_t> sig;
      sig.reserve(k + 1);
      sig.push_back(cls[i]);
      for (Symbol a = 0; a < k; ++a)
        sig.push_back(cls[compact[dfa.next(order[i], a)]]);
      auto [it, _] = sig_to_class.try_emplace(sig, sig_to_class.size());
      next_cls[i] = it->second;
    }
    if (sig_to_class.size() == num_classes) break;
    num_classes = sig_to_class.size();
    cls = std::move(next_cls);
  }

  // Canonical renumbering: BFS over the quotient in alphabet order.
  std::vector<StateId> rep(num_classes, 0);
  for (std::size_t i = 0; i < n; ++i) rep[cls[i]] = order[i];
  std::vector<StateId> renum(num_classes, StateId(-1));
  std::vector<std::size_t> bfs;
  renum[cls[compact[dfa.initial]]] = 0;
  bfs.push_back(cls[compact[dfa.initial]]);
  std::size_t discovered = 1;
  for (std::size_t head = 0; head < bfs.size(); ++head) {
    StateId r = rep[bfs[head]];
    for (Symbol a = 0; a < k; ++a) {
      std::size_t c = cls[compact[dfa.next(r, a)]];
      if (renum[c] == StateId(-1)) {
        renum[c] = StateId(discovered++);
        bfs.push_back(c);
      }
    }
  }

  Dfa out;
  out.alphabet = dfa.alphabet;
  out.initial = 0;
  out.accepting.assign(num_classes, false);
  out.delta.assign(num_classes * k, 0);
  for (std::size_t c = 0; c < num_classes; ++c) {
    StateId q = renum[c];
    out.accepting[q] = dfa.accepting[rep[c]];
    for (Symbol a = 0; a < k; ++a)
      out.delta[static_cast<std::size_t>(q) * k + a] =
          renum[cls[compact[dfa.next(rep[c], a)]]];
  }
  return out;
}

std::optional<Word> exact_counterexample(const Dfa& d1, const Dfa& d2) {
  if (d1.alphabet != d2.alphabet)
    throw std::invalid_argument("automata have different alphabets");
  const std::size_t k = d1.alphabet.size();
  const std::size_t n2 = d2.num_states();

  auto pack = [n2](StateId a, StateId b) {
    return static_cast<std::size_t>(a) * n2 + b;
  };

  struct Item {
    StateId q1, q2;
  };
  std::vector<bool> seen(d1.num_states() * n2, false);
  std::vector<std::size_t> parent(d1.num_states() * n2, 0);
  std::vector<Symbol> via(d1.num_states() * n2, 0);
  std::deque<std::size_t> queue;

  auto disagrees = [&](StateId q1, StateId q2) {
    return d1.is_accepting(q1) != d2.is_accepting(q2);
  };
  auto word_to = [&](std::size_t s) {
    Word w;
    std::size_t start = pack(d1.initial, d2.initial);
    while (s != start) {
      w.push_back(via[s]);
      s = parent[s];
    }
    std::reverse(w.begin(), w.end());
    return w;
  };

  std::size_t start = pack(d1.initial, d2.initial);
  seen[start] = true;
  if (disagrees(d1.initial, d2.initial)) return Word{};
  queue.push_back(start);
  while (!queue.empty()) {
    std::size_t s = queue.front();
    queue.pop_front();
    StateId q1 = StateId(s / n2), q2 = StateId(s % n2);
    for (Symbol a = 0; a < k; ++a) {
      StateId t1 = d1.next(q1, a), t2 = d2.next(q2, a);
      std::size_t t = pack(t1, t2);
      if (seen[t]) continue;
      seen[t] = true;
      parent[t] = s;
      via[t] = a;
      if (disagrees(t1, t2)) return word_to(t);
      queue.push_back(t);
    }
  }
  return std::nullopt;
}

namespace {

Dfa random_complete_dfa(std::size_t n, const Alphabet& alphabet, Rng& rng) {
  Dfa d;
  d.alphabet = alphabet;
  d.initial = 0;
  d.delta.resize(n * alphabet.size());
  d.accepting.resize(n);
  for (std::size_t i = 0; i < d.delta.size(); ++i)
    d.delta[i] = StateId(rng.below(n));
  for (std::size_t q = 0; q < n; ++q) d.accepting[q] = rng.coin();
  return d;
}

}  // namespace

Dfa random_dfa(std::size_t n, const Alphabet& alphabet, Rng& rng) {
  if (n < 1) throw std::invalid_argument("state count must be positive");
  if (alphabet.size() == 0)
    throw std::invalid_argument("alphabet must be nonempty");
  // Uniform tables over n states rarely minimize to exactly n (unreachable
  // and indistinguishable states collapse), so raw size is sampled from a
  // band above n and candidates are rejected until the minimal automaton
  // hits n exactly.
  const std::size_t hi = n + n / 2 + 2;
  constexpr int kRetryCap = 10000;
  for (int attempt = 0; attempt < kRetryCap; ++attempt) {
    std::size_t raw = n + rng.below(hi - n + 1);
    Dfa candidate = minimize(random_complete_dfa(raw, alphabet, rng));
    if (candidate.num_states() == n) return candidate;
  }
  throw std::runtime_error("random_dfa: retry cap exceeded");
}

Dfa mutate_add_state(const Dfa& dfa, Rng& rng) {
  validate(dfa);
  const std::size_t k = dfa.alphabet.size();
  const std::size_t n = dfa.num_states();
  Dfa out = dfa;
  out.accepting.push_back(rng.coin());
  for (Symbol a = 0; a < k; ++a)
    out.delta.push_back(StateId(rng.below(n + 1)));
  // Divert one existing transition into the fresh state so it is reachable.
  std::size_t idx = rng.below(n * k);
  out.delta[idx] = StateId(n);
  return out;
}

Dfa mutate_remove_state(const Dfa& dfa, Rng& rng) {
  validate(dfa);
  const std::size_t k = dfa.alphabet.size();
  const std::size_t n = dfa.num_states();
  if (n < 2)
    throw std::invalid_argument("cannot remove a state from a 1-state DFA");
  // Uniform over non-initial states; the initial state is kept so q0 stays
  // well-defined.
  StateId victim;
  do {
    victim = StateId(rng.below(n));
  } while (victim == dfa.initial);

  auto remap = [victim](StateId q) {
    return q > victim ? StateId(q - 1) : q;
  };
  Dfa out;
  out.alphabet = dfa.alphabet;
  out.initial = remap(dfa.initial);
  out.accepting.reserve(n - 1);
  out.delta.reserve((n - 1) * k);
  for (StateId q = 0; q < n; ++q) {
    if (q == victim) continue;
    out.accepting.push_back(dfa.accepting[q]);
    for (Symbol a = 0; a < k; ++a) {
      StateId t = dfa.next(q, a);
      out.delta.push_back(t == victim ? StateId(rng.below(n - 1)) : remap(t));
    }
  }
  return out;
}

Dfa mutate_divert_transition(const Dfa& dfa, Rng& rng) {
  validate(dfa);
  Dfa out = dfa;
  std::size_t idx = rng.below(out.delta.size());
  out.delta[idx] = StateId(rng.below(out.num_states()));
  return out;
}

Dfa mutate_flip_acceptance(const Dfa& dfa, Rng& rng) {
  validate(dfa);
  Dfa out = dfa;
  std::size_t q = rng.below(out.num_states());
  out.accepting[q] = !out.accepting[q];
  return out;
}

Dfa apply_mutation_scenario(const Dfa& dfa, Rng& rng) {
  Dfa out = mutate_add_state(dfa, rng);
  out = mutate_remove_state(out, rng);
  out = mutate_divert_transition(out, rng);
  out = mutate_flip_acceptance(out, rng);
  return out;
}

Dfa apply_feature_add(const Dfa& dfa, Rng& rng) {
  validate(dfa);
  const std::size_t k = dfa.alphabet.size();
  const std::size_t n = dfa.num_states();
  if (n * k < 3)
    throw std::invalid_argument("feature-add needs at least 3 transitions");

  Dfa out = dfa;
  const StateId feature_start = StateId(n);
  // Feature automaton: 3 states, transitions closed within the feature.
  for (int i = 0; i < 3; ++i) {
    out.accepting.push_back(rng.coin());
    for (Symbol a = 0; a < k; ++a)
      out.delta.push_back(feature_start + StateId(rng.below(3)));
  }
  // Divert 3 distinct base transitions into the feature start state.
  std::set<std::size_t> picked;
  while (picked.size() < 3) picked.insert(rng.below(n * k));
  for (std::size_t idx : picked) out.delta[idx] = feature_start;
  return out;
}

std::string to_text(const Dfa& dfa) {
  std::ostringstream out;
  out << "alphabet: " << dfa.alphabet.chars() << "\n";
  out << "states: " << dfa.num_states() << "\n";
  out << "initial: " << dfa.initial << "\n";
  out << "accepting:";
  for (std::size_t q = 0; q < dfa.num_states(); ++q)
    if (dfa.accepting[q]) out << ' ' << q;
  out << "\n";
  for (std::size_t q = 0; q < dfa.num_states(); ++q) {
    out << "trans " << q << ":";
    for (Symbol a = 0; a < dfa.alphabet.size(); ++a)
      out << ' ' << dfa.next(StateId(q), a);
    out << "\n";
  }
  return out.str();
}

namespace {

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw std::invalid_argument("DFA text line " + std::to_string(line) + ": " +
                              what);
}

std::string expect_prefix(const std::string& line, const std::string& prefix,
                          int lineno) {
  if (line.rfind(prefix, 0) != 0) parse_fail(lineno, "expected '" + prefix + "'");
  return line.substr(prefix.size());
}

}  // namespace

Dfa dfa_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto next_line = [&]() {
    if (!std::getline(in, line)) parse_fail(lineno + 1, "unexpected end of input");
    ++lineno;
  };

  next_line();
  Alphabet alphabet(expect_prefix(line, "alphabet: ", lineno));
  if (alphabet.size() == 0) parse_fail(lineno, "empty alphabet");

  next_line();
  std::size_t n = 0;
  try {
    n = std::stoul(expect_prefix(line, "states: ", lineno));
  } catch (const std::exception&) {
    parse_fail(lineno, "bad state count");
  }
  if (n == 0) parse_fail(lineno, "state count must be positive");

  Dfa dfa;
  dfa.alphabet = alphabet;
  dfa.accepting.assign(n, false);

  next_line();
  try {
    dfa.initial = StateId(std::stoul(expect_prefix(line, "initial: ", lineno)));
  } catch (const std::exception&) {
    parse_fail(lineno, "bad initial state");
  }

  next_line();
  {
    std::istringstream fields(expect_prefix(line, "accepting:", lineno));
    std::size_t q;
    while (fields >> q) {
      if (q >= n) parse_fail(lineno, "accepting state out of range");
      dfa.accepting[q] = true;
    }
  }

  dfa.delta.assign(n * alphabet.size(), 0);
  for (std::size_t q = 0; q < n; ++q) {
    next_line();
    std::string rest =
        expect_prefix(line, "trans " + std::to_string(q) + ":", lineno);
    std::istringstream fields(rest);
    for (Symbol a = 0; a < alphabet.size(); ++a) {
      std::size_t t;
      if (!(fields >> t)) parse_fail(lineno, "missing transition target");
      if (t >= n) parse_fail(lineno, "transition target out of range");
      dfa.delta[q * alphabet.size() + a] = StateId(t);
    }
    std::size_t extra;
    if (fields >> extra) parse_fail(lineno, "trailing transition targets");
  }
  validate(dfa);
  return dfa;
}

}  // namespace treelearn
