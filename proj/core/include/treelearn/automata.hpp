#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "treelearn/rng.hpp"

namespace treelearn {

/// Index into an Alphabet.
using Symbol = std::uint8_t;
/// Finite word over an alphabet; the empty vector is the empty word.
using Word = std::vector<Symbol>;
using StateId = std::uint32_t;

/// Ordered finite alphabet; each symbol displays as one printable character.
class Alphabet {
 public:
  Alphabet() = default;
  /// Characters must be distinct. Throws std::invalid_argument otherwise.
  explicit Alphabet(std::string chars);

  std::size_t size() const { return chars_.size(); }
  char display(Symbol s) const { return chars_.at(s); }
  std::optional<Symbol> index_of(char c) const;
  const std::string& chars() const { return chars_; }

  /// Parse a word from its display string. Throws on an unknown character.
  Word parse_word(std::string_view text) const;
  std::string format_word(const Word& w) const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::string chars_;
};

/// Complete deterministic finite automaton with a dense transition table.
struct Dfa {
  Alphabet alphabet;
  StateId initial = 0;
  std::vector<StateId> delta;    // delta[q * |A| + a]
  std::vector<bool> accepting;   // per state

  std::size_t num_states() const { return accepting.size(); }
  StateId next(StateId q, Symbol a) const {
    return delta[static_cast<std::size_t>(q) * alphabet.size() + a];
  }
  bool is_accepting(StateId q) const { return accepting[q]; }
};

/// Checks completeness, state-id bounds, and initial-state membership;
/// throws std::invalid_argument on violation.
void validate(const Dfa& dfa);

StateId reach(const Dfa& dfa, const Word& w);
bool accepts(const Dfa& dfa, const Word& w);

/// Minimal one-state DFA accepting every word.
Dfa trivial_top(const Alphabet& alphabet);
/// Minimal one-state DFA accepting nothing.
Dfa trivial_bottom(const Alphabet& alphabet);

Dfa complement(const Dfa& dfa);

/// Language-equivalent minimal DFA. Only reachable states are retained and
/// output states are numbered by BFS discovery order over the ordered
/// alphabet, so equal languages yield identical tables.
Dfa minimize(const Dfa& dfa);

/// Shortest word on which the two automata disagree (ties broken by
/// alphabet order), or nullopt when the languages are equal.
std::optional<Word> exact_counterexample(const Dfa& d1, const Dfa& d2);

/// Random DFA that is minimal with exactly n states. Deterministic in
/// (n, alphabet, rng state). Throws std::runtime_error if no candidate is
/// found within the retry cap.
Dfa random_dfa(std::size_t n, const Alphabet& alphabet, Rng& rng);

Dfa mutate_add_state(const Dfa& dfa, Rng& rng);
Dfa mutate_remove_state(const Dfa& dfa, Rng& rng);
Dfa mutate_divert_transition(const Dfa& dfa, Rng& rng);
Dfa mutate_flip_acceptance(const Dfa& dfa, Rng& rng);

/// add, remove, divert, flip applied in that fixed order.
Dfa apply_mutation_scenario(const Dfa& dfa, Rng& rng);

/// Grafts a random closed 3-state feature automaton onto the base by
/// re-targeting 3 distinct base transitions to the feature start state.
Dfa apply_feature_add(const Dfa& dfa, Rng& rng);

/// Plain-text DFA format used by the CLI and golden tests.
std::string to_text(const Dfa& dfa);
/// Throws std::invalid_argument with a line number on malformed input.
Dfa dfa_from_text(const std::string& text);

}  // namespace treelearn
