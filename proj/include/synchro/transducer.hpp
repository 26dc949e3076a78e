#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "synchro/errors.hpp"
#include "synchro/word.hpp"

namespace synchro {

// A complete deterministic letter-to-letter transducer: every state has
// exactly one transition and one output letter per input letter. Values are
// immutable after construction; all operations build new machines.
//
// Letters are plain ints in [0, alphabet_size). States are indices into the
// label list; labels are display names only and never carry semantics.
class Transducer {
 public:
  Transducer(int alphabet_size, std::vector<std::string> labels,
             std::vector<int> next, std::vector<int> out)
      : n_(alphabet_size),
        labels_(std::move(labels)),
        next_(std::move(next)),
        out_(std::move(out)) {
    validate();
  }

  int alphabet_size() const { return n_; }
  int num_states() const { return static_cast<int>(labels_.size()); }

  const std::vector<std::string>& labels() const { return labels_; }

  const std::string& label(int q) const {
    check_state(q);
    return labels_[q];
  }

  std::optional<int> state_index(const std::string& label) const {
    for (int q = 0; q < num_states(); ++q)
      if (labels_[q] == label) return q;
    return std::nullopt;
  }

  // Transition pi(x, q): state reached from q on input letter x.
  int next(int x, int q) const {
    check_letter(x);
    check_state(q);
    return next_[idx(x, q)];
  }

  // Output lambda(x, q): letter emitted from q on input letter x.
  int out(int x, int q) const {
    check_letter(x);
    check_state(q);
    return out_[idx(x, q)];
  }

  const std::vector<int>& next_table() const { return next_; }
  const std::vector<int>& out_table() const { return out_; }

  friend bool operator==(const Transducer& a, const Transducer& b) {
    return a.n_ == b.n_ && a.labels_ == b.labels_ && a.next_ == b.next_ &&
           a.out_ == b.out_;
  }

 private:
  size_t idx(int x, int q) const { return static_cast<size_t>(q) * n_ + x; }

  void check_letter(int x) const {
    if (x < 0 || x >= n_)
      throw LetterOutOfRange("letter " + std::to_string(x) +
                             " outside alphabet of size " + std::to_string(n_));
  }

  void check_state(int q) const {
    if (q < 0 || q >= num_states())
      throw UnknownState("state index " + std::to_string(q) +
                         " outside machine with " +
                         std::to_string(num_states()) + " states");
  }

  void validate() const {
    if (n_ < 1) throw SyntaxError("alphabet size must be at least 1");
    if (labels_.empty()) throw SyntaxError("a transducer needs at least one state");
    std::unordered_set<std::string> seen;
    for (const auto& l : labels_) {
      if (l.empty()) throw SyntaxError("empty state label");
      for (char c : l)
        if (c == '#' || std::isspace(static_cast<unsigned char>(c)))
          throw SyntaxError("state label '" + l + "' contains whitespace or '#'");
      if (!seen.insert(l).second)
        throw DuplicateState("state label '" + l + "' declared twice");
    }
    const size_t table = static_cast<size_t>(n_) * labels_.size();
    if (next_.size() != table || out_.size() != table)
      throw MissingTransition("transition table does not cover every (state, letter) pair");
    for (int v : next_)
      if (v < 0 || v >= num_states())
        throw UnknownState("transition target out of range");
    for (int v : out_)
      if (v < 0 || v >= n_) throw LetterOutOfRange("output letter out of range");
  }

  int n_;
  std::vector<std::string> labels_;
  std::vector<int> next_;  // next_[q * n + x]
  std::vector<int> out_;   // out_[q * n + x]
};

// Structural equality ignoring labels: same alphabet, state count and tables
// under the identity correspondence of indices.
inline bool same_shape(const Transducer& a, const Transducer& b) {
  return a.alphabet_size() == b.alphabet_size() &&
         a.num_states() == b.num_states() &&
         a.next_table() == b.next_table() && a.out_table() == b.out_table();
}

// Convenience builder used by parse() and the factories: rows are
// (state, in, out, next) quadruples over already-validated labels.
class TransducerBuilder {
 public:
  TransducerBuilder(int alphabet_size, std::vector<std::string> labels)
      : n_(alphabet_size), labels_(std::move(labels)) {
    next_.assign(static_cast<size_t>(n_) * labels_.size(), -1);
    out_.assign(static_cast<size_t>(n_) * labels_.size(), -1);
  }

  void add(int state, int in, int out, int next) {
    const size_t i = static_cast<size_t>(state) * n_ + in;
    next_[i] = next;
    out_[i] = out;
  }

  bool has(int state, int in) const {
    return next_[static_cast<size_t>(state) * n_ + in] >= 0;
  }

  Transducer build() const {
    for (size_t q = 0; q < labels_.size(); ++q)
      for (int x = 0; x < n_; ++x)
        if (next_[q * n_ + x] < 0)
          throw MissingTransition("state '" + labels_[q] + "' has no transition on letter " +
                                  std::to_string(x));
    return Transducer(n_, labels_, next_, out_);
  }

 private:
  int n_;
  std::vector<std::string> labels_;
  std::vector<int> next_;
  std::vector<int> out_;
};

namespace detail {

inline std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream in(line);
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

inline int parse_int(const std::string& tok, int line_no) {
  size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(tok, &pos);
  } catch (const std::exception&) {
    throw SyntaxError("line " + std::to_string(line_no) + ": expected an integer, got '" + tok + "'");
  }
  if (pos != tok.size())
    throw SyntaxError("line " + std::to_string(line_no) + ": expected an integer, got '" + tok + "'");
  return v;
}

}  // namespace detail

// Parses the text machine format. Layout:
//
//   alphabet <n>
//   states <label> <label> ...
//   <state> <in-letter> <out-letter> <next-state>   (one line per pair)
//
// '#' starts a comment, blank lines are skipped, and every (state, letter)
// pair must appear exactly once.
inline Transducer parse(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;

  int alphabet = -1;
  std::vector<std::string> labels;
  std::unordered_map<std::string, int> index;
  std::optional<TransducerBuilder> builder;
  int stage = 0;  // 0: want alphabet, 1: want states, 2: rows

  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    auto toks = detail::tokenize(raw);
    if (toks.empty()) continue;

    if (stage == 0) {
      if (toks.size() != 2 || toks[0] != "alphabet")
        throw SyntaxError("line " + std::to_string(line_no) + ": expected 'alphabet <n>'");
      alphabet = detail::parse_int(toks[1], line_no);
      if (alphabet < 1)
        throw SyntaxError("line " + std::to_string(line_no) + ": alphabet size must be positive");
      stage = 1;
      continue;
    }

    if (stage == 1) {
      if (toks.size() < 2 || toks[0] != "states")
        throw SyntaxError("line " + std::to_string(line_no) + ": expected 'states <label>...'");
      for (size_t i = 1; i < toks.size(); ++i) {
        if (index.count(toks[i]))
          throw DuplicateState("line " + std::to_string(line_no) + ": state '" + toks[i] +
                               "' declared twice");
        index.emplace(toks[i], static_cast<int>(labels.size()));
        labels.push_back(toks[i]);
      }
      builder.emplace(alphabet, labels);
      stage = 2;
      continue;
    }

    if (toks.size() != 4)
      throw SyntaxError("line " + std::to_string(line_no) +
                        ": expected '<state> <in> <out> <next>'");
    auto from = index.find(toks[0]);
    if (from == index.end())
      throw SyntaxError("line " + std::to_string(line_no) + ": unknown state '" + toks[0] + "'");
    const int in_letter = detail::parse_int(toks[1], line_no);
    const int out_letter = detail::parse_int(toks[2], line_no);
    if (in_letter < 0 || in_letter >= alphabet)
      throw LetterOutOfRange("line " + std::to_string(line_no) + ": input letter " +
                             toks[1] + " outside alphabet of size " + std::to_string(alphabet));
    if (out_letter < 0 || out_letter >= alphabet)
      throw LetterOutOfRange("line " + std::to_string(line_no) + ": output letter " +
                             toks[2] + " outside alphabet of size " + std::to_string(alphabet));
    auto to = index.find(toks[3]);
    if (to == index.end())
      throw SyntaxError("line " + std::to_string(line_no) + ": unknown state '" + toks[3] + "'");
    if (builder->has(from->second, in_letter))
      throw SyntaxError("line " + std::to_string(line_no) + ": duplicate transition for state '" +
                        toks[0] + "' on letter " + toks[1]);
    builder->add(from->second, in_letter, out_letter, to->second);
  }

  if (stage == 0) throw SyntaxError("empty machine description");
  if (stage == 1) throw SyntaxError("machine description ends before any state line");
  return builder->build();
}

// Canonical text form; parse(serialize(t)) == t exactly, labels included.
inline std::string serialize(const Transducer& t) {
  std::ostringstream os;
  os << "alphabet " << t.alphabet_size() << "\n";
  os << "states";
  for (const auto& l : t.labels()) os << ' ' << l;
  os << "\n";
  for (int q = 0; q < t.num_states(); ++q)
    for (int x = 0; x < t.alphabet_size(); ++x)
      os << t.label(q) << ' ' << x << ' ' << t.out(x, q) << ' ' << t.label(t.next(x, q)) << "\n";
  return os.str();
}

// Reads a word from the given state; returns the final state and the output
// word. The empty word leaves the state unchanged and emits nothing.
inline std::pair<int, Word> read_word(const Transducer& t, int state, const Word& w) {
  if (state < 0 || state >= t.num_states())
    throw UnknownState("read_word: state index " + std::to_string(state) + " out of range");
  Word produced;
  produced.reserve(w.size());
  int q = state;
  for (int x : w) {
    produced.push_back(t.out(x, q));
    q = t.next(x, q);
  }
  return {q, produced};
}

// True when every state's single-letter output map is a permutation of the
// alphabet, i.e. the machine has an automaton-theoretic inverse.
inline bool is_invertible(const Transducer& t) {
  std::vector<char> hit(t.alphabet_size());
  for (int q = 0; q < t.num_states(); ++q) {
    std::fill(hit.begin(), hit.end(), 0);
    for (int x = 0; x < t.alphabet_size(); ++x) {
      int y = t.out(x, q);
      if (hit[y]) return false;
      hit[y] = 1;
    }
  }
  return true;
}

// Automaton-theoretic inverse: each edge q -x|y-> p becomes q' -y|x-> p'.
inline Transducer invert(const Transducer& t) {
  if (!is_invertible(t))
    throw NotInvertible("invert: some state's output row is not a permutation");
  const int n = t.alphabet_size();
  std::vector<std::string> labels;
  labels.reserve(t.num_states());
  for (const auto& l : t.labels()) labels.push_back(l + "^-1");
  std::vector<int> next(static_cast<size_t>(n) * t.num_states());
  std::vector<int> out(static_cast<size_t>(n) * t.num_states());
  for (int q = 0; q < t.num_states(); ++q)
    for (int x = 0; x < n; ++x) {
      const int y = t.out(x, q);
      next[static_cast<size_t>(q) * n + y] = t.next(x, q);
      out[static_cast<size_t>(q) * n + y] = x;
    }
  return Transducer(n, std::move(labels), std::move(next), std::move(out));
}

// Dual machine: states and letters swap roles. The dual has one state per
// letter of t and one letter per state of t; reading "letter" q from dual
// state x lands in state lambda(x, q) and emits the index of pi(x, q).
inline Transducer dual(const Transducer& t) {
  const int n = t.alphabet_size();
  const int s = t.num_states();
  std::vector<std::string> labels;
  labels.reserve(n);
  for (int x = 0; x < n; ++x) labels.push_back(std::to_string(x));
  std::vector<int> next(static_cast<size_t>(s) * n);
  std::vector<int> out(static_cast<size_t>(s) * n);
  for (int x = 0; x < n; ++x)
    for (int q = 0; q < s; ++q) {
      next[static_cast<size_t>(x) * s + q] = t.out(x, q);
      out[static_cast<size_t>(x) * s + q] = t.next(x, q);
    }
  return Transducer(s, std::move(labels), std::move(next), std::move(out));
}

// 64-bit FNV-1a over the canonical text; used to fingerprint machine inputs
// in reports.
inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string digest(const Transducer& t) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(serialize(t))));
  return std::string(buf, 16);
}

}  // namespace synchro
