#pragma once

#include <string>
#include <vector>

#include "synchro/errors.hpp"
#include "synchro/word.hpp"

namespace synchro {

// One period of a bi-infinite periodic sequence of letters. The stored cycle
// is reduced to its primitive period on construction; two values compare
// equal when one cycle is a rotation of the other (and hence, before
// reduction, a rotation of a repetition).
class PeriodicWord {
 public:
  explicit PeriodicWord(Word cycle) : letters_(std::move(cycle)) {
    if (letters_.empty()) throw Error("PeriodicWord: cycle must be nonempty");
    for (int x : letters_)
      if (x < 0) throw LetterOutOfRange("PeriodicWord: negative letter");
    reduce();
  }

  const Word& letters() const { return letters_; }
  int period() const { return static_cast<int>(letters_.size()); }

  // The same sequence read from one position later.
  PeriodicWord rotated() const {
    Word r(letters_.begin() + 1, letters_.end());
    r.push_back(letters_.front());
    return PeriodicWord(std::move(r));
  }

  std::string to_string(int alphabet_size = 10) const {
    return word_to_string(letters_, alphabet_size);
  }

  friend bool operator==(const PeriodicWord& a, const PeriodicWord& b) {
    if (a.period() != b.period()) return false;
    Word doubled = a.letters_;
    doubled.insert(doubled.end(), a.letters_.begin(), a.letters_.end());
    for (int r = 0; r < a.period(); ++r) {
      bool match = true;
      for (int i = 0; i < b.period() && match; ++i)
        match = doubled[r + i] == b.letters_[i];
      if (match) return true;
    }
    return false;
  }

  friend bool operator!=(const PeriodicWord& a, const PeriodicWord& b) {
    return !(a == b);
  }

 private:
  void reduce() {
    const int p = static_cast<int>(letters_.size());
    for (int d = 1; d < p; ++d) {
      if (p % d != 0) continue;
      bool periodic = true;
      for (int i = d; i < p && periodic; ++i) periodic = letters_[i] == letters_[i % d];
      if (periodic) {
        letters_.resize(d);
        return;
      }
    }
  }

  Word letters_;
};

}  // namespace synchro
