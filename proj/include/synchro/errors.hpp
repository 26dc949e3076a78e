#pragma once

#include <stdexcept>
#include <string>

namespace synchro {

// Base of every error thrown by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// .tdx text that does not follow the line grammar.
struct SyntaxError : Error {
  using Error::Error;
};

// A (state, letter) pair has no transition row.
struct MissingTransition : Error {
  using Error::Error;
};

// A letter lies outside [0, alphabet_size).
struct LetterOutOfRange : Error {
  using Error::Error;
};

// A state label is declared more than once.
struct DuplicateState : Error {
  using Error::Error;
};

// A state label or index does not exist in the machine.
struct UnknownState : Error {
  using Error::Error;
};

// Some state's single-letter output map is not a permutation.
struct NotInvertible : Error {
  using Error::Error;
};

// The machine never forces its state, at any word length.
struct NotSynchronizing : Error {
  using Error::Error;
};

// The machine synchronizes, but only above the requested level.
struct NotSynchronizingAtLevel : Error {
  using Error::Error;
};

// The machine has states outside its core.
struct NotCore : Error {
  using Error::Error;
};

// Two machines over different alphabets were combined.
struct AlphabetMismatch : Error {
  using Error::Error;
};

// A raw power would exceed the configured state budget.
struct CapExceeded : Error {
  using Error::Error;
};

// A growth series is too short to classify.
struct TooFewRecords : Error {
  using Error::Error;
};

// Rejection sampling hit its retry budget without a hit.
struct RequirementUnsatisfiable : Error {
  using Error::Error;
};

// No catalog entry under that name.
struct UnknownName : Error {
  using Error::Error;
};

}  // namespace synchro
