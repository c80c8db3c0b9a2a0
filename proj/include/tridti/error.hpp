//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <stdexcept>
#include <string>

namespace tridti {

// Every error raised by the library derives from Error. The kind string is
// stable and is used by the CLI to build its one-line diagnostics.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string &what)
      : std::runtime_error(what), kind_(std::move(kind)) { }

  const std::string &kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

class ParseError : public Error {
public:
  explicit ParseError(const std::string &what) : Error("parse", what) { }
};

class IntegrityError : public Error {
public:
  explicit IntegrityError(const std::string &what)
      : Error("integrity", what) { }
};

// Unparseable SMILES. Carries the offending string.
class ChemistryError : public Error {
public:
  ChemistryError(const std::string &what, std::string smiles)
      : Error("chemistry", what + ": '" + smiles + "'"),
        smiles_(std::move(smiles)) { }

  const std::string &smiles() const noexcept { return smiles_; }

private:
  std::string smiles_;
};

class DimensionError : public Error {
public:
  explicit DimensionError(const std::string &what)
      : Error("dimension", what) { }
};

class BoundsError : public Error {
public:
  explicit BoundsError(const std::string &what) : Error("bounds", what) { }
};

class ValueError : public Error {
public:
  explicit ValueError(const std::string &what) : Error("value", what) { }
};

class TrainingError : public Error {
public:
  explicit TrainingError(const std::string &what)
      : Error("training", what) { }
};

class UsageError : public Error {
public:
  explicit UsageError(const std::string &what) : Error("usage", what) { }
};

} // namespace tridti
