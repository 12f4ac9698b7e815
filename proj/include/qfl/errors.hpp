// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace qfl {

/// Root of every error thrown by the library. The CLI maps subclasses onto
/// process exit codes, so keep the hierarchy flat.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define QFL_DEFINE_ERROR(Name)            \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

// fhe
QFL_DEFINE_ERROR(ParameterError);
QFL_DEFINE_ERROR(CapacityError);
QFL_DEFINE_ERROR(DomainError);
QFL_DEFINE_ERROR(LevelError);
QFL_DEFINE_ERROR(AlignmentError);
QFL_DEFINE_ERROR(KeyError);
QFL_DEFINE_ERROR(FormatError);

// qsim / model
QFL_DEFINE_ERROR(ShapeError);

// data / cli
QFL_DEFINE_ERROR(ConfigError);
QFL_DEFINE_ERROR(IngestionError);
QFL_DEFINE_ERROR(IoError);

// federation
QFL_DEFINE_ERROR(ProtocolError);

#undef QFL_DEFINE_ERROR

}  // namespace qfl
