#pragma once

#include <stdexcept>
#include <string>

namespace bearloc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CollocatedNodes : public Error {
 public:
  using Error::Error;
};

class CollocatedEstimates : public Error {
 public:
  using Error::Error;
};

class ZeroVector : public Error {
 public:
  using Error::Error;
};

class NotUnit : public Error {
 public:
  using Error::Error;
};

class AsymmetricInput : public Error {
 public:
  using Error::Error;
};

// The Laplacian- and rigidity-matrix-based ranks must agree; a mismatch is a
// tolerance failure that the caller has to see.
class RankDisagreement : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class SingularPerturbedSystem : public Error {
 public:
  using Error::Error;
};

class StepTooLarge : public Error {
 public:
  using Error::Error;
};

class TooFewAnchors : public Error {
 public:
  using Error::Error;
};

class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

}  // namespace bearloc
