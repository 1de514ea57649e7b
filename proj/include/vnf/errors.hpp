#ifndef VNF_ERRORS_HPP
#define VNF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vnf {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-contract input (wrong shape, bad multiplicities, ...).
struct InvalidInput : Error {
  using Error::Error;
};

// A vector expected to be cyclic and separating is numerically singular.
struct NotInvertible : Error {
  using Error::Error;
};

// A superoperator is not of the left-times-right multiplication form.
struct NotAModularShape : Error {
  using Error::Error;
};

// Two operators have incompatible spectra; no intertwiner exists.
struct NotIntertwinable : Error {
  using Error::Error;
};

// A stated hypothesis fails beyond tolerance; message carries the residual.
struct PreconditionFailed : Error {
  using Error::Error;
};

// A constructive routine produced an object that fails its own contract.
struct ConstructionFailed : Error {
  using Error::Error;
};

}  // namespace vnf

#endif  // VNF_ERRORS_HPP
