#ifndef DADMM_ERRORS_HPP
#define DADMM_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dadmm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TopologyError : public Error {
 public:
  using Error::Error;
};

/// Raised when the edge set does not span all nodes; carries one unreached node.
class ConnectivityError : public TopologyError {
 public:
  ConnectivityError(std::size_t unreached, const std::string& what)
      : TopologyError(what), unreached_(unreached) {}
  std::size_t unreached() const noexcept { return unreached_; }

 private:
  std::size_t unreached_;
};

class SpectralGapError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class SubproblemError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t round, std::size_t agent, const std::string& what)
      : Error(what), round_(round), agent_(agent) {}
  std::size_t round() const noexcept { return round_; }
  std::size_t agent() const noexcept { return agent_; }

 private:
  std::size_t round_;
  std::size_t agent_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dadmm

#endif  // DADMM_ERRORS_HPP
