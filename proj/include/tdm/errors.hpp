#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tdm {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// road_graph

class MalformedFile : public Error {
public:
  using Error::Error;
};

class InvalidSegment : public Error {
public:
  using Error::Error;
};

class DegreeViolation : public Error {
public:
  DegreeViolation(std::string vertex, const std::string& what)
      : Error(what), vertex_(std::move(vertex)) {}
  const std::string& vertex() const noexcept { return vertex_; }

private:
  std::string vertex_;
};

class NoPath : public Error {
public:
  using Error::Error;
};

// metric

/// Raised when neither direction between two vertices is reachable.
class DisconnectedPair : public Error {
public:
  DisconnectedPair(std::size_t i, std::size_t j)
      : Error("no path in either direction between vertices " + std::to_string(i) +
              " and " + std::to_string(j)),
        i_(i), j_(j) {}
  std::size_t i() const noexcept { return i_; }
  std::size_t j() const noexcept { return j_; }

private:
  std::size_t i_, j_;
};

class ZeroDistance : public Error {
public:
  ZeroDistance(std::size_t i, std::size_t j)
      : Error("zero distance between distinct vertices " + std::to_string(i) + " and " +
              std::to_string(j)),
        i_(i), j_(j) {}
  std::size_t i() const noexcept { return i_; }
  std::size_t j() const noexcept { return j_; }

private:
  std::size_t i_, j_;
};

// embedding

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class CoincidentPoints : public Error {
public:
  CoincidentPoints(std::size_t i, std::size_t j)
      : Error("points " + std::to_string(i) + " and " + std::to_string(j) + " coincide"),
        i_(i), j_(j) {}
  std::size_t i() const noexcept { return i_; }
  std::size_t j() const noexcept { return j_; }

private:
  std::size_t i_, j_;
};

class IndexOutOfRange : public Error {
public:
  using Error::Error;
};

// optimizers

class InvalidSchedule : public Error {
public:
  using Error::Error;
};

class TooFewRuns : public Error {
public:
  using Error::Error;
};

// kspace

class DomainViolation : public Error {
public:
  using Error::Error;
};

class DegenerateDenominator : public Error {
public:
  using Error::Error;
};

// rendering

class IdMismatch : public Error {
public:
  using Error::Error;
};

} // namespace tdm
