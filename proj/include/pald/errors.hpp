#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pald {

/// Malformed or out-of-range input (bad ids, bad sizes, unparsable CSV).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The comparison oracle broke one of its axioms. Carries the witness triple.
class AxiomViolation : public std::runtime_error {
 public:
  AxiomViolation(std::string axiom, std::uint32_t x, std::uint32_t y, std::uint32_t z);

  const std::string& axiom() const noexcept { return axiom_; }
  std::uint32_t base() const noexcept { return x_; }
  std::uint32_t first() const noexcept { return y_; }
  std::uint32_t second() const noexcept { return z_; }

 private:
  std::string axiom_;
  std::uint32_t x_, y_, z_;
};

/// Internal data disagree with each other (e.g. a rank table missing a neighbor).
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A value was requested where the sparse cohesion matrix is undefined.
class DomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A vertex of the promoted graph has degree above the configured cap.
class DegreeCapExceeded : public std::runtime_error {
 public:
  DegreeCapExceeded(std::size_t cap, std::vector<std::uint32_t> vertices,
                    std::vector<std::size_t> degrees);

  std::size_t cap() const noexcept { return cap_; }
  const std::vector<std::uint32_t>& vertices() const noexcept { return vertices_; }
  const std::vector<std::size_t>& degrees() const noexcept { return degrees_; }

 private:
  std::size_t cap_;
  std::vector<std::uint32_t> vertices_;
  std::vector<std::size_t> degrees_;
};

/// A run exceeded one of its declared operation budgets.
class BudgetExceeded : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace pald
