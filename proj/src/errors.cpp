#include "pald/errors.hpp"

#include <algorithm>
#include <sstream>

namespace pald {

namespace {

std::string axiom_message(const std::string& axiom, std::uint32_t x, std::uint32_t y,
                          std::uint32_t z) {
  std::ostringstream os;
  os << axiom << " violated at compare(" << x << "; " << y << ", " << z << ")";
  return os.str();
}

std::string cap_message(std::size_t cap, const std::vector<std::uint32_t>& vertices,
                        const std::vector<std::size_t>& degrees) {
  std::ostringstream os;
  os << "promoted degree cap " << cap << " exceeded by " << vertices.size() << " vertex(es):";
  const std::size_t shown = std::min<std::size_t>(vertices.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    os << ' ' << vertices[i] << " (degree " << degrees[i] << ')';
  }
  if (shown < vertices.size()) os << " ...";
  os << "; hub-dominated neighbor graphs make the promoted pass quadratic";
  return os.str();
}

}  // namespace

AxiomViolation::AxiomViolation(std::string axiom, std::uint32_t x, std::uint32_t y,
                               std::uint32_t z)
    : std::runtime_error(axiom_message(axiom, x, y, z)),
      axiom_(std::move(axiom)),
      x_(x),
      y_(y),
      z_(z) {}

DegreeCapExceeded::DegreeCapExceeded(std::size_t cap, std::vector<std::uint32_t> vertices,
                                     std::vector<std::size_t> degrees)
    : std::runtime_error(cap_message(cap, vertices, degrees)),
      cap_(cap),
      vertices_(std::move(vertices)),
      degrees_(std::move(degrees)) {}

}  // namespace pald
