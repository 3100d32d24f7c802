#include "symtdd/complex_table.hpp"

#include <cmath>
#include <stdexcept>

#include "symtdd/hashing.hpp"

namespace symtdd {

ComplexTable::ComplexTable(double epsilon) : epsilon_(epsilon), grid_(10.0 * epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be a positive finite number");
  }
  for (Complex unit : {Complex{1, 0}, Complex{-1, 0}, Complex{0, 1}, Complex{0, -1}}) {
    canonical(unit);
  }
}

std::size_t ComplexTable::CellHash::operator()(const std::pair<std::int64_t, std::int64_t>& cell) const {
  return detail::hash_mix(detail::hash_mix(0, static_cast<std::uint64_t>(cell.first)),
                          static_cast<std::uint64_t>(cell.second));
}

std::pair<std::int64_t, std::int64_t> ComplexTable::cell_of(Complex value) const {
  return {static_cast<std::int64_t>(std::floor(value.real() / grid_)),
          static_cast<std::int64_t>(std::floor(value.imag() / grid_))};
}

Complex ComplexTable::canonical(Complex value) {
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw std::domain_error("non-finite complex value");
  }
  if (std::abs(value) <= epsilon_) {
    return {0.0, 0.0};
  }
  const auto [cx, cy] = cell_of(value);
  const Complex* best = nullptr;
  double best_distance = epsilon_;
  for (std::int64_t dx = -1; dx <= 1; ++dx) {
    for (std::int64_t dy = -1; dy <= 1; ++dy) {
      auto it = cells_.find({cx + dx, cy + dy});
      if (it == cells_.end()) {
        continue;
      }
      for (const Complex& candidate : it->second) {
        const double distance = std::abs(candidate - value);
        if (distance <= best_distance) {
          best_distance = distance;
          best = &candidate;
        }
      }
    }
  }
  if (best != nullptr) {
    return *best;
  }
  // Strip negative zeros so bitwise hashing is stable.
  const Complex stored{value.real() + 0.0, value.imag() + 0.0};
  cells_[{cx, cy}].push_back(stored);
  ++size_;
  return stored;
}

}  // namespace symtdd
