#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace symtdd {

using Complex = std::complex<double>;

// Snaps complex values to shared representatives so that values within
// epsilon of each other compare (and hash) bit-identically. Representatives
// are pairwise more than epsilon apart; anything within epsilon of zero
// becomes exactly zero.
class ComplexTable {
 public:
  explicit ComplexTable(double epsilon);

  Complex canonical(Complex value);

  double epsilon() const { return epsilon_; }
  std::size_t size() const { return size_; }

 private:
  struct CellHash {
    std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& cell) const;
  };

  std::pair<std::int64_t, std::int64_t> cell_of(Complex value) const;

  double epsilon_;
  double grid_;
  std::size_t size_ = 0;
  std::unordered_map<std::pair<std::int64_t, std::int64_t>, std::vector<Complex>, CellHash> cells_;
};

}  // namespace symtdd
