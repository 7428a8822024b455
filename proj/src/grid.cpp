#include "rotasym/grid.hpp"

#include <string>

#include "rotasym/errors.hpp"

namespace rotasym {

Grid::Grid(int nh, int n3) : nh_(nh), n3_(n3) {
  if (nh < 8 || n3 < 8 || nh % 2 || n3 % 2)
    throw InvalidInput("grid dimensions must be even and >= 8, got " + std::to_string(nh) + "x" +
                       std::to_string(nh) + "x" + std::to_string(n3));
}

}  // namespace rotasym
