#include "pppm/grid.hpp"

namespace pppm {

double Grid3::sum() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

Grid3 &Grid3::operator+=(const Grid3 &other) {
  if (!(other.dims_ == dims_)) throw InvalidInput("cannot add grids of different dimensions");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

} // namespace pppm
