#include "asymwave/params.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "asymwave/errors.hpp"

namespace asymwave {

ParameterVector::ParameterVector(std::vector<std::string> names,
                                 std::vector<double> values)
    : names_(std::move(names)), values_(std::move(values)) {
  if (names_.size() != values_.size())
    throw Error(ErrorKind::InvalidArgument,
                "parameter names and values differ in length");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    // depth may be +inf; everything else finite
    if (!(values_[i] > 0.0) || std::isnan(values_[i]))
      throw Error(ErrorKind::Domain,
                  fmt::format("parameter {} must be positive, got {}",
                              names_[i], values_[i]));
  }
}

std::size_t ParameterVector::index_of(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end())
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("unknown parameter '{}'", name));
  return static_cast<std::size_t>(it - names_.begin());
}

bool ParameterVector::has(std::string_view name) const noexcept {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

double ParameterVector::operator[](std::string_view name) const {
  return values_[index_of(name)];
}

ParameterVector ParameterVector::with(std::string_view name,
                                      double value) const {
  return with(index_of(name), value);
}

ParameterVector ParameterVector::with(std::size_t i, double value) const {
  auto values = values_;
  values.at(i) = value;
  return ParameterVector(names_, std::move(values));
}

}  // namespace asymwave
