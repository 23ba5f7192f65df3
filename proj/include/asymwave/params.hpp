#pragma once

#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace asymwave {

/// Named, strictly positive model parameters in a fixed model-defined order.
class ParameterVector {
 public:
  ParameterVector() = default;
  ParameterVector(std::vector<std::string> names, std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::span<const double> values() const noexcept { return values_; }

  double operator[](std::size_t i) const { return values_.at(i); }
  double operator[](std::string_view name) const;
  bool has(std::string_view name) const noexcept;
  std::size_t index_of(std::string_view name) const;

  /// Copy with one entry replaced.
  ParameterVector with(std::string_view name, double value) const;
  ParameterVector with(std::size_t i, double value) const;

  bool operator==(const ParameterVector&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<double> values_;
};

/// Parameters held fixed while the kernel parameters are solved for.
using FixedParams = std::map<std::string, double, std::less<>>;

}  // namespace asymwave
