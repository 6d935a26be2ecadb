#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "acnet/error.hpp"
#include "acnet/ingest.hpp"

namespace acnet::features {

/// Per-year banks x variables matrix of values divided by total assets.
/// Missing fields are stored as 0 with a false presence flag. The size
/// proxy is not a column; its raw value is kept in `total_assets`.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(int year, std::vector<std::string> bank_ids, std::vector<std::string> variable_codes);

  int year() const { return year_; }
  const std::vector<std::string>& bank_ids() const { return bank_ids_; }
  const std::vector<std::string>& variable_codes() const { return variable_codes_; }
  std::size_t rows() const { return bank_ids_.size(); }
  std::size_t cols() const { return variable_codes_.size(); }

  double& at(std::size_t i, std::size_t j) { return values_[i * cols() + j]; }
  double at(std::size_t i, std::size_t j) const { return values_[i * cols() + j]; }
  bool present(std::size_t i, std::size_t j) const { return mask_[i * cols() + j] != 0; }
  void set_present(std::size_t i, std::size_t j, bool flag) { mask_[i * cols() + j] = flag ? 1 : 0; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols(), cols()};
  }

  std::vector<double> total_assets;  // raw size proxy per row
  std::vector<std::string> countries;

 private:
  int year_ = 0;
  std::vector<std::string> bank_ids_;
  std::vector<std::string> variable_codes_;
  std::vector<double> values_;
  std::vector<unsigned char> mask_;
};

/// Builds the matrix of `year` from banks with a statement that year.
/// Bank-years with missing or non-positive total assets, and banks whose
/// normalized row is entirely zero, are excluded with a warning. Columns are
/// the sorted union of codes observed that year, without the size proxy.
FeatureMatrix build_feature_matrix(const std::vector<ingest::BankPanel>& panels, int year,
                                   const std::string& size_proxy_code, Warnings& warnings);

/// Codes observed in at least `presence_fraction` of all bank-years.
std::set<std::string> popular_variables(const std::vector<FeatureMatrix>& matrices,
                                        double presence_fraction);

/// bank_id followed by one column per variable code.
std::string matrix_to_csv(const FeatureMatrix& matrix);

}  // namespace acnet::features
