#pragma once

#include "errors.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

namespace spmnl {

//! Number of categories and which one is the reference.
//!
//! Categories are 0-based. Coefficient matrices store one row per
//! non-reference category, in increasing category order; the reference
//! row is implicitly zero and never materialised.
struct ModelSpec
{
  int categories = 2;
  int reference = 1;

  static ModelSpec with_last_reference(int categories)
  {
    return ModelSpec{ categories, categories - 1 };
  }

  int free_count() const { return categories - 1; }

  //! Category stored in coefficient row `row`.
  int category_of_row(int row) const { return row < reference ? row : row + 1; }

  //! Coefficient row of `category`, -1 for the reference.
  int row_of_category(int category) const
  {
    if (category == reference)
      return -1;
    return category < reference ? category : category - 1;
  }

  void validate() const
  {
    if (categories < 2)
      throw config_error("model needs at least two categories");
    if (reference < 0 || reference >= categories)
      throw config_error("reference category out of range");
  }
};

//! n observations of (y_i, x_i, t_i).
//!
//! `x` holds the parametric covariates (n x p), `t` the smooth ones (n x q).
//! Either block may have zero columns.
struct Dataset
{
  std::vector<int> y;
  Eigen::MatrixXd x;
  Eigen::MatrixXd t;
  int categories = 0;

  Eigen::Index size() const { return static_cast<Eigen::Index>(y.size()); }
  Eigen::Index p() const { return x.cols(); }
  Eigen::Index q() const { return t.cols(); }

  std::vector<Eigen::Index> category_counts() const
  {
    std::vector<Eigen::Index> counts(static_cast<size_t>(categories), 0);
    for (int c : y)
      ++counts[static_cast<size_t>(c)];
    return counts;
  }
};

//! Checks shapes, category range and finiteness once, at ingestion.
inline void
validate(const Dataset& data)
{
  const auto n = data.size();
  if (data.categories < 2)
    throw config_error("dataset needs at least two categories");
  if (data.x.rows() != n || data.t.rows() != n)
    throw shape_error("covariate blocks must have one row per response");
  for (int c : data.y) {
    if (c < 0 || c >= data.categories)
      throw config_error("response category out of range");
  }
  if (!data.x.allFinite() || !data.t.allFinite())
    throw shape_error("covariates must be finite");
}

//! Observations whose response is not `dropped`, with categories renumbered
//! so the remaining K-1 categories are contiguous.
inline Dataset
drop_category(const Dataset& data, int dropped)
{
  Dataset out;
  out.categories = data.categories - 1;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    if (data.y[static_cast<size_t>(i)] != dropped)
      keep.push_back(i);
  }
  out.x.resize(static_cast<Eigen::Index>(keep.size()), data.p());
  out.t.resize(static_cast<Eigen::Index>(keep.size()), data.q());
  for (size_t r = 0; r < keep.size(); ++r) {
    const auto i = keep[r];
    const int c = data.y[static_cast<size_t>(i)];
    out.y.push_back(c < dropped ? c : c - 1);
    out.x.row(static_cast<Eigen::Index>(r)) = data.x.row(i);
    out.t.row(static_cast<Eigen::Index>(r)) = data.t.row(i);
  }
  return out;
}

//! Rows selected by `rows`, in the given order.
inline Dataset
subset_rows(const Dataset& data, const std::vector<Eigen::Index>& rows)
{
  Dataset out;
  out.categories = data.categories;
  out.x.resize(static_cast<Eigen::Index>(rows.size()), data.p());
  out.t.resize(static_cast<Eigen::Index>(rows.size()), data.q());
  for (size_t r = 0; r < rows.size(); ++r) {
    out.y.push_back(data.y[static_cast<size_t>(rows[r])]);
    out.x.row(static_cast<Eigen::Index>(r)) = data.x.row(rows[r]);
    out.t.row(static_cast<Eigen::Index>(r)) = data.t.row(rows[r]);
  }
  return out;
}

//! Treats every covariate as parametric: x <- [x, t], t <- empty.
inline Dataset
all_parametric(const Dataset& data)
{
  Dataset out;
  out.y = data.y;
  out.categories = data.categories;
  out.x.resize(data.size(), data.p() + data.q());
  out.x.leftCols(data.p()) = data.x;
  out.x.rightCols(data.q()) = data.t;
  out.t.resize(data.size(), 0);
  return out;
}

} // namespace spmnl
