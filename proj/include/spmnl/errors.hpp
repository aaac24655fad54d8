#pragma once

#include <stdexcept>
#include <string>

namespace spmnl {

//! Base class of every error raised by the library.
class error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! Non-finite or malformed linear predictor.
class invalid_predictor : public error
{
public:
  using error::error;
};

//! Dimension mismatch between arguments.
class shape_error : public error
{
public:
  using error::error;
};

//! Invalid configuration value (bandwidth, range, option).
class config_error : public error
{
public:
  using error::error;
};

//! Covariate column without variation.
class degenerate_covariate : public error
{
public:
  degenerate_covariate(std::string column, const std::string& what)
    : error(what)
    , column_(std::move(column))
  {}
  const std::string& column() const noexcept { return column_; }

private:
  std::string column_;
};

//! Not enough data to estimate the requested model.
class insufficient_data : public error
{
public:
  using error::error;
};

//! Information matrix singular or ill-conditioned.
class non_identified : public error
{
public:
  non_identified(const std::string& what, double rcond)
    : error(what)
    , rcond_(rcond)
  {}
  double rcond() const noexcept { return rcond_; }

private:
  double rcond_;
};

class numerical_failure : public error
{
public:
  using error::error;
};

//! All kernel weights at a query point underflowed to zero.
class no_local_data : public error
{
public:
  using error::error;
};

//! One-sided local likelihood: the first order condition has no root.
class separation_error : public error
{
public:
  using error::error;
};

//! Test-only oracle exhausted its budget.
class oracle_failure : public error
{
public:
  using error::error;
};

class empty_dataset : public error
{
public:
  using error::error;
};

} // namespace spmnl
