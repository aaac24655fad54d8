#pragma once

#include "dataset.hpp"
#include "errors.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace spmnl {

//! File could not be read or written.
class io_error : public error
{
public:
  using error::error;
};

//! Shortest text with 17 significant digits; parses back to the same double.
inline std::string
format_double(double v)
{
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline std::optional<double>
parse_double(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
    s.remove_suffix(1);
  if (!s.empty() && s.front() == '+')
    s.remove_prefix(1);
  if (s.empty())
    return std::nullopt;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    return std::nullopt;
  return v;
}

//! 64-bit FNV-1a.
inline std::uint64_t
fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL)
{
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string
hex64(std::uint64_t v)
{
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4)
    s[static_cast<size_t>(i)] = digits[v & 0xF];
  return s;
}

//! Fingerprint of a dataset's contents (labels excluded).
inline std::string
dataset_fingerprint(const Dataset& data)
{
  std::uint64_t h = fnv1a({});
  auto mix = [&h](const void* p, size_t bytes) {
    h = fnv1a(std::string_view(static_cast<const char*>(p), bytes), h);
  };
  const std::int64_t dims[4] = { data.size(), data.p(), data.q(), data.categories };
  mix(dims, sizeof dims);
  for (int y : data.y) {
    const std::int32_t v = y;
    mix(&v, sizeof v);
  }
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    for (Eigen::Index d = 0; d < data.p(); ++d) {
      const double v = data.x(i, d);
      mix(&v, sizeof v);
    }
    for (Eigen::Index d = 0; d < data.q(); ++d) {
      const double v = data.t(i, d);
      mix(&v, sizeof v);
    }
  }
  return hex64(h);
}

inline std::string
read_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw io_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void
write_file(const std::filesystem::path& path, const std::string& contents)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw io_error("cannot write '" + path.string() + "'");
  out << contents;
  if (!out)
    throw io_error("write to '" + path.string() + "' failed");
}

struct CsvTable
{
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

//! Comma separated text with an optional double-quote convention; blank
//! lines are skipped.
inline CsvTable
parse_csv(std::string_view text)
{
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF")
    text.remove_prefix(3);
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any = false;
  auto end_record = [&] {
    if (any || !field.empty() || !record.empty()) {
      record.push_back(std::move(field));
      records.push_back(std::move(record));
    }
    record.clear();
    field.clear();
    any = false;
  };
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n') {
      end_record();
    } else if (c == '\r') {
      if (i + 1 < text.size() && text[i + 1] == '\n')
        continue;
      end_record();
    } else {
      field.push_back(c);
    }
  }
  if (quoted)
    throw io_error("unterminated quoted field");
  end_record();

  CsvTable table;
  if (records.empty())
    throw io_error("missing header row");
  table.header = std::move(records.front());
  table.rows.assign(std::make_move_iterator(records.begin() + 1), std::make_move_iterator(records.end()));
  return table;
}

inline std::string
csv_field(std::string_view s)
{
  if (s.find_first_of(",\"\n\r") == std::string_view::npos)
    return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"')
      out += '"';
    out += c;
  }
  out += '"';
  return out;
}

//! Builds CSV text in memory.
class CsvWriter
{
public:
  explicit CsvWriter(const std::vector<std::string>& header) { row(header); }

  CsvWriter& cell(std::string_view s)
  {
    sep();
    text_ += csv_field(s);
    return *this;
  }
  CsvWriter& cell(double v)
  {
    sep();
    text_ += format_double(v);
    return *this;
  }
  CsvWriter& cell(long long v)
  {
    sep();
    text_ += std::to_string(v);
    return *this;
  }
  CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(Eigen::Index v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(bool v) { return cell(std::string_view(v ? "true" : "false")); }
  CsvWriter& cell(const char* s) { return cell(std::string_view(s)); }
  CsvWriter& cell(const std::string& s) { return cell(std::string_view(s)); }

  void end()
  {
    text_ += '\n';
    fresh_ = true;
  }

  void row(const std::vector<std::string>& cells)
  {
    for (const auto& c : cells)
      cell(c);
    end();
  }

  const std::string& str() const { return text_; }

private:
  void sep()
  {
    if (!fresh_)
      text_ += ',';
    fresh_ = false;
  }

  std::string text_;
  bool fresh_ = true;
};

//! Per-column preprocessing. Value transforms apply in order; a square
//! augmentation adds a column named "<name>^2" holding the square of the
//! transformed value.
struct ColumnTransform
{
  enum class Kind
  {
    none,
    log,
    divide,
    square
  };
  Kind kind = Kind::none;
  double divisor = 1.0;

  static ColumnTransform parse(std::string_view s)
  {
    if (s == "none")
      return {};
    if (s == "log")
      return { Kind::log, 1.0 };
    if (s == "square")
      return { Kind::square, 1.0 };
    if (s.substr(0, 7) == "divide:") {
      const auto c = parse_double(s.substr(7));
      if (!c || !std::isfinite(*c) || *c == 0.0)
        throw config_error("divide transform needs a finite nonzero constant: '" + std::string(s) + "'");
      return { Kind::divide, *c };
    }
    throw config_error("unknown transform '" + std::string(s) + "'");
  }

  std::string to_string() const
  {
    switch (kind) {
      case Kind::none:
        return "none";
      case Kind::log:
        return "log";
      case Kind::square:
        return "square";
      case Kind::divide:
        return "divide:" + format_double(divisor);
    }
    return "none";
  }
};

struct IngestConfig
{
  std::string response;
  std::vector<std::string> parametric;
  std::vector<std::string> smooth;
  std::map<std::string, std::vector<ColumnTransform>> transforms;
  std::map<std::string, double> impute; //!< value used where the field is missing
  std::vector<std::string> categories;  //!< fixed label order; empty = first appearance
  std::string reference;                //!< label; empty = last category
};

struct LoadedData
{
  Dataset data;
  std::vector<std::string> labels; //!< category index -> label
  int reference = 0;
  std::vector<std::string> x_names; //!< after square augmentation
  std::vector<std::string> t_names;
  Eigen::Index rows_in = 0;
  Eigen::Index rows_used = 0;
  std::map<std::string, Eigen::Index> drop_reasons;
  std::map<std::string, Eigen::Index> imputed;

  ModelSpec spec() const { return ModelSpec{ data.categories, reference }; }
  Eigen::Index rows_dropped() const { return rows_in - rows_used; }
};

inline bool
is_missing_token(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
    s.remove_suffix(1);
  return s.empty() || s == "NA" || s == "na" || s == "." || s == "?";
}

namespace detail {

struct TransformOutcome
{
  double value = 0.0;
  bool square = false;
  const char* failure = nullptr; //!< reason prefix when the value is rejected
};

inline TransformOutcome
apply_transforms(double v, const std::vector<ColumnTransform>& steps)
{
  TransformOutcome out;
  for (const auto& s : steps) {
    switch (s.kind) {
      case ColumnTransform::Kind::none:
        break;
      case ColumnTransform::Kind::log:
        if (!(v > 0.0)) {
          out.failure = "log_nonpositive";
          return out;
        }
        v = std::log(v);
        break;
      case ColumnTransform::Kind::divide:
        v /= s.divisor;
        break;
      case ColumnTransform::Kind::square:
        out.square = true;
        break;
    }
  }
  out.value = v;
  if (!std::isfinite(v))
    out.failure = "nonfinite";
  return out;
}

inline bool
has_square(const std::vector<ColumnTransform>& steps)
{
  for (const auto& s : steps)
    if (s.kind == ColumnTransform::Kind::square)
      return true;
  return false;
}

} // namespace detail

//! Transformed value(s) of one raw parametric or smooth entry; two values
//! when the column is square-augmented.
inline std::vector<double>
transform_value(const IngestConfig& config, const std::string& column, double raw)
{
  static const std::vector<ColumnTransform> none;
  const auto it = config.transforms.find(column);
  const auto& steps = it == config.transforms.end() ? none : it->second;
  const auto r = detail::apply_transforms(raw, steps);
  if (r.failure)
    throw config_error(std::string(r.failure) + " value for column '" + column + "'");
  if (r.square)
    return { r.value, r.value * r.value };
  return { r.value };
}

//! Parses `text` (CSV with header) into a dataset according to `config`.
inline LoadedData
load_csv_text(std::string_view text, const IngestConfig& config)
{
  if (config.response.empty())
    throw config_error("exactly one response column is required");
  const CsvTable table = parse_csv(text);

  std::map<std::string, size_t> index;
  for (size_t c = 0; c < table.header.size(); ++c) {
    if (!index.emplace(table.header[c], c).second)
      throw config_error("duplicate column '" + table.header[c] + "' in header");
  }
  auto column = [&](const std::string& name) {
    const auto it = index.find(name);
    if (it == index.end())
      throw config_error("column '" + name + "' not found in header");
    return it->second;
  };
  std::map<std::string, int> role_count;
  role_count[config.response]++;
  for (const auto& c : config.parametric)
    role_count[c]++;
  for (const auto& c : config.smooth)
    role_count[c]++;
  for (const auto& [name, count] : role_count)
    if (count > 1)
      throw config_error("column '" + name + "' has more than one role");
  for (const auto& [name, steps] : config.transforms) {
    if (name == config.response)
      throw config_error("the response column cannot be transformed");
    const bool smooth = std::find(config.smooth.begin(), config.smooth.end(), name) != config.smooth.end();
    if (smooth && detail::has_square(steps))
      throw config_error("square augmentation applies to parametric columns only ('" + name + "')");
  }

  const size_t response_col = column(config.response);
  std::vector<size_t> x_cols, t_cols;
  for (const auto& c : config.parametric)
    x_cols.push_back(column(c));
  for (const auto& c : config.smooth)
    t_cols.push_back(column(c));
  static const std::vector<ColumnTransform> none;
  auto steps_of = [&](const std::string& name) -> const std::vector<ColumnTransform>& {
    const auto it = config.transforms.find(name);
    return it == config.transforms.end() ? none : it->second;
  };

  LoadedData out;
  for (const auto& name : config.parametric) {
    out.x_names.push_back(name);
    if (detail::has_square(steps_of(name)))
      out.x_names.push_back(name + "^2");
  }
  out.t_names = config.smooth;

  std::map<std::string, int> label_index;
  for (const auto& l : config.categories) {
    if (!label_index.emplace(l, static_cast<int>(out.labels.size())).second)
      throw config_error("duplicate category label '" + l + "'");
    out.labels.push_back(l);
  }
  const bool fixed_labels = !config.categories.empty();

  std::vector<int> ys;
  std::vector<double> xs, ts;
  std::vector<double> xrow, trow;
  out.rows_in = static_cast<Eigen::Index>(table.rows.size());
  for (const auto& row : table.rows) {
    auto drop = [&](const std::string& reason) { ++out.drop_reasons[reason]; };
    if (row.size() != table.header.size()) {
      drop("field_count");
      continue;
    }
    const std::string& label = row[response_col];
    if (is_missing_token(label)) {
      drop("missing_response");
      continue;
    }
    if (fixed_labels && !label_index.count(label)) {
      drop("unknown_category");
      continue;
    }

    std::string failure;
    std::vector<std::string> imputed_here;
    auto read = [&](const std::string& name, size_t col, std::vector<double>& dest) {
      const std::string& field = row[col];
      double raw = 0.0;
      if (is_missing_token(field)) {
        const auto it = config.impute.find(name);
        if (it == config.impute.end()) {
          failure = "missing:" + name;
          return;
        }
        raw = it->second;
        imputed_here.push_back(name);
      } else {
        const auto v = parse_double(field);
        if (!v) {
          failure = "unparseable:" + name;
          return;
        }
        raw = *v;
      }
      const auto r = detail::apply_transforms(raw, steps_of(name));
      if (r.failure) {
        failure = std::string(r.failure) + ":" + name;
        return;
      }
      dest.push_back(r.value);
      if (r.square)
        dest.push_back(r.value * r.value);
    };
    xrow.clear();
    trow.clear();
    for (size_t d = 0; d < x_cols.size() && failure.empty(); ++d)
      read(config.parametric[d], x_cols[d], xrow);
    for (size_t d = 0; d < t_cols.size() && failure.empty(); ++d)
      read(config.smooth[d], t_cols[d], trow);
    if (!failure.empty()) {
      drop(failure);
      continue;
    }
    for (const auto& name : imputed_here)
      ++out.imputed[name];

    auto [it, inserted] = label_index.emplace(label, static_cast<int>(out.labels.size()));
    if (inserted)
      out.labels.push_back(label);
    ys.push_back(it->second);
    xs.insert(xs.end(), xrow.begin(), xrow.end());
    ts.insert(ts.end(), trow.begin(), trow.end());
  }

  const auto n = static_cast<Eigen::Index>(ys.size());
  out.rows_used = n;
  if (n == 0)
    throw empty_dataset("no usable rows in the input");
  const auto p = static_cast<Eigen::Index>(out.x_names.size());
  const auto q = static_cast<Eigen::Index>(out.t_names.size());
  out.data.y = std::move(ys);
  out.data.categories = static_cast<int>(out.labels.size());
  out.data.x = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(xs.data(), n, p);
  out.data.t = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(ts.data(), n, q);
  if (out.data.categories < 2)
    throw insufficient_data("the response has fewer than two categories after ingestion");

  if (config.reference.empty()) {
    out.reference = out.data.categories - 1;
  } else {
    const auto it = label_index.find(config.reference);
    if (it == label_index.end())
      throw config_error("reference category '" + config.reference + "' does not occur");
    out.reference = it->second;
  }
  return out;
}

inline LoadedData
load_csv(const std::filesystem::path& path, const IngestConfig& config)
{
  return load_csv_text(read_file(path), config);
}

//! CSV text of a dataset: the response label, then parametric, then smooth
//! columns, numbers with 17 significant digits.
inline std::string
dataset_csv(const Dataset& data,
            const std::vector<std::string>& labels,
            const std::string& response,
            const std::vector<std::string>& x_names,
            const std::vector<std::string>& t_names)
{
  validate(data);
  if (static_cast<Eigen::Index>(x_names.size()) != data.p() ||
      static_cast<Eigen::Index>(t_names.size()) != data.q() ||
      labels.size() != static_cast<size_t>(data.categories))
    throw shape_error("column names or labels do not match the dataset");
  std::vector<std::string> header{ response };
  header.insert(header.end(), x_names.begin(), x_names.end());
  header.insert(header.end(), t_names.begin(), t_names.end());
  CsvWriter w(header);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    w.cell(labels[static_cast<size_t>(data.y[static_cast<size_t>(i)])]);
    for (Eigen::Index d = 0; d < data.p(); ++d)
      w.cell(data.x(i, d));
    for (Eigen::Index d = 0; d < data.q(); ++d)
      w.cell(data.t(i, d));
    w.end();
  }
  return w.str();
}

} // namespace spmnl
