#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>

#include "nal/errors.hpp"
#include "nal/probio.hpp"

namespace nal {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Section { kNone, kName, kRows, kColumns, kRhs, kBounds, kEnd };

struct Row {
  std::string name;
  char type;
  double rhs = 0.0;
};

struct Column {
  std::string name;
  std::vector<std::pair<Index, double>> entries;  // (row, value)
  double cost = 0.0;
  double lo = 0.0;
  double up = kInf;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_free(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

// Fixed MPS fields (1-based columns): 2-3, 5-12, 15-22, 25-36, 40-47, 50-61.
std::vector<std::string_view> split_fixed(std::string_view line) {
  static constexpr std::pair<std::size_t, std::size_t> kFields[] = {
      {1, 2}, {4, 8}, {14, 8}, {24, 12}, {39, 8}, {49, 12}};
  std::vector<std::string_view> out;
  for (auto [start, len] : kFields) {
    if (start >= line.size()) break;
    out.push_back(trim(line.substr(start, len)));
  }
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

class MpsReader {
 public:
  Problem parse(std::string_view text);

 private:
  std::size_t line_no_ = 0;
  std::string name_;
  std::vector<Row> rows_;
  std::map<std::string, Index, std::less<>> row_index_;
  std::string objective_;
  // Further N rows carry no constraint; their entries are dropped.
  std::set<std::string, std::less<>> free_rows_;
  double objective_rhs_ = 0.0;
  std::vector<Column> cols_;
  std::map<std::string, Index, std::less<>> col_index_;

  [[noreturn]] void error(const std::string& msg, std::size_t column = 1) const {
    throw ParseError(line_no_, column, msg);
  }

  static bool is_number(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return !s.empty() && ec == std::errc() && p == s.data() + s.size() && std::isfinite(v);
  }

  bool known_row(std::string_view name) const {
    return name == objective_ || row_index_.count(name) > 0 || free_rows_.count(name) > 0;
  }

  // Free fields are tried first; when they do not form a valid entry the
  // fixed column layout is tried, which admits blanks inside names.
  template <class Valid>
  std::vector<std::string_view> fields(std::string_view line, Valid valid) const {
    auto f = split_free(line);
    if (valid(f)) return f;
    auto g = split_fixed(line);
    if (!g.empty() && g.front().empty()) g.erase(g.begin());
    return valid(g) ? g : f;
  }

  bool pairs_ok(const std::vector<std::string_view>& f, std::size_t first) const {
    if (f.size() <= first || (f.size() - first) % 2 != 0) return false;
    for (std::size_t k = first; k + 1 < f.size(); k += 2)
      if (!known_row(f[k]) || !is_number(f[k + 1])) return false;
    return true;
  }

  double number(std::string_view s) const {
    std::string_view t = s;
    if (!t.empty() && t.front() == '+') t.remove_prefix(1);
    double v = 0.0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || p != t.data() + t.size() || !std::isfinite(v))
      error("expected a number, found '" + std::string(s) + "'");
    return v;
  }

  std::optional<Index> row_of(std::string_view name) const {
    auto it = row_index_.find(name);
    if (it == row_index_.end()) return std::nullopt;
    return it->second;
  }

  void rows_line(std::string_view line);
  void columns_line(std::string_view line);
  void rhs_line(std::string_view line);
  void bounds_line(std::string_view line);
  void set_rhs(std::string_view row, std::string_view value);
  Problem build() const;
};

void MpsReader::rows_line(std::string_view line) {
  auto f = fields(line, [](const std::vector<std::string_view>& v) { return v.size() == 2; });
  if (f.size() != 2) error("ROWS entry needs a type and a name");
  if (f[0].size() != 1 || std::string_view("NELG").find(f[0][0]) == std::string_view::npos)
    error("unknown row type '" + std::string(f[0]) + "'");
  const char type = f[0][0];
  if (type == 'N') {
    if (objective_.empty()) objective_ = std::string(f[1]);
    else free_rows_.emplace(f[1]);
    return;
  }
  if (row_index_.count(f[1])) error("duplicate row '" + std::string(f[1]) + "'");
  row_index_.emplace(std::string(f[1]), static_cast<Index>(rows_.size()));
  rows_.push_back({std::string(f[1]), type});
}

void MpsReader::columns_line(std::string_view line) {
  auto f = fields(line, [&](const std::vector<std::string_view>& v) {
    if (v.size() >= 3 && v[1] == "'MARKER'") return true;
    return (v.size() == 3 || v.size() == 5) && pairs_ok(v, 1);
  });
  if (f.size() >= 3 && f[1] == "'MARKER'") return;
  if (f.size() != 3 && f.size() != 5) error("COLUMNS entry needs a column and (row, value) pairs");
  Index col;
  if (auto it = col_index_.find(f[0]); it != col_index_.end()) {
    col = it->second;
  } else {
    col = static_cast<Index>(cols_.size());
    col_index_.emplace(std::string(f[0]), col);
    Column fresh;
    fresh.name = std::string(f[0]);
    cols_.push_back(std::move(fresh));
  }
  for (std::size_t k = 1; k + 1 < f.size(); k += 2) {
    const double v = number(f[k + 1]);
    if (f[k] == objective_) {
      cols_[col].cost += v;
    } else if (free_rows_.count(f[k])) {
      continue;
    } else if (auto r = row_of(f[k])) {
      cols_[col].entries.emplace_back(*r, v);
    } else {
      error("unknown row '" + std::string(f[k]) + "'");
    }
  }
}

void MpsReader::set_rhs(std::string_view row, std::string_view value) {
  const double v = number(value);
  if (row == objective_) {
    objective_rhs_ = v;
  } else if (free_rows_.count(row)) {
    return;
  } else if (auto r = row_of(row)) {
    rows_[*r].rhs = v;
  } else {
    error("unknown row '" + std::string(row) + "'");
  }
}

void MpsReader::rhs_line(std::string_view line) {
  // An even count means the RHS set name is omitted.
  auto f = fields(line, [&](const std::vector<std::string_view>& v) {
    return v.size() >= 2 && v.size() <= 5 && pairs_ok(v, v.size() % 2);
  });
  if (f.size() < 2 || f.size() > 5) error("RHS entry needs (row, value) pairs");
  for (std::size_t k = f.size() % 2; k + 1 < f.size(); k += 2) set_rhs(f[k], f[k + 1]);
}

void MpsReader::bounds_line(std::string_view line) {
  auto f = fields(line, [&](const std::vector<std::string_view>& v) {
    if (v.size() < 2 || v.size() > 4) return false;
    const bool valued = v[0] == "LO" || v[0] == "UP" || v[0] == "FX";
    if (valued) {
      if (v.size() == 2) return false;
      return col_index_.count(v[v.size() - 2]) > 0 && is_number(v.back());
    }
    return col_index_.count(v.back()) > 0 && v.size() <= 3;
  });
  if (f.size() < 2) error("BOUNDS entry needs a type and a column");
  const std::string type(f[0]);
  const bool valued = type == "LO" || type == "UP" || type == "FX";
  if (!valued && type != "FR" && type != "MI" && type != "PL") {
    if (type == "BV" || type == "LI" || type == "UI" || type == "SC")
      fail(ErrorKind::kUnsupportedFeature, "bound type " + type);
    error("unknown bound type '" + type + "'");
  }
  std::string_view col_name;
  std::string_view value;
  if (valued) {
    if (f.size() == 4) {
      col_name = f[2];
      value = f[3];
    } else if (f.size() == 3) {
      col_name = f[1];
      value = f[2];
    } else {
      error("bound " + type + " needs a value");
    }
  } else {
    col_name = f.size() >= 3 ? f[2] : f[1];
  }
  auto it = col_index_.find(col_name);
  if (it == col_index_.end()) error("unknown column '" + std::string(col_name) + "'");
  Column& c = cols_[it->second];
  if (type == "LO") c.lo = number(value);
  else if (type == "UP") c.up = number(value);
  else if (type == "FX") c.lo = c.up = number(value);
  else if (type == "FR") { c.lo = -kInf; c.up = kInf; }
  else if (type == "MI") c.lo = -kInf;
  else if (type == "PL") c.up = kInf;
}

Problem MpsReader::parse(std::string_view text) {
  Section section = Section::kNone;
  std::size_t pos = 0;
  while (pos < text.size() && section != Section::kEnd) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    ++line_no_;
    if (trim(line).empty() || line.front() == '*') continue;

    if (!std::isspace(static_cast<unsigned char>(line.front()))) {
      const auto words = split_free(line);
      const std::string_view head = words.front();
      if (head == "NAME") {
        section = Section::kName;
        name_ = std::string(trim(line.substr(4)));
      } else if (head == "ROWS") {
        section = Section::kRows;
      } else if (head == "COLUMNS") {
        section = Section::kColumns;
      } else if (head == "RHS") {
        section = Section::kRhs;
      } else if (head == "BOUNDS") {
        section = Section::kBounds;
      } else if (head == "ENDATA") {
        section = Section::kEnd;
      } else if (head == "RANGES") {
        fail(ErrorKind::kUnsupportedFeature, "RANGES");
      } else if (head == "OBJSENSE" || head == "OBJSENCE") {
        fail(ErrorKind::kUnsupportedFeature, "OBJSENSE");
      } else {
        error("unknown section '" + std::string(head) + "'");
      }
      continue;
    }
    switch (section) {
      case Section::kRows: rows_line(line); break;
      case Section::kColumns: columns_line(line); break;
      case Section::kRhs: rhs_line(line); break;
      case Section::kBounds: bounds_line(line); break;
      default: error("data line outside a section");
    }
  }
  if (section != Section::kEnd) error("missing ENDATA");
  if (objective_.empty()) error("no objective (N) row");
  return build();
}

Problem MpsReader::build() const {
  std::vector<Triplet> trip;
  std::vector<double> cost;
  Vector b(static_cast<Index>(rows_.size()));
  for (std::size_t i = 0; i < rows_.size(); ++i) b[static_cast<Index>(i)] = rows_[i].rhs;
  ColumnMap map;
  double constant = -objective_rhs_;
  struct UpperRow { Index col; double bound; };
  std::vector<UpperRow> upper_rows;

  auto add_column = [&](const Column& c, double sign) {
    const Index col = static_cast<Index>(cost.size());
    cost.push_back(sign * c.cost);
    for (auto [r, v] : c.entries) trip.push_back({r, col, sign * v});
    map.entries.push_back({c.name, col, sign});
    return col;
  };
  for (const Column& c : cols_) {
    if (c.up < c.lo) error("column '" + c.name + "' has upper bound below lower bound");
    double shift = 0.0;
    if (c.lo == c.up) {
      shift = c.lo;
    } else if (c.lo > -kInf) {
      shift = c.lo;
      const Index col = add_column(c, 1.0);
      if (c.up < kInf) upper_rows.push_back({col, c.up - c.lo});
    } else if (c.up < kInf) {
      shift = c.up;
      add_column(c, -1.0);
    } else {
      add_column(c, 1.0);
      add_column(c, -1.0);
    }
    map.shift[c.name] = shift;
    if (shift != 0.0) {
      for (auto [r, v] : c.entries) b[r] -= v * shift;
      constant += c.cost * shift;
    }
  }
  Index m = static_cast<Index>(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].type == 'E') continue;
    const Index col = static_cast<Index>(cost.size());
    cost.push_back(0.0);
    trip.push_back({static_cast<Index>(i), col, rows_[i].type == 'L' ? 1.0 : -1.0});
  }
  b.conservativeResize(m + static_cast<Index>(upper_rows.size()));
  for (const UpperRow& u : upper_rows) {
    const Index col = static_cast<Index>(cost.size());
    cost.push_back(0.0);
    trip.push_back({m, u.col, 1.0});
    trip.push_back({m, col, 1.0});
    b[m] = u.bound;
    ++m;
  }
  const Index n = static_cast<Index>(cost.size());
  if (n == 0) error("no variables left after eliminating fixed columns");

  Problem p;
  p.name = name_;
  p.cone = ConeDesc({Orthant(n)});
  p.A = LinearMap(m, n, trip);
  p.b = b;
  p.c = Eigen::Map<const Vector>(cost.data(), n);
  p.meta.objective_constant = constant;
  p.meta.family = "mps";
  p.meta.columns = std::move(map);
  return p;
}

}  // namespace

Problem parse_mps_lp(std::string_view text) { return MpsReader().parse(text); }

}  // namespace nal
