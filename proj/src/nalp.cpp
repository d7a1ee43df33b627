#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nal/errors.hpp"
#include "nal/probio.hpp"

namespace nal {
namespace {

struct Token {
  std::string_view text;
  std::size_t line;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view row = text.substr(pos, end - pos);
    if (auto hash = row.find('#'); hash != std::string_view::npos)
      row = row.substr(0, hash);
    std::size_t i = 0;
    while (i < row.size()) {
      while (i < row.size() && std::isspace(static_cast<unsigned char>(row[i]))) ++i;
      std::size_t start = i;
      while (i < row.size() && !std::isspace(static_cast<unsigned char>(row[i]))) ++i;
      if (i > start) out.push_back({row.substr(start, i - start), line, start + 1});
    }
    pos = end + 1;
    ++line;
  }
  return out;
}

class Reader {
 public:
  explicit Reader(std::string_view text) : tokens_(tokenize(text)) {
    end_line_ = 1 + static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
  }

  bool done() const { return pos_ >= tokens_.size(); }

  const Token& next(const char* expected) {
    if (done())
      throw ParseError(end_line_, 1,
                       std::string("expected ") + expected + ", found end of input");
    return tokens_[pos_++];
  }

  void keyword(const char* word) {
    const Token& t = next(word);
    if (t.text != word)
      throw ParseError(t.line, t.column,
                       std::string("expected '") + word + "', found '" +
                           std::string(t.text) + "'");
  }

  long long integer(const char* what, long long lo) {
    const Token& t = next(what);
    long long v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || p != t.text.data() + t.text.size())
      throw ParseError(t.line, t.column,
                       std::string("expected ") + what + ", found '" +
                           std::string(t.text) + "'");
    if (v < lo)
      throw ParseError(t.line, t.column,
                       std::string(what) + " must be at least " + std::to_string(lo));
    last_ = &t;
    return v;
  }

  double real(const char* what) {
    const Token& t = next(what);
    double v = 0.0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || p != t.text.data() + t.text.size() || !std::isfinite(v))
      throw ParseError(t.line, t.column,
                       std::string("expected ") + what + ", found '" +
                           std::string(t.text) + "'");
    return v;
  }

  const Token& last() const { return *last_; }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t end_line_ = 1;
  const Token* last_ = nullptr;
};

void append_number(std::string& out, double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, p);
}

}  // namespace

Problem parse_nalp(std::string_view text) {
  Reader in(text);
  in.keyword("NALP");
  {
    const long long version = in.integer("format version", 1);
    if (version != 1)
      throw ParseError(in.last().line, in.last().column,
                       "unsupported format version " + std::to_string(version));
  }
  in.keyword("CONES");
  const long long k = in.integer("block count", 0);
  std::vector<BlockSpec> specs;
  for (long long i = 0; i < k; ++i) {
    const Token& kind = in.next("cone kind (NN, SOC or PSD)");
    if (kind.text == "NN") {
      specs.push_back(Orthant(in.integer("orthant size", 1)));
    } else if (kind.text == "SOC") {
      const long long n = in.integer("second-order cone size", 0);
      if (n < 2) throw ParseError(in.last().line, in.last().column, "SOC n ≥ 2");
      specs.push_back(SecondOrder(n));
    } else if (kind.text == "PSD") {
      specs.push_back(Psd(in.integer("PSD order", 1)));
    } else {
      throw ParseError(kind.line, kind.column,
                       "expected cone kind (NN, SOC or PSD), found '" +
                           std::string(kind.text) + "'");
    }
  }
  Problem prob;
  prob.cone = ConeDesc(specs);

  in.keyword("DIMS");
  const long long m = in.integer("row count", 0);
  const long long nvec = in.integer("vector length", 0);
  if (nvec != prob.cone.vec_len())
    throw ParseError(in.last().line, in.last().column,
                     "vector length " + std::to_string(nvec) +
                         " does not match the cones (" +
                         std::to_string(prob.cone.vec_len()) + ")");

  in.keyword("A");
  const long long nnz = in.integer("nonzero count", 0);
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(nnz));
  for (long long t = 0; t < nnz; ++t) {
    const long long r = in.integer("row index", 0);
    if (r >= m)
      throw ParseError(in.last().line, in.last().column,
                       "row index " + std::to_string(r) + " out of range");
    const long long c = in.integer("column index", 0);
    if (c >= nvec)
      throw ParseError(in.last().line, in.last().column,
                       "column index " + std::to_string(c) + " out of range");
    trip.push_back({r, c, in.real("coefficient")});
  }
  prob.A = LinearMap(m, nvec, trip);

  in.keyword("B");
  if (in.integer("length of B", 0) != m)
    throw ParseError(in.last().line, in.last().column, "length of B must equal m");
  prob.b.resize(m);
  for (long long i = 0; i < m; ++i) prob.b[i] = in.real("value of B");

  in.keyword("C");
  if (in.integer("length of C", 0) != nvec)
    throw ParseError(in.last().line, in.last().column, "length of C must equal nvec");
  prob.c.resize(nvec);
  for (long long i = 0; i < nvec; ++i) prob.c[i] = in.real("value of C");

  in.keyword("END");
  if (!in.done()) {
    const Token& t = in.next("end of input");
    throw ParseError(t.line, t.column,
                     "unexpected '" + std::string(t.text) + "' after END");
  }
  return prob;
}

std::string write_nalp(const Problem& problem) {
  std::string out = "NALP 1\n";
  out += "CONES " + std::to_string(problem.cone.blocks().size()) + "\n";
  for (const ConeBlock& b : problem.cone.blocks()) {
    switch (b.kind) {
      case ConeKind::kOrthant: out += "NN "; break;
      case ConeKind::kSecondOrder: out += "SOC "; break;
      case ConeKind::kPsd: out += "PSD "; break;
    }
    out += std::to_string(b.dim) + "\n";
  }
  out += "DIMS " + std::to_string(problem.A.rows()) + " " +
         std::to_string(problem.cone.vec_len()) + "\n";
  const std::vector<Triplet> trip = problem.A.triplets();
  out += "A " + std::to_string(trip.size()) + "\n";
  for (const Triplet& t : trip) {
    out += std::to_string(t.row) + " " + std::to_string(t.col) + " ";
    append_number(out, t.value);
    out += "\n";
  }
  auto dump = [&out](const char* tag, const Vector& v) {
    out += std::string(tag) + " " + std::to_string(v.size()) + "\n";
    for (Index i = 0; i < v.size(); ++i) {
      append_number(out, v[i]);
      out += "\n";
    }
  };
  dump("B", problem.b);
  dump("C", problem.c);
  out += "END\n";
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kInvalidArgument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Problem load_problem(const std::string& path) {
  const std::string text = read_file(path);
  auto ends_with = [&path](std::string_view suffix) {
    if (path.size() < suffix.size()) return false;
    std::string tail = path.substr(path.size() - suffix.size());
    for (char& ch : tail) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return tail == suffix;
  };
  Problem p = ends_with(".mps") ? parse_mps_lp(text) : parse_nalp(text);
  if (p.name.empty()) {
    const auto slash = path.find_last_of('/');
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    if (const auto dot = base.find_last_of('.'); dot != std::string::npos)
      base.resize(dot);
    p.name = base;
  }
  return p;
}

}  // namespace nal
