#include "rpde/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rpde/error.hpp"

namespace rpde::io {

namespace {

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument(std::string("cannot parse ") + what + " from '" + s + "'");
  }
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_rough_path(std::ostream& out, const RoughPath& X) {
  out << "# rpde-rough-path alpha=" << format_double(X.alpha());
  if (!X.provenance().empty()) out << ' ' << X.provenance();
  out << "\nt,x,x2_step\n";
  const auto& g = X.grid();
  for (std::size_t i = 0; i < g.size(); ++i) {
    out << format_double(g[i]) << ',' << format_double(X.x()[i]) << ',';
    if (i < g.steps()) out << format_double(X.x2_step()[i]);
    out << '\n';
  }
}

RoughPath read_rough_path(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("rough path: empty input");
  line = strip_cr(line);
  const std::string tag = "# rpde-rough-path alpha=";
  if (line.rfind(tag, 0) != 0) throw InvalidArgument("rough path: missing header line");
  std::string rest = line.substr(tag.size());
  const auto space = rest.find(' ');
  const double alpha = parse_double(rest.substr(0, space), "alpha");
  const std::string provenance = space == std::string::npos ? "" : rest.substr(space + 1);
  if (!std::getline(in, line) || strip_cr(line) != "t,x,x2_step")
    throw InvalidArgument("rough path: missing column header");
  std::vector<double> t, x, x2;
  bool closed = false;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    if (closed) throw InvalidArgument("rough path: rows after the final point");
    const auto f = split(line);
    if (f.size() != 3) throw InvalidArgument("rough path: expected 3 columns in '" + line + "'");
    t.push_back(parse_double(f[0], "t"));
    x.push_back(parse_double(f[1], "x"));
    if (f[2].empty()) closed = true;
    else x2.push_back(parse_double(f[2], "x2_step"));
  }
  if (!closed || t.size() < 2) throw InvalidArgument("rough path: truncated file");
  RoughPath X(TimeGrid(std::move(t)), std::move(x), std::move(x2), alpha);
  X.set_provenance(provenance);
  return X;
}

void save_rough_path(const std::filesystem::path& file, const RoughPath& X) {
  std::ostringstream ss;
  write_rough_path(ss, X);
  write_text_file(file, ss.str());
}

RoughPath load_rough_path(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  return read_rough_path(in);
}

void write_field(std::ostream& out, const SpectralField& u) {
  out << "dim,cutoff\n" << u.dim() << ',' << u.cutoff() << '\n';
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (const auto k : u.multi_index(i)) out << k << ',';
    out << format_double(u[i].real()) << ',' << format_double(u[i].imag()) << '\n';
  }
}

SpectralField read_field(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != "dim,cutoff")
    throw InvalidArgument("field: missing header");
  if (!std::getline(in, line)) throw InvalidArgument("field: missing shape");
  const auto shape = split(strip_cr(line));
  if (shape.size() != 2) throw InvalidArgument("field: bad shape line");
  const auto dim = static_cast<std::size_t>(parse_double(shape[0], "dim"));
  const auto cutoff = static_cast<std::size_t>(parse_double(shape[1], "cutoff"));
  SpectralField u(dim, cutoff);
  std::vector<bool> seen(u.size(), false);
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != dim + 2) throw InvalidArgument("field: bad row '" + line + "'");
    std::vector<int> k(dim);
    for (std::size_t a = 0; a < dim; ++a) {
      const double v = parse_double(f[a], "mode");
      if (v != std::floor(v) || std::abs(v) > static_cast<double>(cutoff))
        throw InvalidArgument("field: mode out of range in '" + line + "'");
      k[a] = static_cast<int>(v);
    }
    const std::size_t idx = u.index(k);
    u[idx] = Complex(parse_double(f[dim], "re"), parse_double(f[dim + 1], "im"));
    seen[idx] = true;
  }
  for (bool s : seen)
    if (!s) throw InvalidArgument("field: missing modes");
  return u;
}

void write_collocation_csv(std::ostream& out, const SpectralField& u, std::size_t m) {
  const auto vals = to_collocation(u, m);
  for (std::size_t a = 0; a < u.dim(); ++a) out << 'x' << (a + 1) << ',';
  out << "u\n";
  const double dx = 2.0 * 3.14159265358979323846 / static_cast<double>(m);
  for (std::size_t p = 0; p < vals.size(); ++p) {
    std::size_t rem = p;
    std::vector<std::size_t> idx(u.dim());
    for (std::size_t a = u.dim(); a-- > 0;) {
      idx[a] = rem % m;
      rem /= m;
    }
    for (std::size_t a = 0; a < u.dim(); ++a)
      out << format_double(static_cast<double>(idx[a]) * dx) << ',';
    out << format_double(vals[p].real()) << '\n';
  }
}

void write_norm_header(std::ostream& out) { out << "sup_y,sup_yp,hol_yp,hol_R,hol2_R,total\n"; }

void write_norm_row(std::ostream& out, const GubNormBreakdown& b) {
  out << format_double(b.sup_y) << ',' << format_double(b.sup_yp) << ','
      << format_double(b.hol_yp) << ',' << format_double(b.hol_R) << ','
      << format_double(b.hol2_R) << ',' << format_double(b.total) << '\n';
}

void write_text_file(const std::filesystem::path& file, const std::string& contents) {
  if (file.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
  }
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + file.string() + " for writing");
  out << contents;
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + file.string());
}

}  // namespace rpde::io
