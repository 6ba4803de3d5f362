#include "tlcp/lattice.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace tlcp {

namespace {

// Stream codes pack biased coordinates (14 bits per axis) plus a slot byte.
// Valid as long as every coordinate fits in [-8191, 8191].
constexpr int kCoordBits = 14;
constexpr int kCoordBias = 1 << (kCoordBits - 1);

}  // namespace

Window Window::box(int dim, const std::vector<int>& lo,
                   const std::vector<int>& hi, std::optional<int> truncation) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("window: bad dim");
  if (static_cast<int>(lo.size()) != dim || static_cast<int>(hi.size()) != dim)
    throw std::invalid_argument("window: lo/hi size mismatch");
  auto t = std::make_shared<Tables>();
  t->dim = dim;
  long long n = 1;
  for (int a = 0; a < dim; ++a) {
    if (lo[a] > 0 || hi[a] < 0)
      throw std::invalid_argument("window: must contain the origin");
    if (lo[a] < -(kCoordBias - 1) || hi[a] > kCoordBias - 1)
      throw std::invalid_argument("window: coordinate out of range");
    t->lo[a] = lo[a];
    t->hi[a] = hi[a];
    n *= hi[a] - lo[a] + 1;
  }
  if (n > (1 << 26)) throw std::invalid_argument("window: too many sites");
  if (truncation) {
    int radius = 0;
    for (int a = 0; a < dim; ++a)
      radius = std::max({radius, -lo[a], hi[a]});
    if (*truncation < 1 || *truncation > radius)
      throw std::invalid_argument("window: truncation must be in [1, radius]");
    t->trunc = *truncation;
  }
  t->n_sites = static_cast<int>(n);
  t->coords.resize(t->n_sites);
  t->birth_ok.resize(t->n_sites);
  t->norms.resize(t->n_sites);
  Coords c{};
  for (int a = 0; a < dim; ++a) c[a] = lo[a];
  for (int i = 0; i < t->n_sites; ++i) {
    t->coords[i] = c;
    int norm = 0;
    for (int a = 0; a < dim; ++a) norm = std::max(norm, std::abs(c[a]));
    t->norms[i] = norm;
    t->birth_ok[i] = (t->trunc == kNoTruncation || norm < t->trunc) ? 1 : 0;
    // row-major increment, last axis fastest
    for (int a = dim - 1; a >= 0; --a) {
      if (++c[a] <= hi[a]) break;
      c[a] = lo[a];
    }
  }
  t->neighbors.assign(static_cast<std::size_t>(t->n_sites) * 2 * dim, -1);
  Window w(t);
  auto* mut = const_cast<Tables*>(w.t_.get());
  for (int i = 0; i < t->n_sites; ++i) {
    for (int dir = 0; dir < 2 * dim; ++dir) {
      Coords nc = t->coords[i];
      nc[dir / 2] += (dir & 1) ? 1 : -1;
      mut->neighbors[static_cast<std::size_t>(i) * 2 * dim + dir] =
          w.contains(nc) ? w.index_of(nc) : -1;
    }
  }
  return w;
}

Window Window::symmetric(int dim, int radius, std::optional<int> truncation) {
  if (radius < 0) throw std::invalid_argument("window: negative radius");
  std::vector<int> lo(dim, -radius), hi(dim, radius);
  return box(dim, lo, hi, truncation);
}

Window Window::line(int n_sites) {
  if (n_sites < 1) throw std::invalid_argument("window: empty line");
  int lo = -((n_sites - 1) / 2);
  int hi = lo + n_sites - 1;
  return box(1, {lo}, {hi});
}

bool Window::same_geometry(const Window& o) const {
  if (t_ == o.t_) return true;
  if (t_->dim != o.t_->dim) return false;
  for (int a = 0; a < t_->dim; ++a)
    if (t_->lo[a] != o.t_->lo[a] || t_->hi[a] != o.t_->hi[a]) return false;
  return true;
}

Window Window::with_truncation(std::optional<int> truncation) const {
  std::vector<int> lo(t_->lo.begin(), t_->lo.begin() + t_->dim);
  std::vector<int> hi(t_->hi.begin(), t_->hi.begin() + t_->dim);
  return box(t_->dim, lo, hi, truncation);
}

bool Window::contains(const Coords& c) const {
  for (int a = 0; a < t_->dim; ++a)
    if (c[a] < t_->lo[a] || c[a] > t_->hi[a]) return false;
  return true;
}

SiteIndex Window::index_of(const Coords& c) const {
  if (!contains(c)) return -1;
  long long idx = 0;
  for (int a = 0; a < t_->dim; ++a)
    idx = idx * (t_->hi[a] - t_->lo[a] + 1) + (c[a] - t_->lo[a]);
  return static_cast<SiteIndex>(idx);
}

std::uint64_t Window::stream_code(SiteIndex i, int slot) const {
  const Coords& c = t_->coords[i];
  std::uint64_t code = 0;
  for (int a = 0; a < t_->dim; ++a)
    code = (code << kCoordBits) | static_cast<std::uint64_t>(c[a] + kCoordBias);
  return code | (static_cast<std::uint64_t>(slot) << 56);
}

Configuration::Configuration(Window window, SiteState fill)
    : win_(std::move(window)),
      states_(win_.n_sites(), static_cast<std::uint8_t>(fill)) {}

int Configuration::animal_count() const {
  int n = 0;
  for (auto s : states_) n += (s == 1 || s == 3);
  return n;
}

int Configuration::flea_count() const {
  int n = 0;
  for (auto s : states_) n += (s == 2 || s == 3);
  return n;
}

SiteSet animal_set(const Configuration& c) {
  SiteSet out;
  for (SiteIndex i = 0; i < c.n_sites(); ++i)
    if (has_animal(c.state(i))) out.push_back(i);
  return out;
}

SiteSet flea_set(const Configuration& c) {
  SiteSet out;
  for (SiteIndex i = 0; i < c.n_sites(); ++i)
    if (has_fleas(c.state(i))) out.push_back(i);
  return out;
}

bool leq(const Configuration& c1, const Configuration& c2) {
  if (!c1.window().same_geometry(c2.window()))
    throw std::invalid_argument("leq: window mismatch");
  for (SiteIndex i = 0; i < c1.n_sites(); ++i)
    if (!state_leq(c1.state(i), c2.state(i))) return false;
  return true;
}

std::array<int, 4> neighbor_counts(const Configuration& c, SiteIndex x) {
  const Window& w = c.window();
  if (x < 0 || x >= w.n_sites())
    throw std::invalid_argument("neighbor_counts: site outside window");
  std::array<int, 4> counts{};
  for (int dir = 0; dir < w.n_dirs(); ++dir) {
    SiteIndex nb = w.neighbor(x, dir);
    if (nb >= 0) ++counts[static_cast<int>(c.state(nb))];
  }
  return counts;
}

std::string coords_to_string(const Coords& c, int dim, char sep) {
  std::string out;
  for (int a = 0; a < dim; ++a) {
    if (a) out.push_back(sep);
    out += std::to_string(c[a]);
  }
  return out;
}

std::string serialize(const Configuration& c) {
  const Window& w = c.window();
  std::ostringstream os;
  os << "tlcp-config d=" << w.dim() << " lo=";
  for (int a = 0; a < w.dim(); ++a) os << (a ? "," : "") << w.lo(a);
  os << " hi=";
  for (int a = 0; a < w.dim(); ++a) os << (a ? "," : "") << w.hi(a);
  os << " trunc=";
  if (w.truncated())
    os << w.truncation();
  else
    os << "none";
  os << "\n";
  for (SiteIndex i = 0; i < c.n_sites(); ++i) {
    os << coords_to_string(w.coords_of(i), w.dim()) << ":"
       << static_cast<int>(c.state(i)) << "\n";
  }
  return os.str();
}

namespace {

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

}  // namespace

Configuration parse_configuration(const std::string& text) {
  std::istringstream is(text);
  std::string header;
  if (!std::getline(is, header) || header.rfind("tlcp-config ", 0) != 0)
    throw std::invalid_argument("parse_configuration: bad header");
  int dim = 0;
  std::vector<int> lo, hi;
  std::optional<int> trunc;
  {
    std::istringstream hs(header.substr(12));
    std::string field;
    while (hs >> field) {
      auto eq = field.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("parse_configuration: bad header field");
      std::string key = field.substr(0, eq), val = field.substr(eq + 1);
      if (key == "d")
        dim = std::stoi(val);
      else if (key == "lo")
        lo = parse_int_list(val);
      else if (key == "hi")
        hi = parse_int_list(val);
      else if (key == "trunc" && val != "none")
        trunc = std::stoi(val);
    }
  }
  Window w = Window::box(dim, lo, hi, trunc);
  Configuration c(w);
  std::string line;
  int seen = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("parse_configuration: bad site line");
    std::vector<int> xs = parse_int_list(line.substr(0, colon));
    if (static_cast<int>(xs.size()) != dim)
      throw std::invalid_argument("parse_configuration: bad coords");
    Coords co{};
    std::copy(xs.begin(), xs.end(), co.begin());
    SiteIndex i = w.index_of(co);
    if (i < 0) throw std::invalid_argument("parse_configuration: site outside");
    int s = std::stoi(line.substr(colon + 1));
    if (s < 0 || s > 3)
      throw std::invalid_argument("parse_configuration: bad state");
    c.set_state(i, static_cast<SiteState>(s));
    ++seen;
  }
  if (seen != w.n_sites())
    throw std::invalid_argument("parse_configuration: missing sites");
  return c;
}

}  // namespace tlcp
