#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tlcp {

// A site is one of four states; 3 decomposes as "animal present AND fleas
// present".
enum class SiteState : std::uint8_t {
  Empty = 0,
  Animal = 1,
  Fleas = 2,
  Both = 3,
};

inline bool has_animal(SiteState s) {
  return s == SiteState::Animal || s == SiteState::Both;
}
inline bool has_fleas(SiteState s) {
  return s == SiteState::Fleas || s == SiteState::Both;
}

// Sitewise partial order: 0 below everything, 1 below 3, 2 below 3.
// c1 <= c2 sitewise implies A1 ⊆ A2 and B1 ⊆ B2.
inline bool state_leq(SiteState a, SiteState b) {
  return (!has_animal(a) || has_animal(b)) && (!has_fleas(a) || has_fleas(b));
}

inline constexpr int kMaxDim = 4;
inline constexpr int kNoTruncation = -1;

using SiteIndex = std::int32_t;
using SiteSet = std::vector<SiteIndex>;  // sorted, unique
using Coords = std::array<int, kMaxDim>;

// Finite box window on Z^d, a product of integer intervals containing the
// origin, with an optional birth-truncation radius L: births (animal or flea)
// from sites with ||x||_inf >= L are suppressed. Sites are indexed row-major
// in coordinate order (last axis fastest), which fixes the serialization
// order. Cheap to copy; the derived tables are shared and immutable.
class Window {
 public:
  // Symmetric box [-radius, radius]^d. radius >= 0 (radius 0 is the isolated
  // origin).
  static Window symmetric(int dim, int radius,
                          std::optional<int> truncation = std::nullopt);
  // General box, lo[a] <= 0 <= hi[a] per axis.
  static Window box(int dim, const std::vector<int>& lo,
                    const std::vector<int>& hi,
                    std::optional<int> truncation = std::nullopt);
  // 1D window of n_sites consecutive sites containing the origin.
  static Window line(int n_sites);

  int dim() const { return t_->dim; }
  int n_sites() const { return t_->n_sites; }
  int lo(int axis) const { return t_->lo[axis]; }
  int hi(int axis) const { return t_->hi[axis]; }
  bool truncated() const { return t_->trunc != kNoTruncation; }
  int truncation() const { return t_->trunc; }

  // Same box shape and dimension; truncation may differ.
  bool same_geometry(const Window& o) const;
  bool operator==(const Window& o) const {
    return same_geometry(o) && t_->trunc == o.t_->trunc;
  }

  Window with_truncation(std::optional<int> truncation) const;

  bool contains(const Coords& c) const;
  SiteIndex index_of(const Coords& c) const;  // -1 if outside
  Coords coords_of(SiteIndex i) const { return t_->coords[i]; }

  // Directions: dir = 2*axis is -e_axis, dir = 2*axis + 1 is +e_axis.
  int n_dirs() const { return 2 * t_->dim; }
  // Neighbor site index, or -1 when the neighbor lies outside the window.
  SiteIndex neighbor(SiteIndex i, int dir) const {
    return t_->neighbors[static_cast<std::size_t>(i) * n_dirs() + dir];
  }
  // False when a truncation radius is set and ||x||_inf >= L.
  bool birth_allowed(SiteIndex i) const { return t_->birth_ok[i] != 0; }
  int inf_norm(SiteIndex i) const { return t_->norms[i]; }

  // Window-independent 64-bit code for (site, slot); used to key random
  // streams so growing the window extends rather than reshuffles them.
  std::uint64_t stream_code(SiteIndex i, int slot) const;

 private:
  struct Tables {
    int dim = 0;
    std::array<int, kMaxDim> lo{}, hi{};
    int trunc = kNoTruncation;
    int n_sites = 0;
    std::vector<SiteIndex> neighbors;  // n_sites * 2*dim
    std::vector<Coords> coords;
    std::vector<std::uint8_t> birth_ok;
    std::vector<int> norms;
  };
  explicit Window(std::shared_ptr<const Tables> t) : t_(std::move(t)) {}
  std::shared_ptr<const Tables> t_;
};

// Total map from window sites to SiteState.
class Configuration {
 public:
  Configuration(Window window, SiteState fill = SiteState::Empty);

  const Window& window() const { return win_; }
  int n_sites() const { return win_.n_sites(); }

  SiteState state(SiteIndex i) const {
    return static_cast<SiteState>(states_[i]);
  }
  void set_state(SiteIndex i, SiteState s) {
    states_[i] = static_cast<std::uint8_t>(s);
  }
  const std::vector<std::uint8_t>& raw() const { return states_; }

  int animal_count() const;
  int flea_count() const;

  bool operator==(const Configuration& o) const {
    return win_ == o.win_ && states_ == o.states_;
  }

 private:
  Window win_;
  std::vector<std::uint8_t> states_;
};

// A = sites occupied by animals (state 1 or 3), sorted.
SiteSet animal_set(const Configuration& c);
// B = sites occupied by fleas (state 2 or 3), sorted.
SiteSet flea_set(const Configuration& c);

// Partial order: A(c1) ⊆ A(c2) and B(c1) ⊆ B(c2). Throws on window mismatch.
bool leq(const Configuration& c1, const Configuration& c2);

// Counts of nearest neighbors of x in each state. Only in-window neighbors
// are counted (sites outside the window are permanently empty and never send
// births, so they contribute nothing to the dynamics); the counts sum to the
// number of in-window neighbors, 2d for interior sites. Throws if x is
// outside the window.
std::array<int, 4> neighbor_counts(const Configuration& c, SiteIndex x);

// One line per site "x1,...,xd:state" in index (row-major) order, preceded by
// a geometry header. Deterministic byte-for-byte.
std::string serialize(const Configuration& c);
Configuration parse_configuration(const std::string& text);

std::string coords_to_string(const Coords& c, int dim, char sep = ',');

}  // namespace tlcp
