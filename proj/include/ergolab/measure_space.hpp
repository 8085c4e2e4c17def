#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ergolab/dyadic.hpp"

namespace ergolab {

/// A finite measure space: the circle [0,1) with Lebesgue measure, a finite
/// atomic space, or the product Z_n x (atomic space). Product atoms are
/// indexed i * inner_size + j, where i runs over the cyclic factor.
class MeasureSpace {
 public:
  enum class Kind { circle, discrete, product };

  static std::shared_ptr<const MeasureSpace> circle();
  /// Weights must be strictly positive. When given, total_mass must match the
  /// weight sum to 1e-12.
  static std::shared_ptr<const MeasureSpace> discrete(std::vector<double> weights,
                                                      double total_mass = 0.0);
  static std::shared_ptr<const MeasureSpace> uniform(std::size_t atoms);
  /// Cyclic factor Z_n carries uniform weight 1/n; atom (i,j) weighs inner[j]/n.
  static std::shared_ptr<const MeasureSpace> product(std::size_t cyclic,
                                                     std::vector<double> inner_weights);

  Kind kind() const { return kind_; }
  bool is_circle() const { return kind_ == Kind::circle; }
  bool is_atomic() const { return kind_ != Kind::circle; }

  std::size_t atoms() const { return weights_.size(); }
  double weight(std::size_t atom) const { return weights_.at(atom); }
  std::span<const double> weights() const { return weights_; }
  double total_mass() const { return total_mass_; }
  const std::string& label(std::size_t atom) const { return labels_.at(atom); }

  std::size_t cyclic_size() const { return cyclic_; }
  std::size_t inner_size() const { return inner_; }

  /// Largest filtration level for which every block partition cell is nonempty.
  int max_partition_level() const;

  friend bool operator==(const MeasureSpace&, const MeasureSpace&) = default;

 private:
  MeasureSpace() = default;

  Kind kind_ = Kind::circle;
  std::vector<double> weights_;
  std::vector<std::string> labels_;
  double total_mass_ = 1.0;
  std::size_t cyclic_ = 0;
  std::size_t inner_ = 0;
};

using SpacePtr = std::shared_ptr<const MeasureSpace>;

bool same_space(const SpacePtr& a, const SpacePtr& b);
void require_same_space(const SpacePtr& a, const SpacePtr& b, const char* what);

/// Finite partition (equivalently a finite sigma-algebra). Circle cells are
/// half-open intervals [a,b) with dyadic endpoints; atomic cells are disjoint
/// sets of atoms. Cells of zero measure are rejected at construction.
class Partition {
 public:
  static Partition circle_intervals(std::vector<Dyadic> edges);
  static Partition atom_cells(SpacePtr space, std::vector<std::size_t> cell_of_atom);
  static Partition trivial(SpacePtr space);

  const SpacePtr& space() const { return space_; }
  std::size_t cells() const { return measures_.size(); }
  double cell_measure(std::size_t cell) const { return measures_.at(cell); }
  bool is_trivial() const { return cells() == 1; }

  std::span<const Dyadic> edges() const { return edges_; }
  double cell_left(std::size_t cell) const { return edge_values_.at(cell); }
  double cell_right(std::size_t cell) const { return edge_values_.at(cell + 1); }
  std::span<const double> edge_values() const { return edge_values_; }
  std::size_t cell_of_point(double x) const;

  std::size_t cell_of_atom(std::size_t atom) const { return cell_of_atom_.at(atom); }
  std::span<const std::size_t> atoms_in_cell(std::size_t cell) const { return members_.at(cell); }

  /// True when every cell of *this lies inside a cell of `coarser`.
  bool refines(const Partition& coarser) const;

  friend bool operator==(const Partition& a, const Partition& b);

 private:
  Partition() = default;

  SpacePtr space_;
  std::vector<Dyadic> edges_;
  std::vector<double> edge_values_;
  std::vector<std::size_t> cell_of_atom_;
  std::vector<std::vector<std::size_t>> members_;
  std::vector<double> measures_;
};

/// 2^level equal half-open cells of the circle; level <= 30.
Partition make_dyadic_partition(int level);

/// Level-k partition of any supported space: dyadic intervals on the circle,
/// 2^k consecutive blocks of atoms on a discrete space, and on a product space
/// Z_n x B the sets Z_n x (block of B), so that shifts of the cyclic factor
/// commute with conditioning.
Partition make_level_partition(const SpacePtr& space, int level);

/// Monotone family s -> F_s built from level partitions.
/// increasing: level(s) = min(floor(s), max_level), F_infinity = finest level.
/// decreasing: level(s) = max(max_level - floor(s), 0), limit = trivial.
class Filtration {
 public:
  enum class Direction { increasing, decreasing };

  Filtration(SpacePtr space, Direction direction, int max_level);

  const SpacePtr& space() const { return space_; }
  Direction direction() const { return direction_; }
  bool increasing() const { return direction_ == Direction::increasing; }
  int max_level() const { return max_level_; }

  int level(double s) const;
  const Partition& at(double s) const { return levels_[static_cast<std::size_t>(level(s))]; }
  const Partition& at_level(int level) const { return levels_.at(static_cast<std::size_t>(level)); }
  /// The limit sigma-algebra: finest level when increasing, trivial when decreasing.
  const Partition& terminal() const;

 private:
  SpacePtr space_;
  Direction direction_;
  int max_level_;
  std::vector<Partition> levels_;
};

std::string_view to_string(Filtration::Direction direction);

}  // namespace ergolab
