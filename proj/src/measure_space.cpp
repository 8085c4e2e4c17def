#include "ergolab/measure_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ergolab {

namespace {

constexpr double kMassTolerance = 1e-12;

int floor_log2(std::size_t n) {
  int k = 0;
  while ((std::size_t{1} << (k + 1)) <= n) ++k;
  return k;
}

}  // namespace

SpacePtr MeasureSpace::circle() {
  static const SpacePtr instance = [] {
    auto* space = new MeasureSpace();
    space->kind_ = Kind::circle;
    space->total_mass_ = 1.0;
    return SpacePtr(space);
  }();
  return instance;
}

SpacePtr MeasureSpace::discrete(std::vector<double> weights, double total_mass) {
  if (weights.empty()) throw std::invalid_argument("discrete space needs at least one atom");
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw std::invalid_argument("atom " + std::to_string(i) + " has non-positive weight");
    }
  }
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (total_mass > 0.0 && std::abs(sum - total_mass) > kMassTolerance) {
    throw std::invalid_argument("atom weights sum to " + std::to_string(sum) +
                                ", declared total mass is " + std::to_string(total_mass));
  }
  auto* space = new MeasureSpace();
  space->kind_ = Kind::discrete;
  space->total_mass_ = total_mass > 0.0 ? total_mass : sum;
  space->labels_.reserve(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) space->labels_.push_back("a" + std::to_string(i));
  space->weights_ = std::move(weights);
  return SpacePtr(space);
}

SpacePtr MeasureSpace::uniform(std::size_t atoms) {
  if (atoms == 0) throw std::invalid_argument("discrete space needs at least one atom");
  return discrete(std::vector<double>(atoms, 1.0 / static_cast<double>(atoms)), 1.0);
}

SpacePtr MeasureSpace::product(std::size_t cyclic, std::vector<double> inner_weights) {
  if (cyclic == 0 || inner_weights.empty()) {
    throw std::invalid_argument("product space factors must be nonempty");
  }
  for (std::size_t j = 0; j < inner_weights.size(); ++j) {
    if (!(inner_weights[j] > 0.0)) {
      throw std::invalid_argument("inner atom " + std::to_string(j) + " has non-positive weight");
    }
  }
  auto* space = new MeasureSpace();
  space->kind_ = Kind::product;
  space->cyclic_ = cyclic;
  space->inner_ = inner_weights.size();
  const double cyclic_weight = 1.0 / static_cast<double>(cyclic);
  for (std::size_t i = 0; i < cyclic; ++i) {
    for (std::size_t j = 0; j < inner_weights.size(); ++j) {
      space->weights_.push_back(cyclic_weight * inner_weights[j]);
      space->labels_.push_back("(" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
  space->total_mass_ = std::accumulate(inner_weights.begin(), inner_weights.end(), 0.0);
  return SpacePtr(space);
}

int MeasureSpace::max_partition_level() const {
  switch (kind_) {
    case Kind::circle: return Dyadic::kMaxExponent;
    case Kind::discrete: return floor_log2(weights_.size());
    case Kind::product: return floor_log2(inner_);
  }
  return 0;
}

bool same_space(const SpacePtr& a, const SpacePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

void require_same_space(const SpacePtr& a, const SpacePtr& b, const char* what) {
  if (!same_space(a, b)) throw std::invalid_argument(std::string(what) + ": operands live on different spaces");
}

// ---------------------------------------------------------------------------

Partition Partition::circle_intervals(std::vector<Dyadic> edges) {
  if (edges.size() < 2 || edges.front() != Dyadic(0, 0) || edges.back() != Dyadic(1, 0)) {
    throw std::invalid_argument("circle partition must start at 0 and end at 1");
  }
  Partition part;
  part.space_ = MeasureSpace::circle();
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i] < edges[i + 1])) {
      throw std::invalid_argument("circle partition edges must be strictly increasing (cell " +
                                  std::to_string(i) + " is empty)");
    }
  }
  part.edge_values_.reserve(edges.size());
  for (const auto& e : edges) part.edge_values_.push_back(e.to_double());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    part.measures_.push_back(part.edge_values_[i + 1] - part.edge_values_[i]);
  }
  part.edges_ = std::move(edges);
  return part;
}

Partition Partition::atom_cells(SpacePtr space, std::vector<std::size_t> cell_of_atom) {
  if (!space || space->is_circle()) throw std::invalid_argument("atom partition needs an atomic space");
  if (cell_of_atom.size() != space->atoms()) {
    throw std::invalid_argument("cell assignment size does not match atom count");
  }
  std::size_t cells = 0;
  for (auto c : cell_of_atom) cells = std::max(cells, c + 1);
  Partition part;
  part.members_.resize(cells);
  part.measures_.assign(cells, 0.0);
  for (std::size_t a = 0; a < cell_of_atom.size(); ++a) {
    part.members_[cell_of_atom[a]].push_back(a);
    part.measures_[cell_of_atom[a]] += space->weight(a);
  }
  for (std::size_t c = 0; c < cells; ++c) {
    if (part.members_[c].empty()) {
      throw std::invalid_argument("partition cell " + std::to_string(c) + " has zero measure");
    }
  }
  part.space_ = std::move(space);
  part.cell_of_atom_ = std::move(cell_of_atom);
  return part;
}

Partition Partition::trivial(SpacePtr space) {
  if (!space) throw std::invalid_argument("null space");
  if (space->is_circle()) return make_dyadic_partition(0);
  const std::size_t n = space->atoms();
  return atom_cells(std::move(space), std::vector<std::size_t>(n, 0));
}

std::size_t Partition::cell_of_point(double x) const {
  if (!space_->is_circle()) throw std::logic_error("cell_of_point on an atomic partition");
  x -= std::floor(x);
  auto it = std::upper_bound(edge_values_.begin(), edge_values_.end(), x);
  std::size_t idx = static_cast<std::size_t>(it - edge_values_.begin());
  idx = idx == 0 ? 0 : idx - 1;
  return std::min(idx, cells() - 1);
}

bool Partition::refines(const Partition& coarser) const {
  if (!same_space(space_, coarser.space_)) return false;
  if (space_->is_circle()) {
    // Every coarse edge must be a fine edge.
    for (const auto& e : coarser.edges_) {
      if (!std::binary_search(edges_.begin(), edges_.end(), e)) return false;
    }
    return true;
  }
  for (const auto& cell : members_) {
    const std::size_t target = coarser.cell_of_atom_[cell.front()];
    for (auto a : cell) {
      if (coarser.cell_of_atom_[a] != target) return false;
    }
  }
  return true;
}

bool operator==(const Partition& a, const Partition& b) {
  if (!same_space(a.space_, b.space_)) return false;
  if (a.space_->is_circle()) return a.edges_ == b.edges_;
  return a.refines(b) && b.refines(a);
}

Partition make_dyadic_partition(int level) {
  if (level < 0 || level > Dyadic::kMaxExponent) {
    throw std::invalid_argument("dyadic level " + std::to_string(level) + " outside [0, 30]");
  }
  const std::int64_t n = std::int64_t{1} << level;
  std::vector<Dyadic> edges;
  edges.reserve(static_cast<std::size_t>(n) + 1);
  for (std::int64_t k = 0; k <= n; ++k) edges.emplace_back(k, level);
  return Partition::circle_intervals(std::move(edges));
}

Partition make_level_partition(const SpacePtr& space, int level) {
  if (!space) throw std::invalid_argument("null space");
  if (level < 0 || level > space->max_partition_level()) {
    throw std::invalid_argument("partition level " + std::to_string(level) +
                                " exceeds the space's maximum " +
                                std::to_string(space->max_partition_level()));
  }
  if (space->is_circle()) return make_dyadic_partition(level);
  const std::size_t blocks = std::size_t{1} << level;
  std::vector<std::size_t> cell(space->atoms());
  if (space->kind() == MeasureSpace::Kind::discrete) {
    const std::size_t n = space->atoms();
    for (std::size_t a = 0; a < n; ++a) cell[a] = a * blocks / n;
  } else {
    const std::size_t m = space->inner_size();
    for (std::size_t a = 0; a < space->atoms(); ++a) cell[a] = (a % m) * blocks / m;
  }
  return Partition::atom_cells(space, std::move(cell));
}

// ---------------------------------------------------------------------------

Filtration::Filtration(SpacePtr space, Direction direction, int max_level)
    : space_(std::move(space)), direction_(direction), max_level_(max_level) {
  if (max_level < 0) throw std::invalid_argument("filtration max_level must be nonnegative");
  levels_.reserve(static_cast<std::size_t>(max_level) + 1);
  for (int k = 0; k <= max_level; ++k) levels_.push_back(make_level_partition(space_, k));
}

int Filtration::level(double s) const {
  if (!(s >= 0.0)) throw std::invalid_argument("filtration parameter must be nonnegative");
  const double fl = std::floor(s);
  const int steps = fl >= max_level_ ? max_level_ : static_cast<int>(fl);
  return increasing() ? steps : max_level_ - steps;
}

const Partition& Filtration::terminal() const {
  return increasing() ? levels_.back() : levels_.front();
}

std::string_view to_string(Filtration::Direction direction) {
  return direction == Filtration::Direction::increasing ? "increasing" : "decreasing";
}

}  // namespace ergolab
