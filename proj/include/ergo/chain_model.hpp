#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/SparseCore>

namespace ergo {

class SingleBirthSpec;

/// Raised when a model or a request violates a precondition (bad rates,
/// target set outside a truncation, inadmissible rate parameter...).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ChainKind { continuous, discrete };

/// Index in the canonical enumeration. Index 0 is the root state.
using StateIndex = std::size_t;

struct Transition {
  StateIndex to;
  double rate;
};

using Row = std::vector<Transition>;

/// A countable-state chain given by a sparse row function.
///
/// For continuous chains `row(i)` lists the off-diagonal rates q_ij > 0 and
/// the diagonal is implied by conservativity. For discrete chains `row(i)`
/// lists the transition probabilities P_ij (the diagonal may appear) and
/// every row sums to one. Rows must be pure functions of `i`.
class GeneratorSpec {
 public:
  virtual ~GeneratorSpec() = default;

  virtual ChainKind kind() const { return ChainKind::continuous; }
  virtual Row row(StateIndex i) const = 0;
  virtual std::string id() const = 0;

  /// Number of states when the chain is finite.
  virtual std::optional<std::size_t> state_count() const { return std::nullopt; }

  /// Level used by the enumeration (|x| for lattice models).
  virtual std::size_t level(StateIndex i) const { return i; }

  /// Number of states on a level; 1 for chains on Z_+.
  virtual std::size_t level_size(std::size_t /*level*/) const { return 1; }

  virtual std::string label(StateIndex i) const { return std::to_string(i); }

  /// Non-null when the chain is a single birth process.
  virtual const SingleBirthSpec* single_birth() const { return nullptr; }

  /// q_i for continuous chains, 1 for discrete chains.
  double total_rate(StateIndex i) const;
};

using GeneratorPtr = std::shared_ptr<const GeneratorSpec>;

/// Throws ModelError if row i is not a valid conservative row.
void validate_row(const GeneratorSpec& spec, StateIndex i);

/// Finite chain given by explicit (i, j, rate) triplets.
class ExplicitGenerator final : public GeneratorSpec {
 public:
  struct Triplet {
    StateIndex from;
    StateIndex to;
    double rate;
  };

  ExplicitGenerator(std::size_t states, std::vector<Triplet> triplets,
                    ChainKind kind, std::string id = "explicit");

  ChainKind kind() const override { return kind_; }
  Row row(StateIndex i) const override;
  std::string id() const override { return id_; }
  std::optional<std::size_t> state_count() const override { return rows_.size(); }

 private:
  std::vector<Row> rows_;
  ChainKind kind_;
  std::string id_;
};

struct TargetSet {
  std::vector<StateIndex> members{0};

  TargetSet() = default;
  explicit TargetSet(std::vector<StateIndex> m);

  bool contains(StateIndex i) const;
  StateIndex max_member() const;
};

struct EnumeratedStates {
  std::vector<StateIndex> states;
  std::vector<std::string> labels;
  std::size_t levels_closed = 0;
  /// Set when the capacity ran out before the next level could be closed.
  std::optional<std::size_t> first_unenumerated_level;
  /// States of the prefix that are not reachable from 0 inside the prefix.
  std::vector<StateIndex> unreachable;
};

EnumeratedStates enumerate_states(const GeneratorSpec& spec, std::size_t capacity);

/// Jump chain: Pi_ij = q_ij / q_i off the diagonal, zero on it.
class EmbeddedKernel {
 public:
  explicit EmbeddedKernel(GeneratorPtr spec);

  Row row(StateIndex i) const;
  const GeneratorSpec& generator() const { return *spec_; }

 private:
  GeneratorPtr spec_;
};

EmbeddedKernel embedded_kernel(GeneratorPtr spec);

// Kinds of truncated systems.
struct OrdinarySource {};
/// Rung `order` of the moment ladder: g_i = order/q_i * x_i^(order-1) (discrete:
/// g_i = x_i^(order-1)). `previous[i]` is x_i^(order-1) for every
/// state i <= N, H states included.
struct LadderSource {
  int order = 1;
  std::vector<double> previous;
};
struct ExponentialSource {
  double lambda = 0.0;
};
using SystemSource = std::variant<OrdinarySource, LadderSource, ExponentialSource>;

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Finite affine problem x = A x + g over the states outside H with index
/// at most N. Mass that leaves the truncation is sent to H, so it never
/// reaches A. The H rows are kept separately (h_rows, h_const) so that the
/// return values at H are obtained by one affine application.
struct TruncatedSystem {
  std::size_t N = 0;
  std::vector<StateIndex> unknowns;
  /// position[i] is the unknown slot of state i, or -1 for states in H.
  std::vector<std::ptrdiff_t> position;
  SparseRowMatrix A;
  Eigen::VectorXd g;
  TargetSet H;
  SparseRowMatrix h_rows;
  Eigen::VectorXd h_const;
  std::string source_id;
  SystemSource source;

  std::size_t size() const { return unknowns.size(); }
};

TruncatedSystem build_truncated_system(const GeneratorSpec& spec, const TargetSet& H,
                                       std::size_t N, const SystemSource& source);

/// min_{i <= N} q_i, the admissibility bound for exponential systems.
double min_total_rate(const GeneratorSpec& spec, std::size_t N);

}  // namespace ergo
