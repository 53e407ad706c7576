#include "ergo/chain_model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

namespace ergo {

namespace {

constexpr double kRateTol = 1e-12;

double row_sum(const Row& r) {
  double s = 0.0;
  for (const auto& t : r) s += t.rate;
  return s;
}

}  // namespace

double GeneratorSpec::total_rate(StateIndex i) const {
  if (kind() == ChainKind::discrete) return 1.0;
  return row_sum(row(i));
}

void validate_row(const GeneratorSpec& spec, StateIndex i) {
  const Row r = spec.row(i);
  for (const auto& t : r) {
    if (!std::isfinite(t.rate) || t.rate < 0.0) {
      std::ostringstream os;
      os << "invalid rate " << t.rate << " at (" << i << "," << t.to << ")";
      throw ModelError(os.str());
    }
    if (spec.kind() == ChainKind::continuous && t.to == i)
      throw ModelError("continuous row " + std::to_string(i) + " lists a diagonal entry");
  }
  const double s = row_sum(r);
  if (spec.kind() == ChainKind::discrete) {
    if (std::abs(s - 1.0) > kRateTol)
      throw ModelError("discrete row " + std::to_string(i) + " does not sum to 1");
  } else if (!(s > 0.0)) {
    throw ModelError("state " + std::to_string(i) + " has zero total rate");
  }
}

ExplicitGenerator::ExplicitGenerator(std::size_t states, std::vector<Triplet> triplets,
                                     ChainKind kind, std::string id)
    : rows_(states), kind_(kind), id_(std::move(id)) {
  if (states == 0) throw ModelError("explicit model needs at least one state");
  for (const auto& t : triplets) {
    if (t.from >= states || t.to >= states)
      throw ModelError("triplet index outside the state range");
    if (t.rate == 0.0) continue;
    if (kind == ChainKind::continuous && t.from == t.to) continue;  // implied diagonal
    auto& r = rows_[t.from];
    auto it = std::find_if(r.begin(), r.end(), [&](const Transition& x) { return x.to == t.to; });
    if (it == r.end()) r.push_back({t.to, t.rate}); else it->rate += t.rate;
  }
  for (auto& r : rows_)
    std::sort(r.begin(), r.end(), [](const Transition& a, const Transition& b) { return a.to < b.to; });
  for (std::size_t i = 0; i < states; ++i) validate_row(*this, i);
}

Row ExplicitGenerator::row(StateIndex i) const {
  if (i >= rows_.size()) throw ModelError("state " + std::to_string(i) + " outside explicit model");
  return rows_[i];
}

TargetSet::TargetSet(std::vector<StateIndex> m) : members(std::move(m)) {
  if (members.empty()) throw ModelError("target set must be nonempty");
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
}

bool TargetSet::contains(StateIndex i) const {
  return std::binary_search(members.begin(), members.end(), i);
}

StateIndex TargetSet::max_member() const { return members.back(); }

EnumeratedStates enumerate_states(const GeneratorSpec& spec, std::size_t capacity) {
  if (capacity < 1) throw ModelError("capacity must be >= 1");
  EnumeratedStates out;
  std::size_t limit = capacity;
  if (auto n = spec.state_count()) limit = std::min(limit, *n);

  // keep whole levels only
  std::size_t count = 0, level = 0;
  while (true) {
    if (auto n = spec.state_count(); n && count >= *n) break;
    const std::size_t sz = spec.level_size(level);
    if (count + sz > limit) {
      out.first_unenumerated_level = level;
      break;
    }
    count += sz;
    ++level;
  }
  out.levels_closed = level;
  out.states.resize(count);
  out.labels.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.states[i] = i;
    out.labels[i] = spec.label(i);
  }

  std::vector<char> seen(count, 0);
  std::deque<StateIndex> queue;
  if (count > 0) {
    seen[0] = 1;
    queue.push_back(0);
  }
  while (!queue.empty()) {
    StateIndex i = queue.front();
    queue.pop_front();
    for (const auto& t : spec.row(i)) {
      if (t.to < count && t.rate > 0.0 && !seen[t.to]) {
        seen[t.to] = 1;
        queue.push_back(t.to);
      }
    }
  }
  for (std::size_t i = 0; i < count; ++i)
    if (!seen[i]) out.unreachable.push_back(i);
  return out;
}

EmbeddedKernel::EmbeddedKernel(GeneratorPtr spec) : spec_(std::move(spec)) {
  if (!spec_) throw ModelError("null generator");
  if (spec_->kind() != ChainKind::continuous)
    throw ModelError("embedded kernel needs a continuous-time generator");
}

Row EmbeddedKernel::row(StateIndex i) const {
  Row r = spec_->row(i);
  const double q = row_sum(r);
  if (!(q > 0.0)) throw ModelError("state " + std::to_string(i) + " is absorbing");
  for (auto& t : r) t.rate /= q;
  return r;
}

EmbeddedKernel embedded_kernel(GeneratorPtr spec) { return EmbeddedKernel(std::move(spec)); }

double min_total_rate(const GeneratorSpec& spec, std::size_t N) {
  double m = std::numeric_limits<double>::infinity();
  for (StateIndex i = 0; i <= N; ++i) m = std::min(m, spec.total_rate(i));
  return m;
}

TruncatedSystem build_truncated_system(const GeneratorSpec& spec, const TargetSet& H,
                                       std::size_t N, const SystemSource& source) {
  if (H.max_member() > N) throw ModelError("target set is not inside the truncation");
  if (auto n = spec.state_count(); n && N >= *n)
    throw ModelError("truncation level exceeds the finite state space");
  const bool discrete = spec.kind() == ChainKind::discrete;

  double lambda = 0.0;
  int order = 0;
  const std::vector<double>* prev = nullptr;
  if (auto* e = std::get_if<ExponentialSource>(&source)) {
    if (discrete) throw ModelError("exponential systems are defined for continuous chains only");
    lambda = e->lambda;
    if (!(lambda > 0.0)) throw ModelError("exponential rate must be positive");
  } else if (auto* l = std::get_if<LadderSource>(&source)) {
    order = l->order;
    prev = &l->previous;
    if (order < 1) throw ModelError("ladder order must be >= 1");
    if (prev->size() < N + 1) throw ModelError("ladder source shorter than the truncation");
  }

  TruncatedSystem sys;
  sys.N = N;
  sys.H = H;
  sys.source = source;
  sys.source_id = spec.id();
  sys.position.assign(N + 1, -1);
  for (StateIndex i = 0; i <= N; ++i) {
    if (!H.contains(i)) {
      sys.position[i] = static_cast<std::ptrdiff_t>(sys.unknowns.size());
      sys.unknowns.push_back(i);
    }
  }

  // one row of the system: (coefficients on unknowns, constant)
  auto emit = [&](StateIndex i, std::vector<Eigen::Triplet<double>>& trip, std::size_t out_row) {
    const Row r = spec.row(i);
    const double q = discrete ? 1.0 : row_sum(r);
    if (!(q > 0.0)) throw ModelError("state " + std::to_string(i) + " is absorbing");
    if (lambda >= q) {
      std::ostringstream os;
      os << "lambda " << lambda << " is not below q_" << i << " = " << q;
      throw ModelError(os.str());
    }
    const double scale = (lambda > 0.0) ? q / (q - lambda) : 1.0;
    for (const auto& t : r) {
      if (t.to > N || H.contains(t.to)) continue;
      trip.emplace_back(static_cast<int>(out_row), static_cast<int>(sys.position[t.to]),
                        scale * t.rate / q);
    }
    if (lambda > 0.0) return 1.0 / (q - lambda);
    if (prev) {
      const double src = (*prev)[i];
      return discrete ? src : order * src / q;
    }
    return 1.0 / q;
  };

  const std::size_t n = sys.unknowns.size();
  std::vector<Eigen::Triplet<double>> trip;
  sys.g.resize(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) sys.g[k] = emit(sys.unknowns[k], trip, k);
  sys.A.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  sys.A.setFromTriplets(trip.begin(), trip.end());

  std::vector<Eigen::Triplet<double>> htrip;
  const std::size_t h = H.members.size();
  sys.h_const.resize(static_cast<Eigen::Index>(h));
  for (std::size_t k = 0; k < h; ++k) sys.h_const[k] = emit(H.members[k], htrip, k);
  sys.h_rows.resize(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(n));
  sys.h_rows.setFromTriplets(htrip.begin(), htrip.end());
  return sys;
}

}  // namespace ergo
