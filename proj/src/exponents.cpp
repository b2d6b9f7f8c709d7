#include "modbanach/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "modbanach/error.hpp"

namespace modbanach {

ExponentSequence ExponentSequence::constant(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("ExponentSequence: constant exponent must lie in [1, inf)");
  return ExponentSequence(Constant{p});
}

ExponentSequence ExponentSequence::list(std::vector<double> values) {
  if (values.empty()) throw DomainError("ExponentSequence: empty exponent list");
  for (double p : values)
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("ExponentSequence: listed exponent outside [1, inf)");
  return ExponentSequence(Explicit{std::move(values)});
}

ExponentSequence ExponentSequence::power(double a, double s) {
  if (!std::isfinite(a) || !(s > 0.0)) throw DomainError("ExponentSequence: power family needs finite a and s > 0");
  return ExponentSequence(Formula{Family::power, a, 0.0, s});
}

ExponentSequence ExponentSequence::log(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("ExponentSequence: log family needs finite a, b");
  return ExponentSequence(Formula{Family::log, a, b, 0.0});
}

ExponentSequence ExponentSequence::loglog(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("ExponentSequence: loglog family needs finite a, b");
  return ExponentSequence(Formula{Family::loglog, a, b, 0.0});
}

double ExponentSequence::at(std::size_t n) const {
  if (n == 0) throw DomainError("ExponentSequence: indices start at 1");
  const double p = std::visit(
      [n](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return k.p;
        } else if constexpr (std::is_same_v<T, Explicit>) {
          if (n > k.values.size())
            throw DomainError("ExponentSequence: index " + std::to_string(n) + " past explicit list");
          return k.values[n - 1];
        } else {
          const double x = static_cast<double>(n);
          double denom = 0.0;
          switch (k.family) {
            case Family::power: denom = std::pow(x, k.s); break;
            case Family::log: denom = std::log(x + k.b); break;
            case Family::loglog: denom = std::log(std::log(x + k.b)); break;
          }
          if (k.a == 0.0) return 2.0;
          if (!(denom > 0.0)) throw DomainError("ExponentSequence: formula undefined at n=" + std::to_string(n));
          return 2.0 + k.a / denom;
        }
      },
      kind_);
  if (!std::isfinite(p) || p < 1.0)
    throw DomainError("ExponentSequence: p_" + std::to_string(n) + " = " + std::to_string(p) + " outside [1, inf)");
  return p;
}

double ExponentSequence::sup(std::size_t horizon) const {
  if (const auto* c = std::get_if<Constant>(&kind_)) return c->p;
  if (const auto* e = std::get_if<Explicit>(&kind_)) return *std::max_element(e->values.begin(), e->values.end());
  double best = 2.0;
  for (std::size_t n = 1; n <= horizon; ++n) best = std::max(best, at(n));
  return best;
}

double ExponentSequence::inf(std::size_t horizon) const {
  if (const auto* c = std::get_if<Constant>(&kind_)) return c->p;
  if (const auto* e = std::get_if<Explicit>(&kind_)) return *std::min_element(e->values.begin(), e->values.end());
  double best = 2.0;
  for (std::size_t n = 1; n <= horizon; ++n) best = std::min(best, at(n));
  return best;
}

std::size_t ExponentSequence::length() const {
  if (const auto* e = std::get_if<Explicit>(&kind_)) return e->values.size();
  return static_cast<std::size_t>(-1);
}

std::string ExponentSequence::describe() const {
  std::ostringstream os;
  std::visit(
      [&os](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Constant>) {
          os << "constant(" << k.p << ")";
        } else if constexpr (std::is_same_v<T, Explicit>) {
          os << "list[" << k.values.size() << "]";
        } else {
          switch (k.family) {
            case Family::power: os << "2+" << k.a << "/n^" << k.s; break;
            case Family::log: os << "2+" << k.a << "/log(n+" << k.b << ")"; break;
            case Family::loglog: os << "2+" << k.a << "/log(log(n+" << k.b << "))"; break;
          }
        }
      },
      kind_);
  return os.str();
}

BlockSequence BlockSequence::scalar() { return BlockSequence(Uniform{FiniteNormedSpace::lp(1.0, 1)}); }

BlockSequence BlockSequence::uniform(FiniteNormedSpace space) { return BlockSequence(Uniform{std::move(space)}); }

BlockSequence BlockSequence::list(std::vector<FiniteNormedSpace> spaces) {
  if (spaces.empty()) throw DomainError("BlockSequence: empty block list");
  return BlockSequence(List{std::move(spaces)});
}

BlockSequence BlockSequence::matching_lp(std::size_t d) {
  if (d == 0) throw DomainError("BlockSequence: block dimension must be at least 1");
  return BlockSequence(MatchingLp{d});
}

BlockSequence BlockSequence::matching_schatten(std::size_t side) {
  if (side == 0) throw DomainError("BlockSequence: block side must be at least 1");
  return BlockSequence(MatchingSchatten{side});
}

bool BlockSequence::is_scalar() const {
  const auto* u = std::get_if<Uniform>(&kind_);
  return u && u->space.dim() == 1;
}

FiniteNormedSpace BlockSequence::at(std::size_t n, const ExponentSequence& exponents) const {
  if (n == 0) throw DomainError("BlockSequence: indices start at 1");
  return std::visit(
      [&](const auto& k) -> FiniteNormedSpace {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Uniform>) {
          return k.space;
        } else if constexpr (std::is_same_v<T, List>) {
          if (n > k.spaces.size()) throw DomainError("BlockSequence: block " + std::to_string(n) + " is not defined");
          return k.spaces[n - 1];
        } else if constexpr (std::is_same_v<T, MatchingLp>) {
          return FiniteNormedSpace::lp(exponents.at(n), k.d);
        } else {
          return FiniteNormedSpace::schatten(exponents.at(n), k.side);
        }
      },
      kind_);
}

BlockVector::BlockVector(std::vector<Entry> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].first == 0) throw DomainError("BlockVector: block indices start at 1");
    if (i > 0 && entries_[i].first == entries_[i - 1].first)
      throw DomainError("BlockVector: repeated block index " + std::to_string(entries_[i].first));
  }
}

bool BlockVector::contains(std::size_t n) const { return find(n) != nullptr; }

const Vector* BlockVector::find(std::size_t n) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), n,
                             [](const Entry& e, std::size_t idx) { return e.first < idx; });
  return (it != entries_.end() && it->first == n) ? &it->second : nullptr;
}

std::size_t BlockVector::min_index() const { return entries_.empty() ? 0 : entries_.front().first; }

void BlockVector::validate(const NakanoSpec& spec) const {
  for (const auto& [n, v] : entries_) {
    const auto block = spec.block(n);
    if (v.dim() != block.dim())
      throw DimensionError("BlockVector: block " + std::to_string(n) + " has dimension " + std::to_string(v.dim()) +
                           ", expected " + std::to_string(block.dim()));
  }
}

bool BlockVector::disjoint_from(const BlockVector& other) const {
  for (const auto& e : entries_)
    if (other.contains(e.first)) return false;
  return true;
}

void BlockVector::combine(const BlockVector& other, double sign) {
  std::vector<Entry> merged;
  merged.reserve(entries_.size() + other.entries_.size());
  std::size_t i = 0, j = 0;
  while (i < entries_.size() || j < other.entries_.size()) {
    if (j == other.entries_.size() || (i < entries_.size() && entries_[i].first < other.entries_[j].first)) {
      merged.push_back(std::move(entries_[i++]));
    } else if (i == entries_.size() || other.entries_[j].first < entries_[i].first) {
      merged.emplace_back(other.entries_[j].first, sign * other.entries_[j].second);
      ++j;
    } else {
      Vector v = std::move(entries_[i].second);
      if (sign > 0) v += other.entries_[j].second;
      else v -= other.entries_[j].second;
      merged.emplace_back(entries_[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  entries_ = std::move(merged);
}

BlockVector& BlockVector::operator+=(const BlockVector& other) {
  combine(other, 1.0);
  return *this;
}

BlockVector& BlockVector::operator-=(const BlockVector& other) {
  combine(other, -1.0);
  return *this;
}

BlockVector& BlockVector::operator*=(double s) {
  for (auto& e : entries_) e.second *= s;
  return *this;
}

}  // namespace modbanach
