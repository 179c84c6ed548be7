#include "heis/seqvec.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "compensated_sum.hpp"

namespace heis {

namespace {

void check_index(Index k) {
  if (k < 1) throw std::invalid_argument("sequence index must be >= 1, got " + std::to_string(k));
}

// Merges two sorted entry lists as a + sign * b, dropping exact zeros.
std::vector<SeqVec::Entry> merge(const std::vector<SeqVec::Entry>& a,
                                 const std::vector<SeqVec::Entry>& b, double sign) {
  std::vector<SeqVec::Entry> out;
  out.reserve(a.size() + b.size());
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      out.push_back(*ia++);
    } else if (ia == a.end() || ib->first < ia->first) {
      out.emplace_back(ib->first, sign * ib->second);
      ++ib;
    } else {
      double v = ia->second + sign * ib->second;
      if (v != 0.0) out.emplace_back(ia->first, v);
      ++ia;
      ++ib;
    }
  }
  return out;
}

}  // namespace

SeqVec::SeqVec(std::initializer_list<Entry> entries) : entries_(entries) { canonicalize(); }

SeqVec SeqVec::from_entries(std::vector<Entry> entries) {
  SeqVec v;
  v.entries_ = std::move(entries);
  v.canonicalize();
  return v;
}

SeqVec SeqVec::basis(Index k, double c) {
  check_index(k);
  SeqVec v;
  if (c != 0.0) v.entries_.emplace_back(k, c);
  return v;
}

SeqVec SeqVec::from_dense(const std::vector<double>& dense) {
  SeqVec v;
  for (std::size_t i = 0; i < dense.size(); ++i)
    if (dense[i] != 0.0) v.entries_.emplace_back(static_cast<Index>(i) + 1, dense[i]);
  return v;
}

void SeqVec::canonicalize() {
  for (const auto& [k, _] : entries_) check_index(k);
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const Entry& a, const Entry& b) { return a.first < b.first; });
  std::vector<Entry> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) {
    if (!out.empty() && out.back().first == e.first)
      out.back().second += e.second;
    else
      out.push_back(e);
  }
  std::erase_if(out, [](const Entry& e) { return e.second == 0.0; });
  entries_ = std::move(out);
}

double SeqVec::operator[](Index k) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                             [](const Entry& e, Index key) { return e.first < key; });
  return (it != entries_.end() && it->first == k) ? it->second : 0.0;
}

void SeqVec::set(Index k, double value) {
  check_index(k);
  auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                             [](const Entry& e, Index key) { return e.first < key; });
  if (it != entries_.end() && it->first == k) {
    if (value == 0.0)
      entries_.erase(it);
    else
      it->second = value;
  } else if (value != 0.0) {
    entries_.insert(it, Entry{k, value});
  }
}

std::vector<Index> SeqVec::support() const {
  std::vector<Index> s;
  s.reserve(entries_.size());
  for (const auto& [k, _] : entries_) s.push_back(k);
  return s;
}

Index SeqVec::max_index() const { return entries_.empty() ? 0 : entries_.back().first; }

std::vector<double> SeqVec::to_dense(Index n) const {
  std::vector<double> d(static_cast<std::size_t>(std::max<Index>(n, 0)), 0.0);
  for (const auto& [k, v] : entries_) {
    if (k > n) break;
    d[static_cast<std::size_t>(k - 1)] = v;
  }
  return d;
}

SeqVec SeqVec::truncated(Index n) const {
  SeqVec out;
  for (const auto& e : entries_) {
    if (e.first > n) break;
    out.entries_.push_back(e);
  }
  return out;
}

double SeqVec::max_abs() const {
  double m = 0.0;
  for (const auto& [_, v] : entries_) m = std::max(m, std::abs(v));
  return m;
}

SeqVec& SeqVec::operator+=(const SeqVec& other) {
  entries_ = merge(entries_, other.entries_, 1.0);
  return *this;
}

SeqVec& SeqVec::operator-=(const SeqVec& other) {
  entries_ = merge(entries_, other.entries_, -1.0);
  return *this;
}

SeqVec& SeqVec::operator*=(double c) {
  if (c == 0.0) {
    entries_.clear();
    return *this;
  }
  for (auto& e : entries_) e.second *= c;
  // underflow can still produce zeros
  std::erase_if(entries_, [](const Entry& e) { return e.second == 0.0; });
  return *this;
}

SeqVec add(const SeqVec& v, const SeqVec& w) { return v + w; }
SeqVec scale(double c, const SeqVec& v) { return c * v; }

double inner(const SeqVec& v, const SeqVec& w) {
  const auto& a = v.entries();
  const auto& b = w.entries();
  CompensatedSum sum;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first)
      ++ia;
    else if (ib->first < ia->first)
      ++ib;
    else
      sum.add((ia++)->second * (ib++)->second);
  }
  return sum.value();
}

double norm(const SeqVec& v) { return std::sqrt(inner(v, v)); }

WeightRule::WeightRule(Fn rule, std::string description)
    : rule_(std::move(rule)), description_(std::move(description)) {
  if (!rule_) throw std::invalid_argument("weight rule must be callable");
}

WeightRule WeightRule::power(double q) {
  WeightRule rule = q == 1.0   ? WeightRule([](Index k) { return 1.0 / static_cast<double>(k); }, "a_k = 1/k")
                    : q == 0.0 ? WeightRule([](Index) { return 1.0; }, "a_k = 1")
                               : WeightRule([q](Index k) { return std::pow(static_cast<double>(k), -q); },
                                            "a_k = k^-" + std::to_string(q));
  rule.exponent_ = q;
  return rule;
}

double WeightRule::operator()(Index k) const {
  check_index(k);
  double a = rule_(k);
  if (!(a > 0.0) || !std::isfinite(a))
    throw std::domain_error("weight rule '" + description_ + "' is not positive at index " +
                            std::to_string(k));
  return a;
}

SeqVec apply_weight(const WeightRule& rule, const SeqVec& v) {
  std::vector<SeqVec::Entry> out;
  out.reserve(v.nnz());
  for (const auto& [k, x] : v.entries()) out.emplace_back(k, rule(k) * x);
  return SeqVec::from_entries(std::move(out));
}

double eta_inner(const WeightRule& rule, const SeqVec& v, const SeqVec& w) {
  const auto& a = v.entries();
  const auto& b = w.entries();
  CompensatedSum sum;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      sum.add(rule(ia->first) * ia->second * ib->second);
      ++ia;
      ++ib;
    }
  }
  return sum.value();
}

double eta_norm(const WeightRule& rule, const SeqVec& v) {
  return std::sqrt(eta_inner(rule, v, v));
}

}  // namespace heis
