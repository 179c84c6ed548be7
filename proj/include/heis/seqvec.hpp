#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace heis {

using Index = std::int64_t;

// Finitely supported real sequence x = sum_k x_k e_k, indices starting at 1.
// Entries are kept sorted by index with exact zeros dropped, so two SeqVecs
// holding the same sequence compare equal.
class SeqVec {
 public:
  using Entry = std::pair<Index, double>;

  SeqVec() = default;
  SeqVec(std::initializer_list<Entry> entries);

  // Entries may come in any order; repeated indices are summed.
  static SeqVec from_entries(std::vector<Entry> entries);
  // c * e_k
  static SeqVec basis(Index k, double c = 1.0);
  // Dense coefficients; dense[i] is the coefficient of e_{i+1}.
  static SeqVec from_dense(const std::vector<double>& dense);

  double operator[](Index k) const;
  void set(Index k, double value);

  const std::vector<Entry>& entries() const { return entries_; }
  std::vector<Index> support() const;
  // Largest index in the support, 0 for the zero sequence.
  Index max_index() const;
  std::size_t nnz() const { return entries_.size(); }
  bool is_zero() const { return entries_.empty(); }

  // Dense coefficients for indices 1..n; entries beyond n are dropped.
  std::vector<double> to_dense(Index n) const;
  // Keeps only indices <= n.
  SeqVec truncated(Index n) const;
  double max_abs() const;

  SeqVec& operator+=(const SeqVec& other);
  SeqVec& operator-=(const SeqVec& other);
  SeqVec& operator*=(double c);

  friend SeqVec operator+(SeqVec a, const SeqVec& b) { return a += b; }
  friend SeqVec operator-(SeqVec a, const SeqVec& b) { return a -= b; }
  friend SeqVec operator*(double c, SeqVec a) { return a *= c; }
  friend SeqVec operator*(SeqVec a, double c) { return a *= c; }
  friend SeqVec operator-(SeqVec a) { return a *= -1.0; }
  friend bool operator==(const SeqVec&, const SeqVec&) = default;

 private:
  void canonicalize();

  std::vector<Entry> entries_;
};

SeqVec add(const SeqVec& v, const SeqVec& w);
SeqVec scale(double c, const SeqVec& v);

// sum_k v_k w_k
double inner(const SeqVec& v, const SeqVec& w);
double norm(const SeqVec& v);

// Diagonal positive operator (Ax)_k = a_k x_k given by a closed-form rule,
// so indices of any size can be weighted without storage.
class WeightRule {
 public:
  using Fn = std::function<double(Index)>;

  WeightRule(Fn rule, std::string description);

  // a_k = k^{-q}
  static WeightRule power(double q);
  // a_k = 1/k
  static WeightRule inverse_index() { return power(1.0); }
  static WeightRule unit() { return power(0.0); }

  // Throws std::domain_error if the rule yields a non-positive weight.
  double operator()(Index k) const;
  const std::string& description() const { return description_; }
  // q when the rule is known to be a_k = k^{-q}.
  std::optional<double> power_exponent() const { return exponent_; }

 private:
  Fn rule_;
  std::string description_;
  std::optional<double> exponent_;
};

SeqVec apply_weight(const WeightRule& rule, const SeqVec& v);
// eta(v, w) = <Av, w>
double eta_inner(const WeightRule& rule, const SeqVec& v, const SeqVec& w);
double eta_norm(const WeightRule& rule, const SeqVec& v);

}  // namespace heis
