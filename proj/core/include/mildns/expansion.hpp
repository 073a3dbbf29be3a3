// Copyright 2026 The mildns Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mildns/semigroup.hpp"

namespace mildns {

enum class Leaf { vL, v, w, wbar };
std::string to_string(Leaf leaf);

class TermNode;
using TermPtr = std::shared_ptr<const TermNode>;

/// Binary tree of B applications over the leaves vL, v, w, wbar.
///
/// Trees are immutable and always canonical: the children of B are ordered
/// by (depth, key), so two trees are equal iff their keys are equal. The key
/// is the S-expression, e.g. "(B vL (B w v))".
class TermNode {
 public:
  static TermPtr leaf(Leaf leaf);
  static TermPtr B(TermPtr a, TermPtr b);

  bool is_leaf() const { return !left_; }
  Leaf leaf_kind() const { return leaf_; }
  const TermPtr& left() const { return left_; }
  const TermPtr& right() const { return right_; }
  const std::string& key() const { return key_; }
  int depth() const { return depth_; }
  /// Number of leaves of the given kind.
  int count(Leaf leaf) const { return counts_[static_cast<int>(leaf)]; }

 private:
  TermNode() = default;

  Leaf leaf_ = Leaf::v;
  TermPtr left_;
  TermPtr right_;
  std::string key_;
  int depth_ = 0;
  int counts_[4] = {0, 0, 0, 0};
};

/// Total order used for canonical child placement.
bool term_less(const TermNode& a, const TermNode& b);

/// Parses an S-expression produced by TermNode::key().
TermPtr parse_term(const std::string& text);

/// Integer combination of distinct canonical trees.
class FormalSum {
 public:
  struct Entry {
    std::int64_t coeff;
    TermPtr tree;
  };

  void add(const TermPtr& tree, std::int64_t coeff);
  void add(const FormalSum& other, std::int64_t factor = 1);

  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  /// Coefficient of a tree given by its key (0 if absent).
  std::int64_t coeff(const std::string& key) const;
  /// Entries in canonical (depth, key) order.
  std::vector<Entry> entries() const;
  const std::map<std::string, Entry>& by_key() const { return terms_; }

  friend bool operator==(const FormalSum& a, const FormalSum& b);

 private:
  std::map<std::string, Entry> terms_;
};

/// Replaces every v leaf of every tree by vL + B(v,v) + B(w,v) + B(wbar,v)
/// and expands bilinearly.
FormalSum substitute_v(const FormalSum& sum);

struct DecompositionResult {
  int N = 2;
  FormalSum H;
  FormalSum W;
  FormalSum Z;
};

inline constexpr int kMaxExpansionOrder = 5;

/// H_N, W_N, Z_N for 2 <= N <= kMaxExpansionOrder. Level N+1 substitutes
/// into the Z-terms of level N; new terms without v or w go to H, terms with
/// a w leaf go to W, the rest stay in Z. Level 5 already holds ~9500 terms;
/// level 6 does not fit in a few GB of memory.
DecompositionResult expand(int N);

/// One line per term: "<bucket> <coeff> <sexpr>", buckets H, W, Z in order.
std::string dump_terms(const DecompositionResult& d);

struct TermBindings {
  Trajectory vL;
  Trajectory v;
  Trajectory w;
  Trajectory wbar;
};

/// Evaluates trees bottom-up, one bilinear_B call per distinct internal
/// node. Results of subtrees used more than once are kept until their last
/// use.
class TermEvaluator {
 public:
  TermEvaluator(const TermBindings& bindings, const QuadratureConfig& q);

  Trajectory evaluate(const TermPtr& tree);
  /// Σ coeff·tree over the sum.
  Trajectory evaluate(const FormalSum& sum);
  /// Evaluates several sums sharing one memo table.
  std::vector<Trajectory> evaluate(const std::vector<const FormalSum*>& sums);

  /// Number of bilinear_B calls made so far.
  std::size_t bilinear_calls() const { return calls_; }

 private:
  Trajectory eval_node(const TermPtr& tree);
  const Trajectory& leaf_value(Leaf leaf) const;
  void count_uses(const TermPtr& tree);

  const TermBindings& bindings_;
  QuadratureConfig q_;
  std::map<std::string, int> uses_;
  std::map<std::string, Trajectory> memo_;
  std::size_t calls_ = 0;
};

struct TermNorm {
  std::string bucket;
  std::int64_t coeff;
  std::string sexpr;
  double sup_l2;
};

struct DecompositionReport {
  int N = 2;
  /// sup_t ‖v - (H + W + Z)‖_{L²} / sup_t ‖v‖_{L²}.
  double residual = 0.0;
  bool passed = false;
  std::size_t terms_H = 0, terms_W = 0, terms_Z = 0;
  /// sup_t of the critical Besov norm Ḃ^{s_p}_{p,p} of H.
  double H_besov = 0.0;
  /// sup_t weak-L³ of W + Z.
  double WZ_weak_l3 = 0.0;
  /// Kato norm sup_t t^{1/2-3/(2p)}‖H(t)‖_{L^p}.
  double H_kato = 0.0;
  double sup_l2_H = 0.0, sup_l2_W = 0.0, sup_l2_Z = 0.0;
  /// Per-term norms, filled only when the residual exceeds the tolerance.
  std::vector<TermNorm> term_norms;
};

/// Evaluates expand(N) with the given bindings and compares to v.
DecompositionReport verify_decomposition(const Trajectory& v,
                                         const TermBindings& bindings, int N,
                                         const QuadratureConfig& q, double p,
                                         double tol);

}  // namespace mildns
