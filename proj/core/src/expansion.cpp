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

#include "mildns/expansion.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

#include "mildns/norms.hpp"

namespace mildns {

std::string to_string(Leaf leaf) {
  switch (leaf) {
    case Leaf::vL: return "vL";
    case Leaf::v: return "v";
    case Leaf::w: return "w";
    case Leaf::wbar: return "wbar";
  }
  return "?";
}

bool term_less(const TermNode& a, const TermNode& b) {
  if (a.depth() != b.depth()) return a.depth() < b.depth();
  return a.key() < b.key();
}

TermPtr TermNode::leaf(Leaf kind) {
  auto n = std::shared_ptr<TermNode>(new TermNode());
  n->leaf_ = kind;
  n->key_ = to_string(kind);
  n->counts_[static_cast<int>(kind)] = 1;
  return n;
}

TermPtr TermNode::B(TermPtr a, TermPtr b) {
  if (!a || !b) throw std::invalid_argument("term: null child");
  if (term_less(*b, *a)) std::swap(a, b);
  auto n = std::shared_ptr<TermNode>(new TermNode());
  n->depth_ = 1 + std::max(a->depth_, b->depth_);
  n->key_ = "(B " + a->key_ + " " + b->key_ + ")";
  for (int i = 0; i < 4; ++i) n->counts_[i] = a->counts_[i] + b->counts_[i];
  n->left_ = std::move(a);
  n->right_ = std::move(b);
  return n;
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  TermPtr parse() {
    TermPtr t = term();
    skip();
    if (pos_ != s_.size()) fail("trailing characters");
    return t;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("term parse error at " + std::to_string(pos_) +
                                ": " + what);
  }
  std::string word() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) fail("expected a name");
    return s_.substr(start, pos_ - start);
  }
  TermPtr term() {
    skip();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      if (word() != "B") fail("expected B");
      TermPtr a = term();
      TermPtr b = term();
      skip();
      if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return TermNode::B(std::move(a), std::move(b));
    }
    const std::string w = word();
    for (Leaf l : {Leaf::vL, Leaf::v, Leaf::w, Leaf::wbar}) {
      if (to_string(l) == w) return TermNode::leaf(l);
    }
    fail("unknown leaf '" + w + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

TermPtr parse_term(const std::string& text) { return Parser(text).parse(); }

void FormalSum::add(const TermPtr& tree, std::int64_t coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.try_emplace(tree->key(), Entry{coeff, tree});
  if (!inserted) {
    it->second.coeff += coeff;
    if (it->second.coeff == 0) terms_.erase(it);
  }
}

void FormalSum::add(const FormalSum& other, std::int64_t factor) {
  for (const auto& [key, e] : other.terms_) add(e.tree, factor * e.coeff);
}

std::int64_t FormalSum::coeff(const std::string& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? 0 : it->second.coeff;
}

std::vector<FormalSum::Entry> FormalSum::entries() const {
  std::vector<Entry> out;
  out.reserve(terms_.size());
  for (const auto& [key, e] : terms_) out.push_back(e);
  std::stable_sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) {
    return term_less(*a.tree, *b.tree);
  });
  return out;
}

bool operator==(const FormalSum& a, const FormalSum& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (const auto& [key, e] : a.terms_) {
    if (b.coeff(key) != e.coeff) return false;
  }
  return true;
}

namespace {

class Substituter {
 public:
  Substituter() {
    const TermPtr v = TermNode::leaf(Leaf::v);
    v_sum_.add(TermNode::leaf(Leaf::vL), 1);
    v_sum_.add(TermNode::B(v, v), 1);
    v_sum_.add(TermNode::B(TermNode::leaf(Leaf::w), v), 1);
    v_sum_.add(TermNode::B(TermNode::leaf(Leaf::wbar), v), 1);
  }

  const FormalSum& expand(const TermPtr& t) {
    auto it = memo_.find(t->key());
    if (it != memo_.end()) return it->second;
    FormalSum out;
    if (t->is_leaf()) {
      if (t->leaf_kind() == Leaf::v) {
        out = v_sum_;
      } else {
        out.add(t, 1);
      }
    } else if (t->count(Leaf::v) == 0) {
      out.add(t, 1);
    } else {
      const FormalSum a = expand(t->left());
      const FormalSum& b = expand(t->right());
      for (const auto& [ka, ea] : a.by_key()) {
        for (const auto& [kb, eb] : b.by_key()) {
          out.add(TermNode::B(ea.tree, eb.tree), ea.coeff * eb.coeff);
        }
      }
    }
    return memo_.emplace(t->key(), std::move(out)).first->second;
  }

 private:
  FormalSum v_sum_;
  std::map<std::string, FormalSum> memo_;
};

}  // namespace

FormalSum substitute_v(const FormalSum& sum) {
  Substituter sub;
  FormalSum out;
  for (const auto& [key, e] : sum.by_key()) out.add(sub.expand(e.tree), e.coeff);
  return out;
}

DecompositionResult expand(int N) {
  if (N < 2) throw std::invalid_argument("expand: N must be >= 2");
  if (N > kMaxExpansionOrder) {
    throw std::invalid_argument("expand: N above the supported ceiling " +
                                std::to_string(kMaxExpansionOrder));
  }
  const TermPtr vL = TermNode::leaf(Leaf::vL);
  const TermPtr v = TermNode::leaf(Leaf::v);
  const TermPtr w = TermNode::leaf(Leaf::w);
  const TermPtr wbar = TermNode::leaf(Leaf::wbar);
  DecompositionResult d;
  d.N = 2;
  d.H.add(vL, 1);
  d.W.add(TermNode::B(w, v), 1);
  d.Z.add(TermNode::B(v, v), 1);
  d.Z.add(TermNode::B(wbar, v), 1);
  while (d.N < N) {
    FormalSum next_z;
    const FormalSum substituted = substitute_v(d.Z);
    for (const auto& [key, e] : substituted.by_key()) {
      if (e.tree->count(Leaf::w) > 0) {
        d.W.add(e.tree, e.coeff);
      } else if (e.tree->count(Leaf::v) == 0) {
        d.H.add(e.tree, e.coeff);
      } else {
        next_z.add(e.tree, e.coeff);
      }
    }
    d.Z = std::move(next_z);
    ++d.N;
  }
  return d;
}

std::string dump_terms(const DecompositionResult& d) {
  std::ostringstream out;
  const std::pair<const char*, const FormalSum*> buckets[] = {
      {"H", &d.H}, {"W", &d.W}, {"Z", &d.Z}};
  for (const auto& [name, sum] : buckets) {
    for (const auto& e : sum->entries()) {
      out << name << ' ' << e.coeff << ' ' << e.tree->key() << '\n';
    }
  }
  return out.str();
}

TermEvaluator::TermEvaluator(const TermBindings& bindings,
                             const QuadratureConfig& q)
    : bindings_(bindings), q_(q) {
  const Trajectory* all[] = {&bindings.vL, &bindings.v, &bindings.w,
                             &bindings.wbar};
  for (const Trajectory* t : all) {
    if (!(t->grid() == bindings.v.grid()) || !t->same_time_grid(bindings.v)) {
      throw std::invalid_argument("term evaluation: bindings disagree on grid");
    }
  }
}

const Trajectory& TermEvaluator::leaf_value(Leaf leaf) const {
  switch (leaf) {
    case Leaf::vL: return bindings_.vL;
    case Leaf::v: return bindings_.v;
    case Leaf::w: return bindings_.w;
    case Leaf::wbar: return bindings_.wbar;
  }
  throw std::logic_error("bad leaf");
}

void TermEvaluator::count_uses(const TermPtr& tree) {
  if (tree->is_leaf()) return;
  if (uses_[tree->key()]++ == 0) {
    count_uses(tree->left());
    count_uses(tree->right());
  }
}

Trajectory TermEvaluator::eval_node(const TermPtr& tree) {
  if (tree->is_leaf()) return leaf_value(tree->leaf_kind());
  const std::string& key = tree->key();
  auto uses = uses_.find(key);
  auto hit = memo_.find(key);
  if (hit != memo_.end()) {
    Trajectory out = hit->second;
    if (uses != uses_.end() && --uses->second <= 0) {
      memo_.erase(hit);
      uses_.erase(uses);
    }
    return out;
  }
  Trajectory a = eval_node(tree->left());
  Trajectory b = eval_node(tree->right());
  Trajectory out = bilinear_B(a, b, q_);
  ++calls_;
  if (uses != uses_.end()) {
    if (--uses->second > 0) {
      memo_.emplace(key, out);
    } else {
      uses_.erase(uses);
    }
  }
  return out;
}

Trajectory TermEvaluator::evaluate(const TermPtr& tree) {
  count_uses(tree);
  return eval_node(tree);
}

std::vector<Trajectory> TermEvaluator::evaluate(
    const std::vector<const FormalSum*>& sums) {
  for (const FormalSum* s : sums) {
    for (const auto& e : s->entries()) count_uses(e.tree);
  }
  std::vector<Trajectory> out;
  for (const FormalSum* s : sums) {
    Trajectory acc = Trajectory::zeros(bindings_.v.grid(), bindings_.v.times());
    for (const auto& e : s->entries()) {
      acc.axpy(static_cast<double>(e.coeff), eval_node(e.tree));
    }
    out.push_back(std::move(acc));
  }
  return out;
}

Trajectory TermEvaluator::evaluate(const FormalSum& sum) {
  return std::move(evaluate(std::vector<const FormalSum*>{&sum}).front());
}

namespace {

double sup_l2(const Trajectory& x) {
  double m = 0.0;
  for (const auto& s : x.states()) m = std::max(m, s.l2_norm());
  return m;
}

}  // namespace

DecompositionReport verify_decomposition(const Trajectory& v,
                                         const TermBindings& bindings, int N,
                                         const QuadratureConfig& q, double p,
                                         double tol) {
  const DecompositionResult d = expand(N);
  TermEvaluator ev(bindings, q);
  auto parts = ev.evaluate({&d.H, &d.W, &d.Z});
  DecompositionReport r;
  r.N = N;
  r.terms_H = d.H.size();
  r.terms_W = d.W.size();
  r.terms_Z = d.Z.size();
  r.sup_l2_H = sup_l2(parts[0]);
  r.sup_l2_W = sup_l2(parts[1]);
  r.sup_l2_Z = sup_l2(parts[2]);

  Trajectory diff = v;
  for (const auto& part : parts) diff -= part;
  const double scale = sup_l2(v);
  r.residual = scale > 0.0 ? sup_l2(diff) / scale : sup_l2(diff);
  r.passed = r.residual <= tol;

  const BesovIndex crit = BesovIndex::critical(p, p);
  const Trajectory wz = parts[1] + parts[2];
  for (std::size_t i = 0; i < v.size(); ++i) {
    r.H_besov = std::max(r.H_besov, besov_norm(parts[0].state(i), crit));
    r.WZ_weak_l3 = std::max(r.WZ_weak_l3, weak_l3_norm(wz.state(i)));
  }
  r.H_kato = kato_norm(parts[0], p);

  if (!r.passed) {
    const std::pair<const char*, const FormalSum*> buckets[] = {
        {"H", &d.H}, {"W", &d.W}, {"Z", &d.Z}};
    for (const auto& [name, sum] : buckets) {
      for (const auto& e : sum->entries()) {
        TermEvaluator single(bindings, q);
        r.term_norms.push_back({name, e.coeff, e.tree->key(),
                                sup_l2(single.evaluate(e.tree))});
      }
    }
  }
  return r;
}

}  // namespace mildns
