// Union-find with congruence closure over application/level-successor
// spines; binders are kept opaque (compared wholesale by alpha key).
#include <algorithm>
#include <map>

#include "eqlf/kernel.hpp"

namespace eqlf {

namespace {

long countOccurrences(const ObjPtr& t, const std::set<std::string>& names) {
  if (!t) return 0;
  switch (t->tag) {
    case ObjTag::FVar: return names.count(t->name) ? 1 : 0;
    case ObjTag::BVar:
    case ObjTag::Bullet:
    case ObjTag::Lvl:
    case ObjTag::LZero: return 0;
    case ObjTag::LSuc: return countOccurrences(t->a, names);
    case ObjTag::PiSort:
    case ObjTag::Lam:
    case ObjTag::App: return countOccurrences(t->a, names) + countOccurrences(t->b, names);
    case ObjTag::ClsObj: {
      long n = 0;
      for (const auto& v : freeVarsCls(t->cls)) n += names.count(v) ? 1 : 0;
      return n;
    }
  }
  return 0;
}

}  // namespace

int GroundEqStore::addTerm(const ObjPtr& t) {
  std::string key = alphaKey(t);
  auto it = byKey_.find(key);
  if (it != byKey_.end()) return it->second;
  Node n;
  n.term = t;
  if (t->tag == ObjTag::App) {
    n.kids.push_back(addTerm(t->a));
    n.kids.push_back(addTerm(t->b));
  } else if (t->tag == ObjTag::LSuc) {
    n.kids.push_back(addTerm(t->a));
  }
  int id = (int)nodes_.size();
  nodes_.push_back(std::move(n));
  byKey_.emplace(std::move(key), id);
  return id;
}

int GroundEqStore::find(int i) const {
  while (nodes_[i].parent != -1) i = nodes_[i].parent;
  return i;
}

void GroundEqStore::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return;
  nodes_[b].parent = a;
}

void GroundEqStore::addEquation(const ObjPtr& a, const ObjPtr& b) {
  closed_ = false;
  ++eqCount_;
  unite(addTerm(a), addTerm(b));
}

long GroundEqStore::weight(const ObjPtr& t) const { return countOccurrences(t, ctxNames_); }

void GroundEqStore::close() {
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::string, int> sig;
    for (int i = 0; i < (int)nodes_.size(); ++i) {
      if (nodes_[i].kids.empty()) continue;
      std::string s(nodes_[i].term->tag == ObjTag::App ? "A" : "S");
      for (int k : nodes_[i].kids) {
        s += ':';
        s += std::to_string(find(k));
      }
      auto [it, fresh] = sig.emplace(std::move(s), i);
      if (!fresh && find(it->second) != find(i)) {
        unite(it->second, i);
        changed = true;
      }
    }
  }

  // representative per class: fewest context-variable occurrences, then
  // smallest, then lexicographically least alpha key
  struct Best {
    long ctx{};
    long size{};
    std::string key;
    ObjPtr term;
  };
  std::map<int, Best> best;
  for (int i = 0; i < (int)nodes_.size(); ++i) {
    const ObjPtr& t = nodes_[i].term;
    Best cand{weight(t), (long)objSize(t), alphaKey(t), t};
    int root = find(i);
    auto it = best.find(root);
    if (it == best.end()) {
      best.emplace(root, std::move(cand));
      continue;
    }
    Best& cur = it->second;
    if (std::tie(cand.ctx, cand.size, cand.key) < std::tie(cur.ctx, cur.size, cur.key))
      cur = std::move(cand);
  }
  reps_.assign(nodes_.size(), nullptr);
  for (int i = 0; i < (int)nodes_.size(); ++i) reps_[i] = best[find(i)].term;

  congIndex_.clear();
  for (int i = 0; i < (int)nodes_.size(); ++i) {
    if (nodes_[i].kids.empty()) continue;
    std::string s(nodes_[i].term->tag == ObjTag::App ? "A" : "S");
    for (int k : nodes_[i].kids) {
      s += ':';
      s += std::to_string(find(k));
    }
    congIndex_.emplace(std::move(s), i);
  }
  closed_ = true;
}

ObjPtr GroundEqStore::lookupRep(const ObjPtr& t) const {
  auto it = byKey_.find(alphaKey(t));
  if (it != byKey_.end()) return reps_[find(it->second)];
  // congruence: both children known, spine shape recorded
  if (t->tag == ObjTag::App || t->tag == ObjTag::LSuc) {
    std::string s(t->tag == ObjTag::App ? "A" : "S");
    auto ia = byKey_.find(alphaKey(t->a));
    if (ia == byKey_.end()) return nullptr;
    s += ':';
    s += std::to_string(find(ia->second));
    if (t->tag == ObjTag::App) {
      auto ib = byKey_.find(alphaKey(t->b));
      if (ib == byKey_.end()) return nullptr;
      s += ':';
      s += std::to_string(find(ib->second));
    }
    auto ic = congIndex_.find(s);
    if (ic != congIndex_.end()) return reps_[find(ic->second)];
  }
  return nullptr;
}

ObjPtr GroundEqStore::canonize(const ObjPtr& t) const {
  if (!closed_ || eqCount_ == 0 || !t) return t;
  ObjPtr rebuilt = t;
  switch (t->tag) {
    case ObjTag::FVar:
    case ObjTag::BVar:
    case ObjTag::Bullet:
    case ObjTag::Lvl:
    case ObjTag::LZero:
    case ObjTag::ClsObj: break;
    case ObjTag::LSuc: {
      auto a = canonize(t->a);
      if (a != t->a) rebuilt = Obj::lsuc(a);
      break;
    }
    case ObjTag::App: {
      auto f = canonize(t->a);
      auto x = canonize(t->b);
      if (f != t->a || x != t->b) rebuilt = Obj::app(f, x);
      break;
    }
    case ObjTag::PiSort:
    case ObjTag::Lam: {
      // descend raw; subterms mentioning the binder never hit the store
      auto d = canonize(t->a);
      auto b = canonize(t->b);
      if (d != t->a || b != t->b)
        rebuilt = t->tag == ObjTag::PiSort ? Obj::piSort(d, t->name, b) : Obj::lam(d, t->name, b);
      break;
    }
  }
  ObjPtr rep = lookupRep(rebuilt);
  if (rep && !alphaEqual(rep, rebuilt)) return rep;
  return rebuilt;
}

bool GroundEqStore::proves(const ObjPtr& a, const ObjPtr& b) const {
  if (alphaEqual(a, b)) return true;
  if (!closed_ || eqCount_ == 0) return false;
  auto ia = byKey_.find(alphaKey(a));
  auto ib = byKey_.find(alphaKey(b));
  if (ia != byKey_.end() && ib != byKey_.end() && find(ia->second) == find(ib->second))
    return true;
  ObjPtr x = a, y = b;
  for (int i = 0; i < 32; ++i) {
    ObjPtr x2 = canonize(x);
    ObjPtr y2 = canonize(y);
    if (alphaEqual(x2, y2)) return true;
    if (alphaEqual(x2, x) && alphaEqual(y2, y)) return false;
    x = x2;
    y = y2;
  }
  return false;
}

}  // namespace eqlf
