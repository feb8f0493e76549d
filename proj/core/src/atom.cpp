#include "gfm/atom.hpp"

#include <mutex>
#include <unordered_map>

#include "gfm/expr.hpp"

namespace gfm {

struct AtomTable::Impl {
  mutable std::recursive_mutex mu;
  std::vector<AtomInfo> atoms;
  std::unordered_map<std::string, AtomId> by_name;   // Coord/Param
  std::map<std::pair<AtomId, int>, AtomId> jets;     // (coord, order)
  std::map<AtomId, AtomId> exps;                     // coord -> exp atom
  std::map<long, AtomId> logprimes;
  std::unordered_map<std::string, AtomId> by_key;    // Log/Root keyed by print
};

AtomTable& AtomTable::instance() {
  static AtomTable t;
  return t;
}

AtomTable::Impl& AtomTable::impl() const {
  static Impl impl;
  return impl;
}

AtomId AtomTable::coord(const std::string& name) {
  auto& im = impl();
  std::lock_guard lk(im.mu);
  auto it = im.by_name.find(name);
  if (it != im.by_name.end()) {
    if (im.atoms[it->second].kind != AtomKind::Coord)
      throw UndeclaredAtom("name '" + name + "' already declared with a different kind");
    return it->second;
  }
  AtomId id = (AtomId)im.atoms.size();
  im.atoms.push_back({AtomKind::Coord, name, -1, 0, 0, nullptr});
  im.by_name.emplace(name, id);
  return id;
}

AtomId AtomTable::param(const std::string& name) {
  auto& im = impl();
  std::lock_guard lk(im.mu);
  auto it = im.by_name.find(name);
  if (it != im.by_name.end()) {
    if (im.atoms[it->second].kind != AtomKind::Param)
      throw UndeclaredAtom("name '" + name + "' already declared with a different kind");
    return it->second;
  }
  AtomId id = (AtomId)im.atoms.size();
  im.atoms.push_back({AtomKind::Param, name, -1, 0, 0, nullptr});
  im.by_name.emplace(name, id);
  return id;
}

AtomId AtomTable::jet(AtomId coordinate, int order) {
  auto& im = impl();
  std::lock_guard lk(im.mu);
  if (order == 0) return coordinate;
  if (coordinate < 0 || coordinate >= (AtomId)im.atoms.size() ||
      im.atoms[coordinate].kind != AtomKind::Coord)
    throw UndeclaredAtom("jet of a non-coordinate atom");
  if (order < 0) throw UndeclaredAtom("negative jet order");
  auto key = std::make_pair(coordinate, order);
  auto it = im.jets.find(key);
  if (it != im.jets.end()) return it->second;
  AtomId id = (AtomId)im.atoms.size();
  im.atoms.push_back({AtomKind::Jet, "", coordinate, order, 0, nullptr});
  im.jets.emplace(key, id);
  return id;
}

AtomId AtomTable::exp_atom(AtomId coordinate) {
  auto& im = impl();
  std::lock_guard lk(im.mu);
  if (coordinate < 0 || coordinate >= (AtomId)im.atoms.size() ||
      im.atoms[coordinate].kind != AtomKind::Coord)
    throw UndeclaredAtom("exp of a non-coordinate atom");
  auto it = im.exps.find(coordinate);
  if (it != im.exps.end()) return it->second;
  AtomId id = (AtomId)im.atoms.size();
  im.atoms.push_back({AtomKind::Exp, "", coordinate, 0, 0, nullptr});
  im.exps.emplace(coordinate, id);
  return id;
}

AtomId AtomTable::log_prime(long p) {
  auto& im = impl();
  std::lock_guard lk(im.mu);
  auto it = im.logprimes.find(p);
  if (it != im.logprimes.end()) return it->second;
  AtomId id = (AtomId)im.atoms.size();
  im.atoms.push_back({AtomKind::LogPrime, "", -1, 0, p, nullptr});
  im.logprimes.emplace(p, id);
  return id;
}

AtomId AtomTable::log_atom(const Expr& arg) {
  auto& im = impl();
  std::lock_guard lk(im.mu);
  std::string key = "log:" + arg.str();
  auto it = im.by_key.find(key);
  if (it != im.by_key.end()) return it->second;
  AtomId id = (AtomId)im.atoms.size();
  im.atoms.push_back(
      {AtomKind::Log, "", -1, 0, 0, std::make_shared<const Expr>(arg)});
  im.by_key.emplace(std::move(key), id);
  return id;
}

AtomId AtomTable::root_atom(const Expr& base, int k) {
  auto& im = impl();
  std::lock_guard lk(im.mu);
  std::string key = "root" + std::to_string(k) + ":" + base.str();
  auto it = im.by_key.find(key);
  if (it != im.by_key.end()) return it->second;
  AtomId id = (AtomId)im.atoms.size();
  im.atoms.push_back(
      {AtomKind::Root, "", -1, k, 0, std::make_shared<const Expr>(base)});
  im.by_key.emplace(std::move(key), id);
  return id;
}

AtomId AtomTable::find_name(const std::string& name) const {
  auto& im = impl();
  std::lock_guard lk(im.mu);
  auto it = im.by_name.find(name);
  return it == im.by_name.end() ? -1 : it->second;
}

const AtomInfo& AtomTable::info(AtomId id) const {
  auto& im = impl();
  std::lock_guard lk(im.mu);
  if (id < 0 || id >= (AtomId)im.atoms.size())
    throw UndeclaredAtom("atom id out of range");
  return im.atoms[id];
}

size_t AtomTable::size() const {
  auto& im = impl();
  std::lock_guard lk(im.mu);
  return im.atoms.size();
}

}  // namespace gfm
