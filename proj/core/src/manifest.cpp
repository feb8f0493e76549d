#include "gfm/manifest.hpp"

#include <fstream>
#include <sstream>

#include "gfm/parser.hpp"

namespace gfm {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::vector<Rat> parse_rat_list(const std::string& s, int line) {
  std::vector<Rat> out;
  for (auto& piece : split(s, ';')) {
    if (piece.empty()) throw ParseError("empty rational entry", line, 1);
    out.push_back(Rat::parse(piece));
  }
  return out;
}

}  // namespace

Manifest parse_manifest_text(const std::string& text, const std::string& origin) {
  Manifest m;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  std::map<std::string, bool> seen;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(origin + ": expected 'key = value'", lineno, 1);
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (seen[key])
      throw ParseError(origin + ": duplicate key '" + key + "'", lineno, 1);
    seen[key] = true;
    try {
      if (key == "manifold") {
        m.name = val;
      } else if (key == "coords") {
        m.coord_names = split(val, ';');
      } else if (key == "hat_coords") {
        m.hat_coord_names = split(val, ';');
      } else if (key == "eta") {
        for (auto& rowtext : split(val, ';')) {
          std::istringstream rs(rowtext);
          std::vector<Rat> row;
          std::string cell;
          while (rs >> cell) row.push_back(Rat::parse(cell));
          m.eta.push_back(std::move(row));
        }
      } else if (key == "potential") {
        m.potential_text = val;
      } else if (key == "unity") {
        m.unity_text = split(val, ';');
      } else if (key == "euler") {
        m.euler_text = split(val, ';');
      } else if (key == "legendre") {
        m.legendre_text = split(val, ';');
      } else if (key == "charge") {
        m.charge = Rat::parse(val);
      } else if (key == "mu") {
        m.mu = parse_rat_list(val, lineno);
      } else if (key == "rshift") {
        m.rshift = parse_rat_list(val, lineno);
      } else if (key == "window") {
        m.window = std::stoi(val);
      } else if (key == "vir_window") {
        m.vir_window = std::stoi(val);
      } else if (key == "genus") {
        m.genus = std::stoi(val);
      } else if (key == "eps_order") {
        m.eps_order = std::stoi(val);
      } else if (key == "laurent_order") {
        m.laurent_order = std::stoi(val);
      } else {
        throw ParseError(origin + ": unknown key '" + key + "'", lineno, 1);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(origin + ": " + e.what(), lineno, 1);
    }
  }
  if (m.name.empty()) throw ValidationError(origin + ": missing 'manifold' name");
  if (m.coord_names.empty()) throw ValidationError(origin + ": missing 'coords'");
  return m;
}

Manifest parse_manifest_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open manifest file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_manifest_text(ss.str(), path);
}

std::string print_manifest(const Manifest& m) {
  std::ostringstream os;
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? " ; " : "") + v[i];
    return s;
  };
  auto join_rat = [](const std::vector<Rat>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? " ; " : "") + v[i].str();
    return s;
  };
  os << "manifold = " << m.name << "\n";
  os << "coords = " << join(m.coord_names) << "\n";
  os << "eta = ";
  for (size_t i = 0; i < m.eta.size(); ++i) {
    if (i) os << " ; ";
    for (size_t j = 0; j < m.eta[i].size(); ++j)
      os << (j ? " " : "") << m.eta[i][j].str();
  }
  os << "\n";
  os << "potential = " << m.potential_text << "\n";
  os << "unity = " << join(m.unity_text) << "\n";
  os << "euler = " << join(m.euler_text) << "\n";
  if (!m.legendre_text.empty()) os << "legendre = " << join(m.legendre_text) << "\n";
  os << "charge = " << m.charge.str() << "\n";
  os << "mu = " << join_rat(m.mu) << "\n";
  os << "rshift = " << join_rat(m.rshift) << "\n";
  if (!m.hat_coord_names.empty())
    os << "hat_coords = " << join(m.hat_coord_names) << "\n";
  os << "window = " << m.window << "\n";
  os << "vir_window = " << m.vir_window << "\n";
  os << "genus = " << m.genus << "\n";
  os << "eps_order = " << m.eps_order << "\n";
  os << "laurent_order = " << m.laurent_order << "\n";
  return os.str();
}

BuiltManifold build_manifold(const Manifest& mf) {
  size_t n = mf.coord_names.size();
  if (mf.eta.size() != n)
    throw ValidationError(mf.name + ": eta must be " + std::to_string(n) + "x" +
                          std::to_string(n));
  for (auto& row : mf.eta)
    if (row.size() != n)
      throw ValidationError(mf.name + ": eta row of wrong length");
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (!(mf.eta[i][j] == mf.eta[j][i]))
        throw ValidationError(mf.name + ": eta is not symmetric");
  if (mf.mu.size() != n) throw ValidationError(mf.name + ": mu has wrong length");
  if (mf.rshift.size() != n)
    throw ValidationError(mf.name + ": rshift has wrong length");
  if (mf.unity_text.size() != n)
    throw ValidationError(mf.name + ": unity has wrong component count");
  if (mf.euler_text.size() != n)
    throw ValidationError(mf.name + ": euler has wrong component count");
  if (!mf.legendre_text.empty() && mf.legendre_text.size() != n)
    throw ValidationError(mf.name + ": legendre has wrong component count");

  GFManifold m;
  m.name = mf.name;
  auto& t = AtomTable::instance();
  std::map<std::string, AtomId> scope;
  for (auto& cn : mf.coord_names) {
    AtomId id = t.coord(cn);
    m.coords.push_back(id);
    scope[cn] = id;
  }
  m.eta = RatMatrix(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) m.eta(i, j) = mf.eta[i][j];
  m.eta_inv = m.eta.inverse();  // throws when singular
  ExprParser P(scope);
  m.potential = P.parse(mf.potential_text);
  if (!m.potential.jet_free())
    throw ValidationError(mf.name + ": potential must be jet-free");
  for (auto& s : mf.unity_text) m.unity.comp.push_back(P.parse(s));
  for (auto& s : mf.euler_text) m.euler.comp.push_back(P.parse(s));
  m.charge = mf.charge;
  m.mu = mf.mu;
  m.r_shift = mf.rshift;

  BuiltManifold out{std::move(m), std::nullopt, mf};
  if (!mf.legendre_text.empty()) {
    VectorField B;
    for (auto& s : mf.legendre_text) B.comp.push_back(P.parse(s));
    out.legendre = std::move(B);
  }
  return out;
}

namespace {

const std::map<std::string, std::string>& builtin_map() {
  static const std::map<std::string, std::string> m = {
      {"kdv",
       "manifold = kdv\n"
       "coords = v\n"
       "eta = 1\n"
       "potential = 1/6*v^3\n"
       "unity = 1\n"
       "euler = v\n"
       "charge = 0\n"
       "mu = 0\n"
       "rshift = 0\n"
       "legendre = 1/(2*root(v,2))\n"
       "hat_coords = vh\n"},
      {"kdv_hat",
       "manifold = kdv_hat\n"
       "coords = vh\n"
       "eta = 1\n"
       "potential = 1/12*vh^4\n"
       "unity = 1/(2*vh)\n"
       "euler = 1/2*vh\n"
       "charge = 1\n"
       "mu = 0\n"
       "rshift = 0\n"
       "legendre = 1\n"
       "hat_coords = v\n"},
      {"al",
       "manifold = al\n"
       "coords = v ; u\n"
       "eta = 0 1 ; 1 0\n"
       "potential = 1/2*v^2*u + v*exp(u) + 1/2*v^2*log(v)\n"
       "unity = v/(v - exp(u)) ; -1/(v - exp(u))\n"
       "euler = v ; 1\n"
       "charge = 1\n"
       "mu = -1/2 ; 1/2\n"
       "rshift = 0 ; 1\n"
       "legendre = 1 ; 0\n"
       "hat_coords = vt ; ut\n"},
      {"toda",
       "manifold = toda\n"
       "coords = vt ; ut\n"
       "eta = 0 1 ; 1 0\n"
       "potential = 1/2*vt^2*ut + exp(ut)\n"
       "unity = 1 ; 0\n"
       "euler = vt ; 2\n"
       "charge = 1\n"
       "mu = -1/2 ; 1/2\n"
       "rshift = 0 ; 2\n"},
  };
  return m;
}

}  // namespace

const std::vector<std::string>& builtin_manifest_names() {
  static const std::vector<std::string> names = {"kdv", "kdv_hat", "al", "toda"};
  return names;
}

const std::string& builtin_manifest_text(const std::string& name) {
  auto& m = builtin_map();
  auto it = m.find(name);
  if (it == m.end())
    throw ValidationError("unknown builtin manifest '" + name + "'");
  return it->second;
}

Manifest resolve_manifest(const std::string& arg) {
  auto& m = builtin_map();
  auto it = m.find(arg);
  if (it != m.end()) return parse_manifest_text(it->second, arg);
  return parse_manifest_file(arg);
}

}  // namespace gfm
