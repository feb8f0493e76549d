#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gfm/manifold.hpp"
#include "gfm/parser.hpp"

namespace gfm {

struct ValidationError : KernelError {
  using KernelError::KernelError;
};

// Plain-text manifold description: key = value lines, lists separated by
// ';', matrix rows separated by ';' with entries separated by whitespace.
struct Manifest {
  std::string name;
  std::vector<std::string> coord_names;
  std::vector<std::vector<Rat>> eta;
  std::string potential_text;
  std::vector<std::string> unity_text;
  std::vector<std::string> euler_text;
  std::vector<std::string> legendre_text;  // empty: no extended field
  Rat charge;
  std::vector<Rat> mu;
  std::vector<Rat> rshift;
  std::vector<std::string> hat_coord_names;  // naming hint for transforms
  // suite defaults
  int window = 4;
  int vir_window = 3;
  int genus = 2;
  int eps_order = 4;
  int laurent_order = 30;
};

Manifest parse_manifest_text(const std::string& text,
                             const std::string& origin = "<text>");
Manifest parse_manifest_file(const std::string& path);
std::string print_manifest(const Manifest& m);

// Instantiated manifold with its optional Legendre field.
struct BuiltManifold {
  GFManifold m;
  std::optional<VectorField> legendre;
  Manifest manifest;
};

// Creates atoms, parses all expressions and validates invariants
// (symmetric invertible eta, jet-free potential, matching dimensions).
BuiltManifold build_manifold(const Manifest& m);

const std::vector<std::string>& builtin_manifest_names();
// Throws ValidationError for unknown names.
const std::string& builtin_manifest_text(const std::string& name);
// Resolves `arg` as a builtin name first, then as a file path.
Manifest resolve_manifest(const std::string& arg);

}  // namespace gfm
