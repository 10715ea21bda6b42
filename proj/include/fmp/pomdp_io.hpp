#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "fmp/pomdp.hpp"

namespace fmp {

struct PomdpParseOptions {
  // Affine-map rewards onto [0, 1] (requires a `values: reward` header).
  // Without it, any reward outside [0, R_max] raises RangeError.
  bool normalize_rewards = false;
  // Pin R_max explicitly; default is the largest reward in the file.
  std::optional<double> reward_max;
};

// Parses the documented `.pomdp` subset: `discount:` / `values: reward` /
// `states:` / `actions:` / `observations:` headers (counts or name lists),
// `T:`/`O:` entries in single, row and matrix forms with `*` wildcards and
// `uniform`/`identity` keywords, `R: <a> : <s> : * : * <r>` rewards, and
// `#` comments. The `O:` action index is accepted and ignored (the model
// conditions observations on the next state only).
PomdpModel load_pomdp_text(std::istream& in, const PomdpParseOptions& options = {});
PomdpModel load_pomdp_string(const std::string& text, const PomdpParseOptions& options = {});
PomdpModel load_pomdp_file(const std::string& path, const PomdpParseOptions& options = {});

// Canonical text form; parsing it back reproduces the matrices bit-exactly.
std::string serialize_pomdp_text(const PomdpModel& model);

}  // namespace fmp
