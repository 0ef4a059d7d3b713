#pragma once

#include <cstdint>
#include <string>

#include "netshield/game.hpp"

namespace netshield {

inline constexpr int kInstanceFileVersion = 1;

// Strict parse of the JSON instance format. InputError::Kind::Syntax for
// malformed JSON, ::Semantic for bad fields (self-links, out-of-range ids,
// duplicate players, malformed or non-positive prices). Connectivity is not
// checked here; callers consult instance_connected().
Instance parse_instance(const std::string& bytes);

// Canonical serialization: sorted keys, sorted link lists, prices in lowest
// terms. parse(serialize(x)) reproduces x; serialize(parse(bytes)) is the
// canonical form of the file.
std::string serialize_instance(const Instance& inst);

// Seeded deterministic G(n, edge_prob) draw with per-player immunisation
// bits; each edge is owned by an endpoint other than u. Redraws until
// G(empty,*) is connected, PreconditionError after the retry budget.
Instance generate_instance(std::uint64_t seed, int n, double edge_prob, double immun_prob,
                           const Rational& alpha, const Rational& beta);

// Single unretried draw (may be disconnected); the sweep command uses this
// so disconnected draws show up in its statistics.
Instance generate_instance_raw(std::uint64_t seed, int n, double edge_prob, double immun_prob,
                               const Rational& alpha, const Rational& beta);

// FNV-1a 64-bit digest of the input bytes, echoed into result files.
std::string input_digest(const std::string& bytes);

}  // namespace netshield
