#pragma once

// Random well-formed documents for the format round-trip tests.

#include <random>

#include "panelkit/deck_io.hpp"
#include "panelkit/results_io.hpp"

namespace panelkit::testkit {

/// Doubles over many decades, both signs, with occasional exact zeros.
double random_value(std::mt19937_64& rng);
std::string random_name(std::mt19937_64& rng, std::size_t max_len = 12);

LawgsObject random_lawgs(std::mt19937_64& rng);
/// Boundary and wake entries refer to the networks of `geometry`.
AuxDeck random_aux(std::mt19937_64& rng, const LawgsObject& geometry);
A502Deck random_a502(std::mt19937_64& rng);
AgpsDocument random_agps(std::mt19937_64& rng);
FfmfSummary random_ffmf(std::mt19937_64& rng);

}  // namespace panelkit::testkit
