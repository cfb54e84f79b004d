#pragma once

#include <optional>
#include <vector>

#include "liqdem/model.hpp"

namespace liqdem {

// Floor with a small guard so values intended as exact integers do not
// round down spuriously.
constexpr double kFloorEpsilon = 1e-9;
int guarded_floor(double x);

// Log likelihood-ratio weight ln(q / (1-q)); +infinity at q = 1.
double optimal_weight(double q);

// Weight of a voter with precision r measured in units of the weight of a
// voter with precision q. Throws for q = 0.5 or r = 1 (infinite ratio).
double relative_weight(double r, double q);

enum class FirstBestOutcome { A, B, Tie };

// Decision of a single observer of all independents' signals.
// signals[k] is the signal of the k-th independent (committee order).
FirstBestOutcome first_best_decision(const Committee& committee,
                                     const std::vector<State>& signals);

// P(first-best decision matches the state); ties contribute 0.5.
double first_best_probability(const Committee& committee);

}  // namespace liqdem
