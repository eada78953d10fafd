#pragma once

#include <random>
#include <string>

#include "theia/model_spec.hpp"

namespace theia::testing {

// Random valid ModelSpec: arbitrary sequential mixes of every layer kind,
// hyper-parameters straddling the rule thresholds, optional learner and
// dataset fields sometimes absent.
ModelSpec random_spec(std::mt19937& rng);

std::string fixture_path(const std::string& relative);
std::string read_fixture(const std::string& relative);

}  // namespace theia::testing
