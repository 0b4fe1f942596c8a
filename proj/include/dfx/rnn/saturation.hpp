#pragma once

#include <optional>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "dfx/rnn/model.hpp"

namespace dfx {

/// || h/||h|| - sign(h)/sqrt(d) ||, with sign(0) = +1. Returns nullopt for
/// the zero vector.
std::optional<double> saturation_distance(const Eigen::Ref<const Eigen::VectorXd>& h);

/// Largest saturation distance over every hidden state visited while
/// reading the strings (including the <bos> state). Zero vectors are
/// skipped with a warning. Throws InputError on an empty string set.
double saturation_level(const RnnModel& model, std::span<const std::string> strings);

/// Largest similarity tolerance kappa for which cos(h1, h2) >= 1 - kappa
/// forces equal saturated states: 2 (1/sqrt(d) - eps)^2, or nullopt when
/// eps >= 1/sqrt(d).
std::optional<double> kappa_bound(int dimension, double epsilon);

}  // namespace dfx
