// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: ree, curve, boundary, plane, survey, kext-error and
// circuit subcommands writing CSV, SVG and a JSON manifest per run.

#pragma once

#include "qpureb/density_matrix.hpp"
#include "qpureb/geometry.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qpureb::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNonConvergence = 3, kIo = 4 };

// werner:d:alpha, isotropic:d:alpha, tiles, pyramid, file:PATH,
// example1:lam, example2:lam[:d]
DensityMatrix parse_state_spec(const std::string& spec);

// A one-parameter family: werner:d, isotropic:d, example1, example2[:d].
struct Family {
  std::string name;
  std::function<DensityMatrix(double)> state;
  // Analytic REE when known.
  std::function<double(double)> analytic;
  // beta -> alpha along the family's ray, when the family is a ray.
  std::function<double(double)> beta_to_alpha;
};

Family parse_family(const std::string& spec);

// werner:d, isotropic:d, random:da:db:seed, or any state spec.
struct Direction {
  Ray ray;
  std::function<double(double)> beta_to_alpha;
};

Direction parse_direction(const std::string& spec);

std::vector<double> parse_double_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);
// "lo:hi:count", inclusive of both ends.
std::vector<double> parse_range(const std::string& text);
// "3x3"
Dims parse_dims(const std::string& text);

// key=value lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::string& path);

int run(int argc, char** argv);

}  // namespace qpureb::cli
