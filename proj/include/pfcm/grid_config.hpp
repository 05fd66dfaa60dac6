#pragma once

#include <istream>
#include <string>

#include "pfcm/harness.hpp"

namespace pfcm {

/// Parses a key = value grid file. `#` starts a comment. Recognized keys:
///
///   preset          table1 (fills sizes, ks, pairing and algorithms first)
///   sizes, ks       comma-separated integers
///   pairing         cross | zipped
///   algorithms      comma-separated: kmeans, rough_kmeans, fcm, pfcm
///   normalization   none | mean_relative | zscore
///   drop_degenerate true | false
///   subset_policy   first_n | variance_top_n | seeded_random
///   subset_seed     integer, used by seeded_random
///   seeds           comma-separated integers
///   threads         integer
///   m, v, eps, max_iter, alpha_floor       fuzzy parameters (both FCM and PFCM)
///   zeta, w_lower                          rough parameters
///   kmeans_eps, kmeans_max_iter, init      hard-clustering parameters
///
/// Throws ConfigError with the line number on unknown keys or bad values.
ExperimentGrid parse_grid_config(std::istream& in, std::size_t n_genes);
ExperimentGrid read_grid_config(const std::string& path, std::size_t n_genes);

}  // namespace pfcm
