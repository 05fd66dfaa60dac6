#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "pfcm/expression.hpp"
#include "pfcm/fuzzy.hpp"
#include "pfcm/kmeans.hpp"
#include "pfcm/matrix.hpp"
#include "pfcm/rough_kmeans.hpp"

namespace pfcm {

// Partition CSV layouts:
//   hard   gene_id,cluster
//   rough  gene_id,cluster,membership_kind   (kind is lower or boundary;
//          a boundary gene has one line per upper set)
//   fuzzy  gene_id,u0,u1,...
// Centroid CSV: a header of sample ids, then one line per cluster.

void write_hard_partition_csv(std::ostream& out, const std::vector<std::string>& gene_ids,
                              const HardPartition& p);
void write_rough_partition_csv(std::ostream& out, const std::vector<std::string>& gene_ids,
                               const RoughPartition& p);
void write_fuzzy_partition_csv(std::ostream& out, const std::vector<std::string>& gene_ids,
                               const FuzzyPartition& p);
void write_centroids_csv(std::ostream& out, const std::vector<std::string>& sample_ids,
                         const Matrix& centroids);

enum class PartitionKind { hard, rough, fuzzy };

/// A partition file read back as a membership matrix aligned with `gene_ids`.
struct LoadedPartition {
    PartitionKind kind = PartitionKind::hard;
    Matrix memberships;  ///< n_g x k, row-stochastic
};

/// Detects the layout from the header. Every gene of the matrix must appear;
/// unknown gene ids are a DataError.
LoadedPartition read_partition_csv(std::istream& in, const std::vector<std::string>& gene_ids);

Matrix read_centroids_csv(std::istream& in, std::size_t n_samples);

/// Argmax cluster of each row (first on ties).
std::vector<std::size_t> crisp_labels(const Matrix& memberships);

}  // namespace pfcm
