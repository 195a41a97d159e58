#ifndef PARCEL_IO_HPP
#define PARCEL_IO_HPP

#include <string>
#include <vector>

#include "parcel/baselines.hpp"
#include "parcel/cluster.hpp"
#include "parcel/connectivity.hpp"
#include "parcel/mesh.hpp"
#include "parcel/metrics.hpp"

namespace parcel {

// ASCII OFF: "OFF", "nV nF 0", nV coordinate lines, nF "3 i j k" faces.
SurfaceMesh read_off(const std::string& path);
void write_off(const SurfaceMesh& mesh, const std::string& path);

// One 0/1 integer per line, n_vertices lines.
VertexMask read_mask(const std::string& path, std::size_t n_vertices);

// Binary matrix: magic "CMAT", u32 version=1, u8 space tag (0=probability,
// 1=logit), u64 n_seeds, u64 n_cols, row-major little-endian float32.
ConnectivityMatrix read_cmat(const std::string& path);
void write_cmat(const ConnectivityMatrix& m, const std::string& path);

// Plain CSV of matrix values; refuses matrices above 10^6 entries. CSV
// carries no space tag, the caller supplies it on read.
ConnectivityMatrix read_matrix_csv(const std::string& path, Space space);
void write_matrix_csv(const ConnectivityMatrix& m, const std::string& path);

// Header "n_leaves=N", then "merge_index,left_id,right_id,height,member_count".
Dendrogram read_dendrogram_csv(const std::string& path);
void write_dendrogram_csv(const Dendrogram& d, const std::string& path);

// "seed_index,label" per line.
Parcellation read_parcellation_csv(const std::string& path);
void write_parcellation_csv(const Parcellation& p, const std::string& path);

void write_consistency_csv(const std::vector<ConsistencyRow>& rows,
                           const std::string& path);
void write_baseline_csv(const std::vector<BaselineRow>& rows, const std::string& path);

// 17 significant digits; used for all machine-readable floating-point output.
std::string format_full(double v);

} // namespace parcel

#endif
