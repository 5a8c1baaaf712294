// Copyright 2026 The hywf Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Molecular-dynamics data layer: trajectory text format, per-frame distance
 * and bipartite matrices, and the largest-eigenvalue collective variable.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace hywf::md {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    [[nodiscard]] double norm() const noexcept;
    [[nodiscard]] bool is_zero() const noexcept {
        return x == 0.0 && y == 0.0 && z == 0.0;
    }
    friend Vec3 operator+(const Vec3 &a, const Vec3 &b) {
        return {a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend Vec3 operator-(const Vec3 &a, const Vec3 &b) {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend bool operator==(const Vec3 &, const Vec3 &) = default;
};

[[nodiscard]] double euclidean_distance(const Vec3 &i, const Vec3 &j);

struct Atom {
    int id;
    Vec3 pos;
};

struct Frame {
    long index = 0;
    double time = 0.0; ///< ps
    std::vector<Atom> atoms;

    /// InvalidArgument if the atom is absent.
    [[nodiscard]] const Vec3 &position(int atom_id) const;
};

struct Segment {
    std::string label;
    std::vector<int> atom_ids;
};

/// Parses `I=1,2,3;J=4,5,6`.
[[nodiscard]] std::vector<Segment> parse_segments(std::string_view spec);

/// Streams frames from the plain-text trajectory format:
///
///     natoms <N>
///     frame <index> <time_ps>
///     <atom_id> <x> <y> <z>      (N lines, Angstrom)
///     ...
///
/// Blank lines are ignored. Errors carry `<source>:<line>`.
class TrajectoryReader {
  public:
    explicit TrajectoryReader(const std::filesystem::path &path);
    TrajectoryReader(std::unique_ptr<std::istream> in, std::string source);
    ~TrajectoryReader();
    TrajectoryReader(TrajectoryReader &&) noexcept;
    TrajectoryReader &operator=(TrajectoryReader &&) noexcept;

    [[nodiscard]] std::size_t natoms() const noexcept { return natoms_; }
    /// Next frame, or nullopt at end of input.
    [[nodiscard]] std::optional<Frame> next();

  private:
    bool next_content_line(std::string &line);
    [[noreturn]] void error(const std::string &msg) const;

    std::unique_ptr<std::istream> in_;
    std::string source_;
    std::size_t line_no_ = 0;
    std::size_t natoms_ = 0;
    std::optional<std::string> pending_;
    std::size_t frames_read_ = 0;
};

[[nodiscard]] std::vector<Frame> parse_trajectory(const std::filesystem::path &path);
[[nodiscard]] std::vector<Frame> parse_trajectory_text(std::string_view text);
void write_trajectory(std::ostream &out, std::span<const Frame> frames);

struct DistanceMatrix {
    std::vector<int> atom_ids;
    Eigen::MatrixXd values;
};

struct BipartiteMatrix {
    std::string seg_i;
    std::string seg_j;
    Eigen::MatrixXd values; ///< [[0, E], [E^T, 0]], 2k x 2k

    [[nodiscard]] Eigen::Index k() const noexcept { return values.rows() / 2; }
    [[nodiscard]] Eigen::MatrixXd cross_block() const {
        return values.topRightCorner(k(), k());
    }
};

using Metric = std::function<double(const Vec3 &, const Vec3 &)>;

/// Fills the upper triangle (k(k+1)/2 metric calls) and mirrors it.
[[nodiscard]] DistanceMatrix build_distance_matrix(const Frame &frame,
                                                   const Segment &seg,
                                                   const Metric &metric = euclidean_distance);

/// Cross-segment distances E_IJ (k^2 metric calls) in block form.
/// Segments must have equal length.
[[nodiscard]] BipartiteMatrix build_bipartite(const Frame &frame,
                                              const Segment &seg_i,
                                              const Segment &seg_j,
                                              const Metric &metric = euclidean_distance);
[[nodiscard]] BipartiteMatrix bipartite_from_block(const Eigen::MatrixXd &e,
                                                   std::string seg_i = "I",
                                                   std::string seg_j = "J");

/// Largest eigenvalue by dense self-adjoint eigendecomposition.
[[nodiscard]] double classical_lebm(const Eigen::MatrixXd &m);
[[nodiscard]] double classical_lebm(const Eigen::MatrixXcd &m);

struct CvPoint {
    long frame;
    double time;
    double lebm;
};

struct CvSeries {
    std::string seg_i;
    std::string seg_j;
    std::vector<CvPoint> points;
};

using LebmFn = std::function<double(const BipartiteMatrix &)>;

/// Per-frame LEBM of B_IJ; reads one frame at a time from `reader`.
[[nodiscard]] CvSeries cv_series(TrajectoryReader &reader, const Segment &seg_i,
                                 const Segment &seg_j, const LebmFn &lebm = {});
[[nodiscard]] CvSeries cv_series(std::span<const Frame> frames,
                                 const Segment &seg_i, const Segment &seg_j,
                                 const LebmFn &lebm = {});
/// `frame,time,lebm` with a header row.
[[nodiscard]] std::string cv_series_csv(const CvSeries &series);

/// B_IJ for two segments of k atoms drawn uniformly in [0, box]^3.
[[nodiscard]] Eigen::MatrixXd random_bipartite(std::size_t k, std::uint64_t seed,
                                               double box = 10.0);

} // namespace hywf::md
