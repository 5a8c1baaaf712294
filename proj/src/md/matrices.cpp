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
#include <cmath>
#include <cstdio>
#include <random>

#include <Eigen/Eigenvalues>

#include "hywf/error.hpp"
#include "hywf/md.hpp"

namespace hywf::md {

double Vec3::norm() const noexcept { return std::sqrt(x * x + y * y + z * z); }

double euclidean_distance(const Vec3 &i, const Vec3 &j) {
    const double dx = i.x - j.x;
    const double dy = i.y - j.y;
    const double dz = i.z - j.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

const Vec3 &Frame::position(int atom_id) const {
    for (const auto &a : atoms) {
        if (a.id == atom_id) {
            return a.pos;
        }
    }
    fail(ErrorCode::InvalidArgument, "atom " + std::to_string(atom_id) +
                                         " missing from frame " +
                                         std::to_string(index));
}

namespace {

std::vector<Vec3> positions(const Frame &frame, const Segment &seg) {
    if (seg.atom_ids.empty()) {
        fail(ErrorCode::InvalidArgument, "segment '" + seg.label + "' is empty");
    }
    std::vector<Vec3> out;
    out.reserve(seg.atom_ids.size());
    for (int id : seg.atom_ids) {
        out.push_back(frame.position(id));
    }
    return out;
}

} // namespace

DistanceMatrix build_distance_matrix(const Frame &frame, const Segment &seg,
                                     const Metric &metric) {
    const auto pos = positions(frame, seg);
    const auto k = static_cast<Eigen::Index>(pos.size());
    Eigen::MatrixXd d(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = i; j < k; ++j) {
            const double v = metric(pos[static_cast<std::size_t>(i)],
                                    pos[static_cast<std::size_t>(j)]);
            d(i, j) = v;
            d(j, i) = v;
        }
    }
    return DistanceMatrix{seg.atom_ids, std::move(d)};
}

BipartiteMatrix bipartite_from_block(const Eigen::MatrixXd &e, std::string seg_i,
                                     std::string seg_j) {
    if (e.rows() != e.cols() || e.rows() == 0) {
        fail(ErrorCode::InvalidArgument, "E_IJ block must be square and nonempty");
    }
    const auto k = e.rows();
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2 * k, 2 * k);
    b.topRightCorner(k, k) = e;
    b.bottomLeftCorner(k, k) = e.transpose();
    return BipartiteMatrix{std::move(seg_i), std::move(seg_j), std::move(b)};
}

BipartiteMatrix build_bipartite(const Frame &frame, const Segment &seg_i,
                                const Segment &seg_j, const Metric &metric) {
    if (seg_i.atom_ids.size() != seg_j.atom_ids.size()) {
        fail(ErrorCode::InvalidArgument,
             "segments '" + seg_i.label + "' and '" + seg_j.label +
                 "' differ in length");
    }
    const auto pi = positions(frame, seg_i);
    const auto pj = positions(frame, seg_j);
    const auto k = static_cast<Eigen::Index>(pi.size());
    Eigen::MatrixXd e(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) {
            e(a, b) = metric(pi[static_cast<std::size_t>(a)],
                             pj[static_cast<std::size_t>(b)]);
        }
    }
    return bipartite_from_block(e, seg_i.label, seg_j.label);
}

double classical_lebm(const Eigen::MatrixXd &m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        fail(ErrorCode::InvalidArgument, "matrix must be square and nonempty");
    }
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
        fail(ErrorCode::InvalidArgument, "matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double classical_lebm(const Eigen::MatrixXcd &m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        fail(ErrorCode::InvalidArgument, "matrix must be square and nonempty");
    }
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-9) {
        fail(ErrorCode::InvalidArgument, "matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

namespace {

template <typename Next>
CvSeries cv_series_impl(Next &&next, const Segment &seg_i, const Segment &seg_j,
                        const LebmFn &lebm) {
    CvSeries out{seg_i.label, seg_j.label, {}};
    while (auto frame = next()) {
        const auto b = build_bipartite(*frame, seg_i, seg_j);
        const double value = lebm ? lebm(b) : classical_lebm(b.values);
        out.points.push_back(CvPoint{frame->index, frame->time, value});
    }
    if (out.points.empty()) {
        fail(ErrorCode::InvalidArgument, "cv_series needs at least one frame");
    }
    return out;
}

} // namespace

CvSeries cv_series(TrajectoryReader &reader, const Segment &seg_i,
                   const Segment &seg_j, const LebmFn &lebm) {
    return cv_series_impl([&] { return reader.next(); }, seg_i, seg_j, lebm);
}

CvSeries cv_series(std::span<const Frame> frames, const Segment &seg_i,
                   const Segment &seg_j, const LebmFn &lebm) {
    std::size_t i = 0;
    return cv_series_impl(
        [&]() -> std::optional<Frame> {
            if (i < frames.size()) {
                return frames[i++];
            }
            return std::nullopt;
        },
        seg_i, seg_j, lebm);
}

std::string cv_series_csv(const CvSeries &series) {
    std::string out = "frame,time,lebm\n";
    char buf[96];
    for (const auto &p : series.points) {
        std::snprintf(buf, sizeof buf, "%ld,%.6f,%.12g\n", p.frame, p.time, p.lebm);
        out += buf;
    }
    return out;
}

Eigen::MatrixXd random_bipartite(std::size_t k, std::uint64_t seed, double box) {
    if (k == 0) {
        fail(ErrorCode::InvalidArgument, "segment length must be >= 1");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(0.0, box);
    Frame frame;
    Segment a{"I", {}};
    Segment b{"J", {}};
    for (std::size_t i = 0; i < 2 * k; ++i) {
        const int id = static_cast<int>(i);
        frame.atoms.push_back(Atom{id, Vec3{coord(rng), coord(rng), coord(rng)}});
        (i < k ? a : b).atom_ids.push_back(id);
    }
    return build_bipartite(frame, a, b).values;
}

} // namespace hywf::md
