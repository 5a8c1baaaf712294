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
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "hywf/error.hpp"
#include "hywf/md.hpp"

namespace hywf::md {

namespace {

std::vector<std::string> split_ws(const std::string &line) {
    std::istringstream ls(line);
    std::vector<std::string> out;
    std::string tok;
    while (ls >> tok) {
        out.push_back(tok);
    }
    return out;
}

template <typename T> std::optional<T> parse_number(const std::string &s) {
    T value{};
    const auto *first = s.data();
    const auto *last = s.data() + s.size();
    if constexpr (std::is_floating_point_v<T>) {
        // from_chars for double does not accept a leading '+'.
        if (first != last && *first == '+') {
            ++first;
        }
    }
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last) {
        return std::nullopt;
    }
    return value;
}

} // namespace

TrajectoryReader::TrajectoryReader(const std::filesystem::path &path)
    : source_(path.string()) {
    auto f = std::make_unique<std::ifstream>(path);
    if (!*f) {
        fail(ErrorCode::Io, "cannot open trajectory '" + source_ + "'");
    }
    in_ = std::move(f);
    std::string line;
    if (!next_content_line(line)) {
        error("empty trajectory");
    }
    const auto tok = split_ws(line);
    std::optional<long> n;
    if (tok.size() == 2 && tok[0] == "natoms") {
        n = parse_number<long>(tok[1]);
    }
    if (!n || *n < 1) {
        error("expected header 'natoms <N>'");
    }
    natoms_ = static_cast<std::size_t>(*n);
}

TrajectoryReader::TrajectoryReader(std::unique_ptr<std::istream> in,
                                   std::string source)
    : in_(std::move(in)), source_(std::move(source)) {
    std::string line;
    if (!next_content_line(line)) {
        error("empty trajectory");
    }
    const auto tok = split_ws(line);
    std::optional<long> n;
    if (tok.size() == 2 && tok[0] == "natoms") {
        n = parse_number<long>(tok[1]);
    }
    if (!n || *n < 1) {
        error("expected header 'natoms <N>'");
    }
    natoms_ = static_cast<std::size_t>(*n);
}

TrajectoryReader::~TrajectoryReader() = default;
TrajectoryReader::TrajectoryReader(TrajectoryReader &&) noexcept = default;
TrajectoryReader &TrajectoryReader::operator=(TrajectoryReader &&) noexcept = default;

void TrajectoryReader::error(const std::string &msg) const {
    fail(ErrorCode::Parse, source_ + ":" + std::to_string(line_no_) + ": " + msg);
}

bool TrajectoryReader::next_content_line(std::string &line) {
    if (pending_) {
        line = std::move(*pending_);
        pending_.reset();
        return true;
    }
    while (std::getline(*in_, line)) {
        ++line_no_;
        if (line.find_first_not_of(" \t\r") != std::string::npos) {
            return true;
        }
    }
    return false;
}

std::optional<Frame> TrajectoryReader::next() {
    std::string line;
    if (!next_content_line(line)) {
        if (frames_read_ == 0) {
            error("trajectory has no frames");
        }
        return std::nullopt;
    }
    auto tok = split_ws(line);
    Frame frame;
    {
        std::optional<long> index;
        std::optional<double> time;
        if (tok.size() == 3 && tok[0] == "frame") {
            index = parse_number<long>(tok[1]);
            time = parse_number<double>(tok[2]);
        }
        if (!index || !time) {
            error("expected 'frame <index> <time_ps>'");
        }
        frame.index = *index;
        frame.time = *time;
    }
    frame.atoms.reserve(natoms_);
    std::unordered_set<int> seen;
    while (frame.atoms.size() < natoms_) {
        if (!next_content_line(line)) {
            error("frame " + std::to_string(frame.index) + " has " +
                  std::to_string(frame.atoms.size()) + " atoms, expected " +
                  std::to_string(natoms_));
        }
        tok = split_ws(line);
        if (!tok.empty() && tok[0] == "frame") {
            error("frame " + std::to_string(frame.index) + " has " +
                  std::to_string(frame.atoms.size()) + " atoms, expected " +
                  std::to_string(natoms_));
        }
        if (tok.size() != 4) {
            error("expected '<atom_id> <x> <y> <z>'");
        }
        const auto id = parse_number<int>(tok[0]);
        const auto x = parse_number<double>(tok[1]);
        const auto y = parse_number<double>(tok[2]);
        const auto z = parse_number<double>(tok[3]);
        if (!id || !x || !y || !z) {
            error("malformed atom line");
        }
        if (!seen.insert(*id).second) {
            error("duplicate atom id " + std::to_string(*id));
        }
        frame.atoms.push_back(Atom{*id, Vec3{*x, *y, *z}});
    }
    // A following atom line means this frame has too many atoms.
    if (next_content_line(line)) {
        tok = split_ws(line);
        if (tok.empty() || tok[0] != "frame") {
            error("frame " + std::to_string(frame.index) +
                  " has more than " + std::to_string(natoms_) + " atoms");
        }
        pending_ = std::move(line);
    }
    ++frames_read_;
    return frame;
}

std::vector<Frame> parse_trajectory(const std::filesystem::path &path) {
    TrajectoryReader reader(path);
    std::vector<Frame> frames;
    while (auto f = reader.next()) {
        frames.push_back(std::move(*f));
    }
    return frames;
}

std::vector<Frame> parse_trajectory_text(std::string_view text) {
    TrajectoryReader reader(
        std::make_unique<std::istringstream>(std::string(text)), "<text>");
    std::vector<Frame> frames;
    while (auto f = reader.next()) {
        frames.push_back(std::move(*f));
    }
    return frames;
}

void write_trajectory(std::ostream &out, std::span<const Frame> frames) {
    if (frames.empty()) {
        fail(ErrorCode::InvalidArgument, "no frames to write");
    }
    out << "natoms " << frames.front().atoms.size() << '\n';
    char buf[128];
    for (const auto &f : frames) {
        std::snprintf(buf, sizeof buf, "frame %ld %.6f\n", f.index, f.time);
        out << buf;
        for (const auto &a : f.atoms) {
            std::snprintf(buf, sizeof buf, "%d %.6f %.6f %.6f\n", a.id, a.pos.x,
                          a.pos.y, a.pos.z);
            out << buf;
        }
    }
}

std::vector<Segment> parse_segments(std::string_view spec) {
    std::vector<Segment> out;
    std::string s(spec);
    std::size_t start = 0;
    while (start < s.size()) {
        auto end = s.find(';', start);
        if (end == std::string::npos) {
            end = s.size();
        }
        const std::string part = s.substr(start, end - start);
        start = end + 1;
        if (part.find_first_not_of(' ') == std::string::npos) {
            continue;
        }
        const auto eq = part.find('=');
        if (eq == std::string::npos || eq == 0) {
            fail(ErrorCode::Parse, "segment '" + part + "' is not LABEL=id,id,...");
        }
        Segment seg{part.substr(0, eq), {}};
        std::string ids = part.substr(eq + 1);
        std::size_t p = 0;
        while (p <= ids.size()) {
            auto comma = ids.find(',', p);
            if (comma == std::string::npos) {
                comma = ids.size();
            }
            const auto id = parse_number<int>(ids.substr(p, comma - p));
            if (!id) {
                fail(ErrorCode::Parse, "bad atom id in segment '" + part + "'");
            }
            seg.atom_ids.push_back(*id);
            p = comma + 1;
        }
        out.push_back(std::move(seg));
    }
    if (out.empty()) {
        fail(ErrorCode::Parse, "no segments given");
    }
    return out;
}

} // namespace hywf::md
