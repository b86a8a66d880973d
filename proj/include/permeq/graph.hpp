#pragma once

#include <cstdint>
#include <vector>

#include "permeq/perm.hpp"

namespace permeq {

/// The action graph of a k-tuple on [n]: vertex set [n], one edge color per
/// coordinate, and for color i an edge x -> sigma_i(x). Every vertex has
/// exactly one outgoing and one incoming edge of each color.
class LabeledGraph {
public:
    LabeledGraph() = default;

    explicit LabeledGraph(const PermTuple& tuple) {
        fwd_.reserve(tuple.arity());
        bwd_.reserve(tuple.arity());
        for (std::size_t i = 0; i < tuple.arity(); ++i) {
            fwd_.push_back(tuple.perm(i).images());
            bwd_.push_back(tuple.inv_perm(i).images());
        }
    }

    std::size_t rank() const { return fwd_.size(); }
    std::size_t degree() const { return fwd_.empty() ? 0 : fwd_.front().size(); }

    std::uint32_t fwd(std::size_t color, std::uint32_t x) const { return fwd_[color][x]; }
    std::uint32_t bwd(std::size_t color, std::uint32_t x) const { return bwd_[color][x]; }

private:
    std::vector<std::vector<std::uint32_t>> fwd_;
    std::vector<std::vector<std::uint32_t>> bwd_;
};

inline LabeledGraph build_graph(const PermTuple& tuple) { return LabeledGraph(tuple); }

/// Vertices at undirected distance <= radius from center, with their depths,
/// in BFS discovery order (center first; each vertex's neighbors examined
/// color by color, forward before backward). The position in `order` is the
/// vertex's canonical label within the ball.
struct BallScan {
    std::vector<std::uint32_t> order;
    std::vector<std::size_t> depth; // parallel to order
};

inline BallScan ball_scan(const LabeledGraph& g, std::uint32_t center, std::size_t radius) {
    std::vector<std::int64_t> label(g.degree(), -1);
    BallScan scan;
    scan.order.push_back(center);
    scan.depth.push_back(0);
    label[center] = 0;
    for (std::size_t head = 0; head < scan.order.size(); ++head) {
        if (scan.depth[head] == radius) continue;
        const std::uint32_t u = scan.order[head];
        for (std::size_t c = 0; c < g.rank(); ++c) {
            for (std::uint32_t v : {g.fwd(c, u), g.bwd(c, u)}) {
                if (label[v] >= 0) continue;
                label[v] = static_cast<std::int64_t>(scan.order.size());
                scan.order.push_back(v);
                scan.depth.push_back(scan.depth[head] + 1);
            }
        }
    }
    return scan;
}

inline std::vector<std::uint32_t> ball_vertices(const LabeledGraph& g, std::uint32_t center,
                                                std::size_t radius) {
    return ball_scan(g, center, radius).order;
}

/// Canonical code of the rooted radius-r ball around a vertex: the vertices
/// within distance r together with the edges a closed walk of length <= 2r
/// from the root can traverse, which are exactly the edges (u, c, v) with
/// depth(u) + 1 + depth(v) <= 2r. An edge between two depth-r vertices needs
/// a longer walk, so it is not part of the radius-r view and is left out;
/// this is what makes the code carry the same information as the set of
/// length-<=2r words fixing the root.
///
/// BFS only ever scans from vertices of depth < r, so the discovery order —
/// and with it the labeling — depends on the recorded edges alone. In a graph
/// with in/out degree exactly one per color that makes the labeling canonical:
/// two balls are isomorphic as rooted edge-colored graphs iff codes are equal.
///
/// Layout: [rank, radius, m] followed by m rows of `rank` entries, row j
/// giving for each color the label of vertex j's forward neighbor, or -1 when
/// that edge is not part of the ball.
using BallCode = std::vector<std::int32_t>;

inline BallCode ball_code(const LabeledGraph& g, std::uint32_t center, std::size_t radius) {
    const BallScan scan = ball_scan(g, center, radius);
    std::vector<std::int32_t> label(g.degree(), -1);
    std::vector<std::size_t> depth_of(g.degree(), 0);
    for (std::size_t j = 0; j < scan.order.size(); ++j) {
        label[scan.order[j]] = static_cast<std::int32_t>(j);
        depth_of[scan.order[j]] = scan.depth[j];
    }
    BallCode code;
    code.reserve(3 + scan.order.size() * g.rank());
    code.push_back(static_cast<std::int32_t>(g.rank()));
    code.push_back(static_cast<std::int32_t>(radius));
    code.push_back(static_cast<std::int32_t>(scan.order.size()));
    for (std::size_t j = 0; j < scan.order.size(); ++j) {
        const std::uint32_t u = scan.order[j];
        for (std::size_t c = 0; c < g.rank(); ++c) {
            const std::uint32_t v = g.fwd(c, u);
            const bool in_ball = label[v] >= 0;
            const bool visible = in_ball && scan.depth[j] + 1 + depth_of[v] <= 2 * radius;
            code.push_back(visible ? label[v] : -1);
        }
    }
    return code;
}

} // namespace permeq
