#pragma once

// Extended-side analysis: walk a side's carrier geodesic tile by tile
// through the tiling and decide whether it ever enters an open tile, plus
// the parity certificate for chaotic Delone behaviour.

#include <map>
#include <optional>
#include <vector>

#include "hypercut/orbit.hpp"
#include "hypercut/triangle_group.hpp"

namespace hypercut {

enum class Chaoticity { Chaotic, NotChaotic };

// Quadrilateral domains give chaotic cut-and-project sets exactly when at
// least two signature entries are odd; hexagonal domains always do.
inline Chaoticity chaotic_certificate(const Signature& sig, DomainKind kind) {
    if (kind == DomainKind::Hexagonal) return Chaoticity::Chaotic;
    const int odd = (sig.m1() % 2) + (sig.m2() % 2) + (sig.m3() % 2);
    return odd >= 2 ? Chaoticity::Chaotic : Chaoticity::NotChaotic;
}

struct SideWalkResult {
    bool hit = false;
    std::optional<std::vector<int>> witness;  // word of a tile whose open
                                              // interior the extension enters
    std::optional<std::vector<int>> cycle;    // when the extension stays on
                                              // the edge network and closes
                                              // up: a word translating the
                                              // carrier along itself
};

namespace detail {

struct FanTile {
    std::vector<int> word;
    Mobius g;
};

// All tiles of the tiling incident to the vertex v of the base domain,
// found by breadth-first search restricted to tiles touching v.
inline std::vector<FanTile> vertex_fan(const FundamentalDomain& dom,
                                       const DiscPoint& v,
                                       std::size_t budget = 4096) {
    const std::vector<int> alphabet = dom.letter_alphabet();
    std::vector<Mobius> letters;
    for (int s : alphabet) letters.push_back(dom.letter(s));

    const auto touches = [&](const Mobius& g) {
        for (const DiscPoint& w : dom.vertices)
            if (dist(g.apply(w), v) < 1e-7) return true;
        return false;
    };

    QuantSet<4> seen(1e-7);
    const auto key = [](const Mobius& g) {
        return std::array<double, 4>{g.a().real(), g.a().imag(), g.b().real(),
                                     g.b().imag()};
    };

    std::vector<FanTile> fan;
    std::size_t head = 0;
    seen.insert(key(Mobius::identity()));
    fan.push_back({{}, Mobius::identity()});
    while (head < fan.size()) {
        if (fan.size() > budget)
            throw BudgetExceeded("vertex_fan: tile budget exhausted");
        const FanTile cur = fan[head++];
        for (std::size_t i = 0; i < letters.size(); ++i) {
            const Mobius g = cur.g * letters[i];
            if (!touches(g) || !seen.insert(key(g))) continue;
            FanTile next{cur.word, g};
            next.word.push_back(alphabet[i]);
            fan.push_back(std::move(next));
        }
    }
    return fan;
}

inline double angle_gap(Complex u, Complex w) {
    return std::abs(std::arg(w / u));
}

// One direction of the walk: start on the oriented base-domain edge
// a -> b and keep extending past the far vertex.
inline SideWalkResult walk_direction(const FundamentalDomain& dom, int a,
                                     int b, int depth) {
    std::vector<int> transport;  // word of h with actual picture = h(base)
    std::map<std::pair<int, int>, std::vector<int>> seen_states;

    for (int step = 0; step < depth; ++step) {
        const auto [it, fresh] = seen_states.insert({{a, b}, transport});
        if (!fresh) {
            // Periodic along tile boundaries: a closed geodesic. The element
            // carrying the first visit to the second translates the carrier
            // along itself.
            SideWalkResult r;
            std::vector<int> cycle = transport;
            for (auto k = it->second.rbegin(); k != it->second.rend(); ++k)
                cycle.push_back(-*k);
            r.cycle = std::move(cycle);
            return r;
        }
        const DiscPoint& va = dom.vertices[a];
        const DiscPoint& vb = dom.vertices[b];
        const Geodesic edge = Geodesic::through(va, vb);
        const Complex onward = edge.tangent(dist(va, vb));

        const auto fan = vertex_fan(dom, vb);
        int next_a = -1, next_b = -1;
        const std::vector<int>* step_word = nullptr;
        for (const FanTile& tile : fan) {
            for (int j = 0; j < static_cast<int>(dom.vertices.size()); ++j) {
                if (dist(tile.g.apply(dom.vertices[j]), vb) > 1e-7) continue;
                // Both edges of tile.g(F) emanating from vb.
                const int n = static_cast<int>(dom.vertices.size());
                for (int k : {(j + 1) % n, (j + n - 1) % n}) {
                    const DiscPoint far = tile.g.apply(dom.vertices[k]);
                    const Complex dir =
                        Geodesic::through(vb, far).tangent(0.0);
                    if (angle_gap(onward, dir) < 1e-6) {
                        next_a = j;
                        next_b = k;
                        step_word = &tile.word;
                    }
                }
                if (step_word) break;
            }
            if (step_word) break;
        }

        if (!step_word) {
            // The continuation leaves the edge network: it enters the open
            // sector of one of the fan tiles.
            const DiscPoint probe =
                Geodesic::from_direction(vb, onward).point(1e-3);
            for (const FanTile& tile : fan) {
                const DiscPoint local = tile.g.inverse().apply(probe);
                if (dom.strictly_inside(local, 1e-9)) {
                    SideWalkResult r;
                    r.hit = true;
                    std::vector<int> w = transport;
                    w.insert(w.end(), tile.word.begin(), tile.word.end());
                    r.witness = std::move(w);
                    return r;
                }
            }
            throw Error("extended side walk: ambiguous vertex passage");
        }

        transport.insert(transport.end(), step_word->begin(),
                         step_word->end());
        a = next_a;
        b = next_b;
    }
    return {};  // depth exhausted on the edge network
}

}  // namespace detail

// Does the complete geodesic carrying side `side_index` enter the open
// interior of some tile image? Walks `depth` vertex crossings each way.
inline SideWalkResult extended_side_hits_interior(const FundamentalDomain& dom,
                                                  int side_index,
                                                  int depth = 64) {
    const Side& s = dom.sides[side_index];
    SideWalkResult fwd = detail::walk_direction(dom, s.from, s.to, depth);
    if (fwd.hit) return fwd;
    return detail::walk_direction(dom, s.to, s.from, depth);
}

inline bool all_extended_sides_hit(const FundamentalDomain& dom,
                                   int depth = 64) {
    for (int i = 0; i < static_cast<int>(dom.sides.size()); ++i)
        if (!extended_side_hits_interior(dom, i, depth).hit) return false;
    return true;
}

}  // namespace hypercut
