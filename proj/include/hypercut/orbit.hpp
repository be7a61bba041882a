#pragma once

// Orbit enumeration over a fundamental domain's side-pairing group, the
// injectivity radius, and the (truncated) length spectrum.

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "hypercut/triangle_group.hpp"
#include "hypercut/util.hpp"

namespace hypercut {

struct GroupElementRecord {
    std::vector<int> word;  // signed pairing letters, composed left to right
    Mobius mobius;
    DiscPoint image_of_base;
};

struct OrbitOptions {
    double max_radius = 12.0;
    std::size_t node_budget = 1'000'000;
};

inline std::size_t orbit_budget_from_env(std::size_t fallback = 1'000'000) {
    if (const char* s = std::getenv("HYPERCUT_BUDGET")) {
        const long long v = std::atoll(s);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    return fallback;
}

namespace detail {

// Breadth-first orbit of `base` with point-level dedup, collecting elements
// whose image lies within `keep_radius` of `focus`; expansion is pruned one
// domain diameter beyond that.
inline std::vector<GroupElementRecord> orbit_bfs(const FundamentalDomain& dom,
                                                 const DiscPoint& base,
                                                 const DiscPoint& focus,
                                                 double keep_radius,
                                                 std::size_t node_budget) {
    const std::vector<int> alphabet = dom.letter_alphabet();
    std::vector<Mobius> letters;
    for (int s : alphabet) letters.push_back(dom.letter(s));

    QuantSet<2> visited(tol::kOrbitDedup);
    std::vector<GroupElementRecord> kept;
    std::deque<GroupElementRecord> frontier;

    GroupElementRecord id{{}, Mobius::identity(), base};
    visited.insert({base.re(), base.im()});
    if (dist(focus, base) <= keep_radius + 1e-12) kept.push_back(id);
    frontier.push_back(std::move(id));

    std::size_t expanded = 0;
    const double prune = keep_radius + dom.diameter;
    while (!frontier.empty()) {
        const GroupElementRecord cur = std::move(frontier.front());
        frontier.pop_front();
        if (++expanded > node_budget)
            throw BudgetExceeded("orbit enumeration: node budget exhausted");
        for (std::size_t i = 0; i < letters.size(); ++i) {
            GroupElementRecord next;
            next.mobius = cur.mobius * letters[i];
            next.image_of_base = next.mobius.apply(base);
            if (!visited.insert(
                    {next.image_of_base.re(), next.image_of_base.im()}))
                continue;
            const double d = dist(focus, next.image_of_base);
            if (d > prune) continue;
            next.word = cur.word;
            next.word.push_back(alphabet[i]);
            if (d <= keep_radius + 1e-12) kept.push_back(next);
            frontier.push_back(std::move(next));
        }
    }
    return kept;
}

}  // namespace detail

// All orbit points of `base` within hyperbolic distance R of `base`, each
// once, with a witness word. R = 0 yields the identity record alone.
inline std::vector<GroupElementRecord> enumerate_orbit(
    const FundamentalDomain& dom, const DiscPoint& base, double R,
    const OrbitOptions& opts = {}) {
    if (R < 0.0) throw DegenerateInput("enumerate_orbit: negative radius");
    if (R > opts.max_radius)
        throw DegenerateInput("enumerate_orbit: radius exceeds configured max");
    return detail::orbit_bfs(dom, base, base, R, opts.node_budget);
}

// inj(x) = half the minimal distance from x to another point of its orbit.
// A side-pairing image of x lies within two domain diameters, so the
// minimum is always realized inside the truncated search ball.
inline double injectivity_radius(const FundamentalDomain& dom,
                                 const DiscPoint& x,
                                 std::size_t node_budget = 1'000'000) {
    const double R = 2.2 * dom.diameter;
    const auto orbit = detail::orbit_bfs(dom, x, x, R, node_budget);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& rec : orbit) {
        const double d = dist(x, rec.image_of_base);
        if (d > 1e-9) best = std::min(best, d);
    }
    return best / 2.0;
}

struct SpectrumEntry {
    double length;
    std::vector<int> witness;  // word evaluating to a hyperbolic element of
                               // this translation length
};

// Translation lengths 2 arccosh(|tr|/2) of the hyperbolic elements among all
// reduced words up to max_word letters, deduplicated at 1e-7 and sorted,
// keeping one witness word per length. A lower approximation of the length
// spectrum.
inline std::vector<SpectrumEntry> length_spectrum_entries(
    const FundamentalDomain& dom, int max_word, int word_cap = 10) {
    if (max_word > word_cap)
        throw BudgetExceeded("length_spectrum: word length over cap");
    const std::vector<int> alphabet = dom.letter_alphabet();
    std::vector<Mobius> letters;
    for (int s : alphabet) letters.push_back(dom.letter(s));
    const int n = static_cast<int>(alphabet.size());

    std::vector<SpectrumEntry> found;
    // Depth-first over reduced words (no letter followed by its inverse).
    std::vector<int> stack_letter;
    std::vector<Mobius> stack_mobius{Mobius::identity()};
    const auto is_inverse_pair = [&](int a, int b) {
        return alphabet[a] == -alphabet[b];
    };
    const std::function<void()> descend = [&] {
        const int depth = static_cast<int>(stack_letter.size());
        if (depth > 0) {
            const Mobius& g = stack_mobius.back();
            if (g.classify() == MobiusKind::Hyperbolic) {
                std::vector<int> word;
                for (int i : stack_letter) word.push_back(alphabet[i]);
                found.push_back({g.translation_length(), std::move(word)});
            }
        }
        if (depth == max_word) return;
        for (int i = 0; i < n; ++i) {
            if (depth > 0 && is_inverse_pair(stack_letter.back(), i)) continue;
            stack_letter.push_back(i);
            stack_mobius.push_back(stack_mobius.back() * letters[i]);
            descend();
            stack_letter.pop_back();
            stack_mobius.pop_back();
        }
    };
    descend();

    std::stable_sort(found.begin(), found.end(),
                     [](const SpectrumEntry& a, const SpectrumEntry& b) {
                         return a.length < b.length;
                     });
    std::vector<SpectrumEntry> out;
    for (auto& e : found)
        if (out.empty() || e.length - out.back().length > 1e-7)
            out.push_back(std::move(e));
    return out;
}

inline std::vector<double> length_spectrum(const FundamentalDomain& dom,
                                           int max_word, int word_cap = 10) {
    std::vector<double> out;
    for (const auto& e : length_spectrum_entries(dom, max_word, word_cap))
        out.push_back(e.length);
    return out;
}

}  // namespace hypercut
