#include "emptytri/order_types.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <numeric>

#include "emptytri/parallel.hpp"

namespace emptytri {

namespace {

std::size_t triple_index(std::size_t k, std::size_t h, std::size_t i, std::size_t j) {
    // Triples before h, then pairs (i, j) above h before i, then offset of j.
    std::size_t idx = 0;
    for (std::size_t a = 0; a < h; ++a) idx += (k - a - 1) * (k - a - 2) / 2;
    for (std::size_t b = h + 1; b < i; ++b) idx += k - b - 1;
    return idx + (j - i - 1);
}

// Dense table of signs for all ordered triples, zero where indices repeat.
struct SignCube {
    std::size_t k;
    std::array<std::int8_t, kMaxLabelPoints * kMaxLabelPoints * kMaxLabelPoints> s{};
    std::int8_t operator()(std::size_t a, std::size_t b, std::size_t c) const {
        return s[(a * kMaxLabelPoints + b) * kMaxLabelPoints + c];
    }
};

SignCube cube_of(const Chirotope& chi) {
    SignCube cube{chi.k};
    for (std::size_t a = 0; a < chi.k; ++a)
        for (std::size_t b = 0; b < chi.k; ++b)
            for (std::size_t c = 0; c < chi.k; ++c)
                if (a != b && b != c && a != c)
                    cube.s[(a * kMaxLabelPoints + b) * kMaxLabelPoints + c] = static_cast<std::int8_t>(chi.sign(a, b, c));
    return cube;
}

bool payload_matches(const PointSet& payload, const OrderTypeLabel& target) {
    if (target.k < 3) return true;
    // A degenerate payload has no order type in the general-position sense.
    if (find_collinear_triple(payload)) return false;
    return canonical_label(payload) == target;
}

template <class Size, class Payload>
std::optional<std::size_t> first_match(std::size_t squares, const OrderTypeLabel& target, unsigned threads,
                                       Size&& size_of, Payload&& payload_of) {
    auto hit = [&](std::size_t s) { return size_of(s) == target.k && payload_matches(payload_of(s), target); };
    if (threads <= 1) {
        for (std::size_t s = 0; s < squares; ++s)
            if (hit(s)) return s;
        return std::nullopt;
    }
    // Blocks are scanned in parallel; the minimum hit index wins.
    constexpr std::size_t kBlock = 256;
    const std::size_t blocks = (squares + kBlock - 1) / kBlock;
    std::atomic<std::size_t> best{squares};
    parallel_for(blocks, threads, [&](std::size_t b) {
        const std::size_t lo = b * kBlock, hi = std::min(squares, lo + kBlock);
        for (std::size_t s = lo; s < hi && s < best.load(std::memory_order_relaxed); ++s) {
            if (!hit(s)) continue;
            auto cur = best.load();
            while (s < cur && !best.compare_exchange_weak(cur, s)) {
            }
            return;
        }
    });
    const auto first = best.load();
    return first < squares ? std::optional<std::size_t>(first) : std::nullopt;
}

}  // namespace

int Chirotope::sign(std::size_t a, std::size_t b, std::size_t c) const {
    if (a >= k || b >= k || c >= k || a == b || b == c || a == c)
        throw std::out_of_range("chirotope sign needs three distinct valid indices");
    // Sort while tracking the parity of the permutation.
    int parity = 1;
    if (a > b) std::swap(a, b), parity = -parity;
    if (b > c) std::swap(b, c), parity = -parity;
    if (a > b) std::swap(a, b), parity = -parity;
    return parity * signs[triple_index(k, a, b, c)];
}

Chirotope chirotope(const PointSet& pts) {
    Chirotope chi{pts.size(), {}};
    chi.signs.reserve(triple_count(pts.size()));
    for (std::size_t h = 0; h < pts.size(); ++h)
        for (std::size_t i = h + 1; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                const int o = orientation(pts[h], pts[i], pts[j]);
                if (o == 0) throw GeneralPositionError({h, i, j});
                chi.signs.push_back(static_cast<std::int8_t>(o));
            }
    return chi;
}

OrderTypeLabel canonical_label(const Chirotope& chi) {
    if (chi.k > kMaxLabelPoints)
        throw OrderTypeError("canonical_label supports at most " + std::to_string(kMaxLabelPoints) + " points, got " +
                             std::to_string(chi.k));
    const std::size_t k = chi.k;
    OrderTypeLabel best{k, chi.signs};
    if (k < 3) return best;
    const SignCube cube = cube_of(chi);

    // perm[t] is the original index that receives the new label t.
    std::array<std::size_t, kMaxLabelPoints> perm{};
    std::iota(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k), std::size_t{0});
    std::vector<std::int8_t> cand(best.signs.size());
    do {
        std::size_t pos = 0;
        int cmp = 0;  // sign of cand - best on the prefix written so far
        for (std::size_t h = 0; h < k && cmp <= 0; ++h)
            for (std::size_t i = h + 1; i < k && cmp <= 0; ++i)
                for (std::size_t j = i + 1; j < k; ++j, ++pos) {
                    const auto s = cube(perm[h], perm[i], perm[j]);
                    cand[pos] = s;
                    if (cmp == 0 && s != best.signs[pos]) cmp = s < best.signs[pos] ? -1 : 1;
                    if (cmp > 0) break;
                }
        if (cmp < 0) best.signs = cand;
    } while (std::next_permutation(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k)));
    return best;
}

OrderTypeLabel canonical_label(const PointSet& pts) {
    if (pts.size() > kMaxLabelPoints)
        throw OrderTypeError("canonical_label supports at most " + std::to_string(kMaxLabelPoints) + " points, got " +
                             std::to_string(pts.size()));
    return canonical_label(chirotope(pts));
}

std::string OrderTypeLabel::str() const {
    std::string out = std::to_string(k) + ":";
    for (auto s : signs) out.push_back(s > 0 ? '+' : '-');
    return out;
}

OrderTypeLabel OrderTypeLabel::parse(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos || colon == 0) throw OrderTypeError("order type label needs the form k:signs");
    std::size_t k = 0;
    for (char c : text.substr(0, colon)) {
        if (c < '0' || c > '9') throw OrderTypeError("bad point count in order type label");
        k = k * 10 + static_cast<std::size_t>(c - '0');
        if (k > 64) throw OrderTypeError("point count in order type label is too large");
    }
    OrderTypeLabel label{k, {}};
    for (char c : text.substr(colon + 1)) {
        if (c == '+')
            label.signs.push_back(1);
        else if (c == '-')
            label.signs.push_back(-1);
        else
            throw OrderTypeError(std::string("bad sign character '") + c + "' in order type label");
    }
    if (label.signs.size() != triple_count(k))
        throw OrderTypeError("order type label for " + std::to_string(k) + " points needs " +
                             std::to_string(triple_count(k)) + " signs");
    return label;
}

SameTypeResult same_type(const PointSet& a, const PointSet& b) {
    if (a.size() != b.size()) return {false, true};
    return {canonical_label(a) == canonical_label(b), false};
}

bool is_convex_position(const PointSet& pts) {
    const std::size_t n = pts.size();
    if (n < 4) return true;
    std::vector<Point> p(pts.begin(), pts.end());
    std::sort(p.begin(), p.end());
    // Monotone chain, popping on non-left turns.
    std::vector<Point> hull(2 * n);
    std::size_t h = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (h >= 2 && orientation(hull[h - 2], hull[h - 1], p[i]) <= 0) --h;
        hull[h++] = p[i];
    }
    for (std::size_t i = n - 1, lower = h + 1; i-- > 0;) {
        while (h >= lower && orientation(hull[h - 2], hull[h - 1], p[i]) <= 0) --h;
        hull[h++] = p[i];
    }
    return h - 1 == n;
}

OrderTypeLabel convex_position_label(std::size_t k) {
    // Points on a parabola are in convex position.
    std::vector<Point> v;
    for (std::size_t i = 0; i < k; ++i) v.push_back({static_cast<std::int64_t>(i), static_cast<std::int64_t>(i * i)});
    return canonical_label(PointSet(std::move(v)));
}

std::optional<std::size_t> find_type_in_squares(const PointSet& pts, const GridOccupancy& occupancy,
                                                const OrderTypeLabel& target, unsigned threads) {
    return first_match(
        occupancy.payloads.size(), target, threads, [&](std::size_t s) { return occupancy.payloads[s].size(); },
        [&](std::size_t s) { return pts.subset(occupancy.payloads[s]); });
}

std::optional<std::size_t> find_type_in_squares(const PoissonGridModel& model, const OrderTypeLabel& target,
                                                unsigned threads) {
    return first_match(
        model.payloads.size(), target, threads, [&](std::size_t s) { return model.payloads[s].size(); },
        [&](std::size_t s) -> const PointSet& { return model.payloads[s]; });
}

}  // namespace emptytri
