#include "emptytri/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "emptytri/parallel.hpp"

namespace emptytri {

namespace {

void check_engine_size(std::size_t n) {
    if (n > kMaxEnginePoints)
        throw CapacityError("point set of size " + std::to_string(n) + " exceeds the engine limit " +
                            std::to_string(kMaxEnginePoints));
}

std::vector<std::uint32_t> lexicographic_order(const PointSet& pts) {
    std::vector<std::uint32_t> order(pts.size());
    std::iota(order.begin(), order.end(), 0U);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return pts[a] < pts[b]; });
    return order;
}

// Sign of cross(p, q, r). Coordinate differences are exact in double; the
// products are filtered against a forward error bound and fall back to the
// exact 128-bit determinant when the bound is inconclusive.
inline int fast_orientation(const Point& p, const Point& q, const Point& r) noexcept {
    const double ax = static_cast<double>(q.x - p.x), ay = static_cast<double>(q.y - p.y);
    const double bx = static_cast<double>(r.x - p.x), by = static_cast<double>(r.y - p.y);
    const double l = ax * by, rgt = ay * bx;
    const double det = l - rgt;
    const double bound = (std::abs(l) + std::abs(rgt)) * 0x1.0p-50;
    if (det > bound) return 1;
    if (det < -bound) return -1;
    return orientation(p, q, r);
}

// Per-anchor scratch space. Each fan vertex b owns a FIFO queue of the fan
// vertices a < b already known to see b, stored as a linked list in `pool`.
struct SweepWorkspace {
    struct Key {
        double slope;
        std::uint32_t index;
    };
    struct Node {
        std::uint32_t vertex;
        std::uint32_t next;
    };
    static constexpr std::uint32_t kNone = 0xFFFFFFFFU;

    std::vector<Key> keys;
    std::vector<std::uint32_t> fan;
    std::vector<Point> coords;
    std::vector<Node> pool;
    std::vector<std::uint32_t> head, tail;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> stack;
};

// Enumerates the empty triangles whose lexicographically least vertex is
// order[pos]. The remaining candidates are sorted counterclockwise around the
// anchor, and the triangle (anchor, fan[a], fan[b]) is empty exactly when fan
// vertices a and b see each other inside the star-shaped fan polygon. Every
// visible pair is produced in amortised O(1) by chaining visibility through
// intermediate vertices. emit(u, v) receives global point indices.
template <class Emit>
void sweep_anchor(const PointSet& pts, std::span<const std::uint32_t> order, std::size_t pos, SweepWorkspace& ws,
                  Emit&& emit) {
    const std::uint32_t anchor = order[pos];
    const Point& p = pts[anchor];
    const std::size_t m = order.size() - pos - 1;
    if (m < 2) return;

    // Candidates lie in the half-plane x > p.x or (x == p.x, y > p.y), where
    // the slope dy/dx orders them counterclockwise. Correctly rounded division
    // is monotone, so only runs of equal keys need the exact comparison.
    auto& keys = ws.keys;
    keys.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const auto idx = order[pos + 1 + k];
        const auto dx = pts[idx].x - p.x, dy = pts[idx].y - p.y;
        keys[k] = {dx == 0 ? std::numeric_limits<double>::infinity() : static_cast<double>(dy) / static_cast<double>(dx), idx};
    }
    std::sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) { return a.slope < b.slope; });
    for (std::size_t b = 0; b < m;) {
        std::size_t e = b + 1;
        while (e < m && keys[e].slope == keys[b].slope) ++e;
        if (e - b > 1)
            std::sort(keys.begin() + static_cast<std::ptrdiff_t>(b), keys.begin() + static_cast<std::ptrdiff_t>(e),
                      [&](const auto& u, const auto& v) { return cross(p, pts[u.index], pts[v.index]) > 0; });
        for (std::size_t k = b; k + 1 < e; ++k)
            if (cross(p, pts[keys[k].index], pts[keys[k + 1].index]) == 0)
                throw GeneralPositionError({anchor, keys[k].index, keys[k + 1].index});
        b = e;
    }

    auto& fan = ws.fan;
    auto& xy = ws.coords;
    fan.resize(m);
    xy.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        fan[k] = keys[k].index;
        xy[k] = pts[fan[k]];
    }

    ws.head.assign(m, SweepWorkspace::kNone);
    ws.tail.assign(m, SweepWorkspace::kNone);
    ws.pool.clear();
    auto enqueue = [&](std::uint32_t q, std::uint32_t v) {
        const auto node = static_cast<std::uint32_t>(ws.pool.size());
        ws.pool.push_back({v, SweepWorkspace::kNone});
        if (ws.tail[q] == SweepWorkspace::kNone)
            ws.head[q] = node;
        else
            ws.pool[ws.tail[q]].next = node;
        ws.tail[q] = node;
    };

    auto& stack = ws.stack;
    for (std::uint32_t i = 0; i + 1 < m; ++i) {
        stack.clear();
        stack.emplace_back(i, i + 1);
        while (!stack.empty()) {
            const auto [a, b] = stack.back();
            const auto h = ws.head[a];
            // k sees a and a sees b; k sees b iff fan[a] is not inside the
            // triangle (anchor, fan[k], fan[b]), i.e. k -> a -> b turns left.
            if (h != SweepWorkspace::kNone && fast_orientation(xy[ws.pool[h].vertex], xy[a], xy[b]) > 0) {
                stack.emplace_back(ws.pool[h].vertex, b);
                continue;
            }
            emit(fan[a], fan[b]);
            enqueue(b, a);
            stack.pop_back();
            if (!stack.empty()) {
                auto& parent_head = ws.head[stack.back().first];
                parent_head = ws.pool[parent_head].next;
            }
        }
    }
}

Triple ascending(std::size_t a, std::size_t b, std::size_t c) {
    Triple t{a, b, c};
    std::sort(t.begin(), t.end());
    return t;
}

void finish_report(EmptyTriangleReport& report) {
    report.deg_max = 0;
    report.argmax_pair = {0, report.n > 1 ? 1U : 0U};
    const auto n = report.n;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j, ++idx) {
            const auto d = report.degree.cells()[idx];
            if (d > report.deg_max) {
                report.deg_max = d;
                report.argmax_pair = {i, j};
            }
        }
    }
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    auto q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

DegreeTable::DegreeTable(std::size_t n) : n_(n), cells_(n < 2 ? 0 : n * (n - 1) / 2, 0) {}

std::uint64_t EmptyTriangleReport::degree_sum() const noexcept {
    std::uint64_t s = 0;
    for (auto d : degree.cells()) s += d;
    return s;
}

std::vector<std::uint64_t> EmptyTriangleReport::degree_histogram() const {
    std::vector<std::uint64_t> hist(deg_max + 1, 0);
    for (auto d : degree.cells()) ++hist[d];
    return hist;
}

std::uint64_t enumerate_empty_triangles(const PointSet& pts, const TriangleConsumer& consumer) {
    check_engine_size(pts.size());
    const auto order = lexicographic_order(pts);
    SweepWorkspace ws;
    std::uint64_t f = 0;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const auto anchor = order[pos];
        sweep_anchor(pts, order, pos, ws, [&](std::uint32_t u, std::uint32_t v) {
            ++f;
            if (consumer) consumer(ascending(anchor, u, v));
        });
    }
    return f;
}

EmptyTriangleReport degree_report(const PointSet& pts, EngineOptions options) {
    const auto n = pts.size();
    check_engine_size(n);
    EmptyTriangleReport report;
    report.n = n;
    report.degree = DegreeTable(n);
    const auto order = lexicographic_order(pts);
    auto& table = report.degree;

    if (options.threads <= 1 || n < 64) {
        SweepWorkspace ws;
        for (std::size_t pos = 0; pos < n; ++pos) {
            const auto anchor = order[pos];
            sweep_anchor(pts, order, pos, ws, [&](std::uint32_t u, std::uint32_t v) {
                ++report.f;
                ++table.at(anchor, u);
                ++table.at(anchor, v);
                ++table.at(u, v);
            });
        }
    } else {
        // Counter updates commute, so concurrent relaxed increments give the
        // same table as the sequential sweep; per-anchor counts are reduced
        // in anchor order.
        std::vector<std::uint64_t> per_anchor(n, 0);
        auto& cells = table.cells();
        auto bump = [&](std::size_t a, std::size_t b) {
            std::atomic_ref<std::uint32_t>(cells[table.index(a, b)]).fetch_add(1, std::memory_order_relaxed);
        };
        parallel_for(n, options.threads, [&](std::size_t pos) {
            SweepWorkspace ws;
            const auto anchor = order[pos];
            std::uint64_t local = 0;
            sweep_anchor(pts, order, pos, ws, [&](std::uint32_t u, std::uint32_t v) {
                ++local;
                bump(anchor, u);
                bump(anchor, v);
                bump(u, v);
            });
            per_anchor[pos] = local;
        });
        for (auto c : per_anchor) report.f += c;
    }
    finish_report(report);
    return report;
}

EmptyTriangleReport brute_force_empty_triangles(const PointSet& pts, std::size_t cap) {
    const auto n = pts.size();
    if (n > cap)
        throw CapacityError("oracle cap " + std::to_string(cap) + " exceeded by n = " + std::to_string(n));
    if (auto t = first_collinear_triple(pts)) throw GeneralPositionError(*t);
    EmptyTriangleReport report;
    report.n = n;
    report.degree = DegreeTable(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                bool empty = true;
                for (std::size_t w = 0; w < n && empty; ++w) {
                    if (w == i || w == j || w == k) continue;
                    empty = point_in_triangle(pts[w], pts[i], pts[j], pts[k]) == Containment::exterior;
                }
                if (!empty) continue;
                ++report.f;
                ++report.degree.at(i, j);
                ++report.degree.at(i, k);
                ++report.degree.at(j, k);
            }
    finish_report(report);
    return report;
}

std::uint32_t pair_degree(const PointSet& pts, std::size_t i, std::size_t j) {
    const auto n = pts.size();
    if (i >= n || j >= n) throw std::out_of_range("pair_degree: index out of range");
    if (i == j) throw std::invalid_argument("pair_degree: indices must differ");
    std::uint32_t deg = 0;
    for (std::size_t z = 0; z < n; ++z) {
        if (z == i || z == j) continue;
        if (orientation(pts[i], pts[j], pts[z]) == 0) throw GeneralPositionError({i, j, z});
        bool empty = true;
        for (std::size_t w = 0; w < n && empty; ++w) {
            if (w == i || w == j || w == z) continue;
            empty = point_in_triangle(pts[w], pts[i], pts[j], pts[z]) == Containment::exterior;
        }
        deg += empty ? 1 : 0;
    }
    return deg;
}

wide_int threshold_from_length(const PointSet& pts, double T) {
    if (!(T > 0)) throw std::invalid_argument("near_pairs: T must be positive");
    const long double scaled = static_cast<long double>(T) * pts.scale().to_long_double();
    return static_cast<wide_int>(std::floor(scaled * scaled));
}

NearPairStat near_pairs(const PointSet& pts, double T, bool keep_pairs) {
    auto stat = near_pairs_grid(pts, threshold_from_length(pts, T), keep_pairs);
    const long double scaled = static_cast<long double>(T) * pts.scale().to_long_double();
    stat.requested_sq = scaled * scaled;
    return stat;
}

NearPairStat near_pairs_grid(const PointSet& pts, wide_int threshold_sq, bool keep_pairs) {
    NearPairStat stat;
    stat.threshold_sq = threshold_sq;
    const auto n = pts.size();
    if (n < 2 || threshold_sq < 0) return stat;

    // Bucket by cells of side ceil(sqrt(threshold)); qualifying pairs lie in
    // the same or adjacent cells.
    auto side = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<long double>(threshold_sq))));
    side = std::clamp<std::int64_t>(side, 1, std::int64_t{1} << 33);
    struct Entry {
        std::int64_t cx, cy;
        std::uint32_t index;
    };
    std::vector<Entry> entries(n);
    for (std::size_t i = 0; i < n; ++i)
        entries[i] = {floor_div(pts[i].x, side), floor_div(pts[i].y, side), static_cast<std::uint32_t>(i)};
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return std::tie(a.cx, a.cy, a.index) < std::tie(b.cx, b.cy, b.index);
    });

    auto key = [](std::int64_t cx, std::int64_t cy) {
        return (static_cast<std::uint64_t>(cx) * 0x9E3779B97F4A7C15ULL) ^ static_cast<std::uint64_t>(cy);
    };
    struct Range {
        std::int64_t cx, cy;
        std::size_t begin, end;
    };
    std::vector<Range> ranges;
    std::unordered_multimap<std::uint64_t, std::size_t> lookup;
    for (std::size_t b = 0; b < n;) {
        std::size_t e = b;
        while (e < n && entries[e].cx == entries[b].cx && entries[e].cy == entries[b].cy) ++e;
        lookup.emplace(key(entries[b].cx, entries[b].cy), ranges.size());
        ranges.push_back({entries[b].cx, entries[b].cy, b, e});
        b = e;
    }
    auto find_range = [&](std::int64_t cx, std::int64_t cy) -> const Range* {
        auto [lo, hi] = lookup.equal_range(key(cx, cy));
        for (auto it = lo; it != hi; ++it) {
            const auto& r = ranges[it->second];
            if (r.cx == cx && r.cy == cy) return &r;
        }
        return nullptr;
    };
    auto consider = [&](std::uint32_t a, std::uint32_t b) {
        if (squared_distance(pts[a], pts[b]) <= threshold_sq) {
            ++stat.count;
            if (keep_pairs) stat.pairs.emplace_back(std::min(a, b), std::max(a, b));
        }
    };

    static constexpr std::array<std::array<int, 2>, 4> kForward{{{1, -1}, {1, 0}, {1, 1}, {0, 1}}};
    for (const auto& r : ranges) {
        for (auto a = r.begin; a < r.end; ++a)
            for (auto b = a + 1; b < r.end; ++b) consider(entries[a].index, entries[b].index);
        for (const auto& [dx, dy] : kForward) {
            const Range* other = find_range(r.cx + dx, r.cy + dy);
            if (!other) continue;
            for (auto a = r.begin; a < r.end; ++a)
                for (auto b = other->begin; b < other->end; ++b) consider(entries[a].index, entries[b].index);
        }
    }
    if (keep_pairs) std::sort(stat.pairs.begin(), stat.pairs.end());
    return stat;
}

std::uint64_t near_pairs_scan(const PointSet& pts, wide_int threshold_sq) {
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) count += squared_distance(pts[i], pts[j]) <= threshold_sq;
    return count;
}

std::uint64_t thresholded_degree_sum(const PointSet& pts, double T) {
    const auto near = near_pairs(pts, T, true);
    std::uint64_t sum = 0;
    for (const auto& [i, j] : near.pairs) sum += pair_degree(pts, i, j);
    return sum;
}

std::uint64_t thresholded_degree_sum(const EmptyTriangleReport& report, const NearPairStat& near) {
    if (near.pairs.size() != near.count)
        throw std::invalid_argument("thresholded_degree_sum: near-pair list was not retained");
    std::uint64_t sum = 0;
    for (const auto& [i, j] : near.pairs) sum += report.degree(i, j);
    return sum;
}

}  // namespace emptytri
