#include "skewlab/fibers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "skewlab/errors.hpp"

namespace skewlab {

namespace {

// The depth-k fiber set over a point depends on the point's leading symbols
// only: symbol m enters through branch offsets attenuated by lambda^-m, so
// at double precision a truncated address is a complete key. key_length
// picks the truncation so the neglected influence is below 1e-19.
int key_length(const SystemParams& p) {
    const double lam = std::min(p.lambda1(), p.lambda2());
    const double l = std::ceil(19.0 * std::log(10.0) / std::log(lam)) + 2.0;
    return static_cast<int>(std::clamp(l, 8.0, 26.0));
}

class Engine {
public:
    Engine(const SystemParams& p, int root_depth)
        : p_(p),
          key_len_(key_length(p)),
          key_mask_((std::uint32_t{1} << key_len_) - 1),
          // Memoizing pays once the call tree above a level is wider than
          // the key space below it; the depth-14 ceiling keeps table
          // entries small while component counts double per level.
          memo_depth_max_(std::min(root_depth - 8, 14)),
          unit_(IntervalUnion::normalize({{0.0, 1.0}}, p.merge_tolerance)) {}

    IntervalUnion build(double x, int sym, std::uint32_t key, int depth) {
        if (depth == 0) return unit_;

        const bool memoable = depth <= memo_depth_max_;
        const std::uint64_t mk =
            (static_cast<std::uint64_t>(depth) << 32) | key;
        if (memoable) {
            auto it = memo_.find(mk);
            if (it != memo_.end()) return it->second;
        }

        const double x1 = p_.g_inverse(1, x);
        const double x2 = p_.g_inverse(2, x);
        const std::uint32_t k1 = child_key(key, 1);
        const std::uint32_t k2 = child_key(key, 2);

        const IntervalUnion f1 = build(x1, 1, k1, depth - 1);
        const IntervalUnion f2 = build(x2, 2, k2, depth - 1);

        const FiberBranch b1 = fiber_branch(p_, 1, sym, x1);
        const FiberBranch b2 = fiber_branch(p_, 2, sym, x2);
        IntervalUnion out = IntervalUnion::unite(f1.affine_image(b1.offset, b1.slope),
                                                 f2.affine_image(b2.offset, b2.slope));
        if (memoable) memo_.emplace(mk, out);
        return out;
    }

    std::uint32_t root_key(const Itinerary& w) const {
        std::uint32_t key = 0;
        for (int i = key_len_ - 1; i >= 0; --i) {
            key = (key << 1) | (w.symbol_at(static_cast<std::size_t>(i)) == 2 ? 1u : 0u);
        }
        return key;
    }

    std::uint32_t child_key(std::uint32_t key, int sym) const {
        return ((key << 1) & key_mask_) | (sym == 2 ? 1u : 0u);
    }

private:
    const SystemParams& p_;
    int key_len_;
    std::uint32_t key_mask_;
    int memo_depth_max_;
    IntervalUnion unit_;
    std::unordered_map<std::uint64_t, IntervalUnion> memo_;
};

void check_fiber_args(const Itinerary& w, int depth) {
    if (w.size() < 2) {
        fail(errc::insufficient_coding, "fiber recursion needs at least two symbols");
    }
    if (depth < 0) fail(errc::invalid_input, "negative fiber depth");
    if (depth > kDepthCap) {
        fail(errc::depth_cap, "fiber depth exceeds the resource cap");
    }
}

struct RootSplit {
    IntervalUnion s1, s2;
};

RootSplit root_split(const SystemParams& p, const Itinerary& w, int depth) {
    check_fiber_args(w, depth);
    if (depth < 1) fail(errc::invalid_input, "preimage split needs depth >= 1");
    Engine eng(p, depth);
    const double x = precise_base_point(p, w);
    const int sym = w.at(0);
    const double x1 = p.g_inverse(1, x);
    const double x2 = p.g_inverse(2, x);
    const std::uint32_t key = eng.root_key(w);
    const IntervalUnion f1 = eng.build(x1, 1, eng.child_key(key, 1), depth - 1);
    const IntervalUnion f2 = eng.build(x2, 2, eng.child_key(key, 2), depth - 1);
    const FiberBranch b1 = fiber_branch(p, 1, sym, x1);
    const FiberBranch b2 = fiber_branch(p, 2, sym, x2);
    return {f1.affine_image(b1.offset, b1.slope), f2.affine_image(b2.offset, b2.slope)};
}

} // namespace

FiberApprox fiber_set(const SystemParams& p, const Itinerary& w, int depth) {
    check_fiber_args(w, depth);
    FiberApprox out;
    out.base = w;
    out.depth = depth;
    out.itinerary_extended = static_cast<std::size_t>(depth) + 1 > w.size();
    if (depth == 0) {
        out.set = IntervalUnion::normalize({{0.0, 1.0}}, p.merge_tolerance);
        return out;
    }
    const RootSplit rs = root_split(p, w, depth);
    out.set = IntervalUnion::unite(rs.s1, rs.s2);
    return out;
}

std::pair<IntervalUnion, IntervalUnion>
preimage_components(const SystemParams& p, const Itinerary& w, int depth) {
    RootSplit rs = root_split(p, w, depth);
    return {std::move(rs.s1), std::move(rs.s2)};
}

IntervalUnion overlap_set(const SystemParams& p, const Itinerary& w, int depth) {
    const RootSplit rs = root_split(p, w, depth);
    return IntervalUnion::intersect(rs.s1, rs.s2);
}

bool membership(const SystemParams& p, const Itinerary& w, double y, int depth) {
    if (y < 0.0 || y > 1.0) return false;
    return fiber_set(p, w, depth).set.contains(y);
}

} // namespace skewlab
