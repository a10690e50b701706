#include "rrr/octree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

namespace rrr {

namespace {

constexpr double kPeriod = 2.0 * std::numbers::pi;

int shift_for(int maxDepth, int depth) { return 3 * (maxDepth - depth); }

void check_depth(int maxDepth)
{
    if (maxDepth < 1 || maxDepth > 12) throw ValidationError("octree: depth must lie in [1, 12]");
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
    std::size_t find(std::size_t a)
    {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) std::swap(a, b);
        parent[a] = b;
    }
};

} // namespace

Box3 Box3::workspace(double halfWidth)
{
    Box3 b;
    b.lo = {-halfWidth, -halfWidth, 0.0};
    b.hi = {halfWidth, halfWidth, kPeriod};
    b.periodic = {false, false, true};
    return b;
}

Box3 Box3::joint_space()
{
    Box3 b;
    b.lo = {0.0, 0.0, 0.0};
    b.hi = {kPeriod, kPeriod, kPeriod};
    b.periodic = {true, true, true};
    return b;
}

bool Box3::wraps(int axis) const
{
    return periodic[axis] && std::abs(extent(axis) - kPeriod) <= 1e-12 * kPeriod;
}

void Box3::validate() const
{
    for (int a = 0; a < 3; ++a) {
        if (!(lo[a] < hi[a])) throw ValidationError("box: lo must be below hi on every axis");
        if (periodic[a] && extent(a) > kPeriod * (1.0 + 1e-12))
            throw ValidationError("box: periodic extent exceeds one period");
    }
}

Eigen::Vector3d Box3::normalize(const Eigen::Vector3d& point) const
{
    Eigen::Vector3d q = point;
    for (int a = 0; a < 3; ++a) {
        if (periodic[a]) {
            double r = std::fmod(q[a] - lo[a], kPeriod);
            if (r < 0.0) r += kPeriod;
            if (r >= kPeriod) r -= kPeriod;
            q[a] = lo[a] + r;
        }
        const bool inside = wraps(a) ? true : (q[a] >= lo[a] && q[a] <= hi[a]);
        if (!inside || !std::isfinite(q[a])) throw OutOfBox("point lies outside the octree box");
    }
    return q;
}

namespace morton {

std::uint64_t encode(std::uint32_t ix, std::uint32_t iy, std::uint32_t it)
{
    std::uint64_t code = 0;
    for (int k = 0; k < 21; ++k) {
        code |= std::uint64_t((ix >> k) & 1u) << (3 * k);
        code |= std::uint64_t((iy >> k) & 1u) << (3 * k + 1);
        code |= std::uint64_t((it >> k) & 1u) << (3 * k + 2);
    }
    return code;
}

std::array<std::uint32_t, 3> decode(std::uint64_t code)
{
    std::array<std::uint32_t, 3> idx{0, 0, 0};
    for (int k = 0; k < 21; ++k) {
        idx[0] |= std::uint32_t((code >> (3 * k)) & 1u) << k;
        idx[1] |= std::uint32_t((code >> (3 * k + 1)) & 1u) << k;
        idx[2] |= std::uint32_t((code >> (3 * k + 2)) & 1u) << k;
    }
    return idx;
}

} // namespace morton

// ---------------------------------------------------------------------------
// Octree

std::uint64_t Octree::key(std::size_t i) const
{
    return leaves_[i].code << shift_for(maxDepth_, leaves_[i].depth);
}

std::uint64_t Octree::span(std::size_t i) const
{
    return std::uint64_t{1} << shift_for(maxDepth_, leaves_[i].depth);
}

Box3 Octree::leaf_box(std::size_t i) const
{
    const auto& leaf = leaves_[i];
    const auto idx = morton::decode(leaf.code);
    const double cells = double(std::uint64_t{1} << leaf.depth);
    Box3 b;
    b.periodic = box_.periodic;
    for (int a = 0; a < 3; ++a) {
        const double h = box_.extent(a) / cells;
        b.lo[a] = box_.lo[a] + h * double(idx[a]);
        b.hi[a] = box_.lo[a] + h * double(idx[a] + 1);
    }
    return b;
}

double Octree::leaf_volume(std::size_t i) const
{
    return box_.volume() / double(std::uint64_t{1} << (3 * leaves_[i].depth));
}

Eigen::Vector3d Octree::leaf_center(std::size_t i) const
{
    const Box3 b = leaf_box(i);
    return {0.5 * (b.lo[0] + b.hi[0]), 0.5 * (b.lo[1] + b.hi[1]), 0.5 * (b.lo[2] + b.hi[2])};
}

std::array<double, 3> Octree::resolution() const
{
    const double cells = double(std::uint64_t{1} << maxDepth_);
    return {box_.extent(0) / cells, box_.extent(1) / cells, box_.extent(2) / cells};
}

double Octree::volume_in() const
{
    double v = 0.0;
    for (std::size_t i = 0; i < leaves_.size(); ++i)
        if (leaves_[i].in) v += leaf_volume(i);
    return v;
}

double Octree::volume_total() const
{
    double v = 0.0;
    for (std::size_t i = 0; i < leaves_.size(); ++i) v += leaf_volume(i);
    return v;
}

std::size_t Octree::count_in() const
{
    return std::size_t(std::count_if(leaves_.begin(), leaves_.end(), [](const OctreeLeaf& l) { return l.in; }));
}

std::size_t Octree::leaf_at_key(std::uint64_t k) const
{
    std::size_t lo = 0, hi = leaves_.size();
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (key(mid) <= k) lo = mid;
        else hi = mid;
    }
    return lo;
}

std::size_t Octree::locate(const Eigen::Vector3d& point) const
{
    const Eigen::Vector3d q = box_.normalize(point);
    const std::uint32_t cells = std::uint32_t{1} << maxDepth_;
    std::array<std::uint32_t, 3> idx{};
    for (int a = 0; a < 3; ++a) {
        const double t = (q[a] - box_.lo[a]) / box_.extent(a) * double(cells);
        idx[a] = std::uint32_t(std::clamp(t, 0.0, double(cells - 1)));
    }
    return leaf_at_key(morton::encode(idx[0], idx[1], idx[2]));
}

bool Octree::adjacent_cell(std::size_t i, int axis, int dir, std::uint64_t& code) const
{
    const auto& leaf = leaves_[i];
    auto idx = morton::decode(leaf.code);
    const std::int64_t cells = std::int64_t{1} << leaf.depth;
    std::int64_t j = std::int64_t(idx[axis]) + dir;
    if (j < 0 || j >= cells) {
        if (!box_.wraps(axis) || cells == 1) return false;
        j = (j + cells) % cells;
    }
    idx[axis] = std::uint32_t(j);
    code = morton::encode(idx[0], idx[1], idx[2]);
    return true;
}

std::vector<std::size_t> Octree::face_neighbors(std::size_t i) const
{
    std::vector<std::size_t> out;
    const int d = leaves_[i].depth;
    const int sh = shift_for(maxDepth_, d);
    for (int axis = 0; axis < 3; ++axis) {
        for (int dir : {-1, 1}) {
            std::uint64_t code = 0;
            if (!adjacent_cell(i, axis, dir, code)) continue;
            const std::uint64_t lo = code << sh;
            const std::uint64_t hi = lo + (std::uint64_t{1} << sh);
            std::size_t j = leaf_at_key(lo);
            if (leaves_[j].depth <= d) {
                if (j != i) out.push_back(j);
                continue;
            }
            // Subdivided neighbour: keep the leaves on the face we touch.
            const std::uint32_t cellIdx = morton::decode(code)[axis];
            for (; j < leaves_.size() && key(j) < hi; ++j) {
                const int sub = leaves_[j].depth - d;
                const std::uint32_t local = morton::decode(leaves_[j].code)[axis] - (cellIdx << sub);
                const std::uint32_t last = (std::uint32_t{1} << sub) - 1;
                if ((dir > 0 && local == 0) || (dir < 0 && local == last)) out.push_back(j);
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

int Octree::label_components()
{
    UnionFind uf(leaves_.size());
    for (std::size_t i = 0; i < leaves_.size(); ++i) {
        if (!leaves_[i].in) continue;
        const int d = leaves_[i].depth;
        const int sh = shift_for(maxDepth_, d);
        for (int axis = 0; axis < 3; ++axis) {
            for (int dir : {-1, 1}) {
                std::uint64_t code = 0;
                if (!adjacent_cell(i, axis, dir, code)) continue;
                // Neighbours at least as large as leaf i; smaller ones find i from their side.
                const std::size_t j = leaf_at_key(code << sh);
                if (j != i && leaves_[j].in && leaves_[j].depth <= d) uf.unite(i, j);
            }
        }
    }
    std::vector<int> idOfRoot(leaves_.size(), -1);
    int next = 0;
    for (std::size_t i = 0; i < leaves_.size(); ++i) {
        if (!leaves_[i].in) {
            leaves_[i].component = -1;
            continue;
        }
        const std::size_t r = uf.find(i);
        if (idOfRoot[r] < 0) idOfRoot[r] = next++;
        leaves_[i].component = idOfRoot[r];
    }
    componentCount_ = next;
    return next;
}

void Octree::dump(std::ostream& out) const
{
    out << "octree v1; box=";
    for (int a = 0; a < 3; ++a) {
        out << format_double(box_.lo[a]) << ',' << format_double(box_.hi[a]);
        if (a < 2) out << ',';
    }
    out << "; depth=" << maxDepth_ << "; axes=";
    for (int a = 0; a < 3; ++a) out << (box_.periodic[a] ? "per" : "lin") << (a < 2 ? "," : "");
    out << '\n';
    char buf[96];
    for (const auto& leaf : leaves_) {
        if (leaf.in && leaf.component >= 0)
            std::snprintf(buf, sizeof buf, "morton=%llx depth=%d label=1 comp=%d\n",
                          static_cast<unsigned long long>(leaf.code), leaf.depth, leaf.component);
        else
            std::snprintf(buf, sizeof buf, "morton=%llx depth=%d label=%d comp=-\n",
                          static_cast<unsigned long long>(leaf.code), leaf.depth, leaf.in ? 1 : 0);
        out << buf;
    }
}

std::string Octree::dump_string() const
{
    std::ostringstream os;
    dump(os);
    return os.str();
}

Octree Octree::parse(std::istream& in)
{
    std::string header;
    if (!std::getline(in, header) || header.rfind("octree v1; box=", 0) != 0)
        throw ValidationError("octree dump: bad header");
    Box3 box;
    int depth = 0;
    {
        std::string rest = header.substr(std::string("octree v1; box=").size());
        for (char& ch : rest)
            if (ch == ',' || ch == ';') ch = ' ';
        std::istringstream hs(rest);
        hs >> box.lo[0] >> box.hi[0] >> box.lo[1] >> box.hi[1] >> box.lo[2] >> box.hi[2];
        std::string tok;
        while (hs >> tok) {
            if (tok.rfind("depth=", 0) == 0) depth = std::stoi(tok.substr(6));
            else if (tok.rfind("axes=", 0) == 0) {
                std::string ax = tok.substr(5);
                std::string a1, a2;
                hs >> a1 >> a2;
                const std::array<std::string, 3> axes{ax, a1, a2};
                for (int a = 0; a < 3; ++a) {
                    if (axes[a] != "per" && axes[a] != "lin") throw ValidationError("octree dump: bad axes");
                    box.periodic[a] = axes[a] == "per";
                }
            }
        }
        if (!hs.eof() && hs.fail()) throw ValidationError("octree dump: bad header");
    }
    std::vector<OctreeLeaf> leaves;
    std::string line;
    bool anyComponent = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        unsigned long long code = 0;
        int d = 0, label = 0;
        char comp[24] = {0};
        if (std::sscanf(line.c_str(), "morton=%llx depth=%d label=%d comp=%23s", &code, &d, &label, comp) != 4)
            throw ValidationError("octree dump: bad leaf line");
        OctreeLeaf leaf;
        leaf.code = code;
        leaf.depth = d;
        leaf.in = label != 0;
        if (comp[0] != '-') {
            leaf.component = std::atoi(comp);
            anyComponent = true;
        }
        leaves.push_back(leaf);
    }
    Octree t = from_leaves(box, depth, std::move(leaves));
    if (anyComponent) t.label_components();
    return t;
}

// ---------------------------------------------------------------------------
// Building

OctreeBuilder::OctreeBuilder(const Box3& box, int maxDepth) : box_(box), maxDepth_(maxDepth)
{
    box_.validate();
    check_depth(maxDepth);
}

void OctreeBuilder::push_leaf(OctreeLeaf leaf)
{
    stack_.push_back(leaf);
    while (stack_.size() >= 8) {
        const auto& top = stack_.back();
        if (top.depth == 0 || (top.code & 7u) != 7u) break;
        const std::size_t first = stack_.size() - 8;
        const auto& base = stack_[first];
        bool merge = (base.code & 7u) == 0;
        for (std::size_t k = first; merge && k < stack_.size(); ++k)
            merge = stack_[k].depth == top.depth && stack_[k].in == top.in &&
                    stack_[k].code == base.code + (k - first);
        if (!merge) break;
        OctreeLeaf parent;
        parent.code = base.code >> 3;
        parent.depth = top.depth - 1;
        parent.in = top.in;
        stack_.resize(first);
        stack_.push_back(parent);
    }
}

void OctreeBuilder::push(bool in)
{
    OctreeLeaf leaf;
    leaf.code = next_++;
    leaf.depth = maxDepth_;
    leaf.in = in;
    push_leaf(leaf);
}

Octree OctreeBuilder::finish()
{
    if (next_ != (std::uint64_t{1} << (3 * maxDepth_)))
        throw ValidationError("octree builder: not every cell was labelled");
    Octree t(box_, maxDepth_, std::move(stack_));
    stack_.clear();
    return t;
}

Octree Octree::from_leaves(const Box3& box, int maxDepth, std::vector<OctreeLeaf> leaves)
{
    box.validate();
    check_depth(maxDepth);
    OctreeBuilder builder(box, maxDepth);
    std::uint64_t expected = 0;
    for (auto& leaf : leaves) {
        if (leaf.depth < 0 || leaf.depth > maxDepth) throw ValidationError("octree: leaf depth out of range");
        const int sh = shift_for(maxDepth, leaf.depth);
        if (leaf.code >= (std::uint64_t{1} << (3 * leaf.depth)))
            throw ValidationError("octree: leaf code out of range");
        if ((leaf.code << sh) != expected) throw ValidationError("octree: leaves do not tile the box in Morton order");
        expected += std::uint64_t{1} << sh;
        leaf.component = -1;
        builder.push_leaf(leaf);
    }
    if (expected != (std::uint64_t{1} << (3 * maxDepth))) throw ValidationError("octree: leaves leave a gap");
    builder.next_ = expected;
    return builder.finish();
}

std::vector<Octree> build_octree_family(
    const Box3& box, int maxDepth, int count,
    const std::function<std::uint32_t(const Eigen::Vector3d&, const std::array<std::uint32_t, 3>&)>& mask)
{
    box.validate();
    check_depth(maxDepth);
    if (count < 1 || count > 32) throw ValidationError("octree family: count must lie in [1, 32]");
    std::vector<OctreeBuilder> builders;
    builders.reserve(std::size_t(count));
    for (int k = 0; k < count; ++k) builders.emplace_back(box, maxDepth);

    const std::uint64_t total = std::uint64_t{1} << (3 * maxDepth);
    const double cells = double(std::uint64_t{1} << maxDepth);
    std::array<double, 3> h{};
    for (int a = 0; a < 3; ++a) h[a] = box.extent(a) / cells;

    const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    const std::uint64_t chunk = std::min<std::uint64_t>(total, std::uint64_t{1} << 15);
    std::vector<std::vector<std::uint32_t>> buffers(threads, std::vector<std::uint32_t>(chunk));

    auto evaluate = [&](std::uint64_t begin, std::uint64_t end, std::vector<std::uint32_t>& out) {
        for (std::uint64_t code = begin; code < end; ++code) {
            const auto idx = morton::decode(code);
            const Eigen::Vector3d center(box.lo[0] + h[0] * (double(idx[0]) + 0.5),
                                         box.lo[1] + h[1] * (double(idx[1]) + 0.5),
                                         box.lo[2] + h[2] * (double(idx[2]) + 0.5));
            out[code - begin] = mask(center, idx);
        }
    };

    for (std::uint64_t start = 0; start < total; start += chunk * threads) {
        std::vector<std::thread> pool;
        std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
        for (unsigned t = 0; t < threads; ++t) {
            const std::uint64_t b = start + chunk * t;
            if (b >= total) break;
            ranges.emplace_back(b, std::min(total, b + chunk));
        }
        for (std::size_t t = 1; t < ranges.size(); ++t)
            pool.emplace_back(evaluate, ranges[t].first, ranges[t].second, std::ref(buffers[t]));
        evaluate(ranges[0].first, ranges[0].second, buffers[0]);
        for (auto& th : pool) th.join();
        for (std::size_t t = 0; t < ranges.size(); ++t) {
            const std::uint64_t n = ranges[t].second - ranges[t].first;
            for (std::uint64_t c = 0; c < n; ++c) {
                const std::uint32_t bits = buffers[t][c];
                for (int k = 0; k < count; ++k) builders[std::size_t(k)].push(((bits >> k) & 1u) != 0);
            }
        }
    }
    std::vector<Octree> out;
    out.reserve(builders.size());
    for (auto& b : builders) out.push_back(b.finish());
    return out;
}

Octree build_octree(const Box3& box, int maxDepth, const CellFunction& pred)
{
    auto family = build_octree_family(box, maxDepth, 1,
                                      [&](const Eigen::Vector3d& c, const std::array<std::uint32_t, 3>&) {
                                          return pred(c) ? 1u : 0u;
                                      });
    return std::move(family.front());
}

// ---------------------------------------------------------------------------
// Boolean operations

Octree Octree::combine(const Octree& a, const Octree& b, bool (*op)(bool, bool))
{
    if (!(a.box_ == b.box_) || a.maxDepth_ != b.maxDepth_)
        throw BoxMismatch("octree boolean: root boxes or depths differ");
    OctreeBuilder builder(a.box_, a.maxDepth_);
    std::size_t i = 0, j = 0;
    std::uint64_t pos = 0;
    const std::uint64_t total = std::uint64_t{1} << (3 * a.maxDepth_);
    // Aligned cells are nested or disjoint, so the deeper current leaf is
    // always contained in the other one.
    while (pos < total) {
        while (a.key(i) + a.span(i) <= pos) ++i;
        while (b.key(j) + b.span(j) <= pos) ++j;
        const bool aDeeper = a.leaves_[i].depth >= b.leaves_[j].depth;
        OctreeLeaf leaf = aDeeper ? a.leaves_[i] : b.leaves_[j];
        leaf.in = op(a.leaves_[i].in, b.leaves_[j].in);
        leaf.component = -1;
        builder.push_leaf(leaf);
        pos += aDeeper ? a.span(i) : b.span(j);
    }
    builder.next_ = total;
    return builder.finish();
}

Octree unite(const Octree& a, const Octree& b)
{
    return Octree::combine(a, b, [](bool x, bool y) { return x || y; });
}

Octree intersect(const Octree& a, const Octree& b)
{
    return Octree::combine(a, b, [](bool x, bool y) { return x && y; });
}

Octree subtract(const Octree& a, const Octree& b)
{
    return Octree::combine(a, b, [](bool x, bool y) { return x && !y; });
}

} // namespace rrr
