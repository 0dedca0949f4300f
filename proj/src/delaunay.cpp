// SPDX-License-Identifier: Apache-2.0
#include <tvf/predicates.hpp>
#include <tvf/synth.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace tvf {

namespace {

struct Tri
{
    std::array<int, 3> v;
    std::array<int, 3> adj; // across edge (v[k], v[k+1]); -1 outside
    bool alive = true;
};

class BowyerWatson
{
public:
    explicit BowyerWatson(std::vector<Vec2<double>> pts) : p_(std::move(pts))
    {
        Vec2<double> lo = p_[0], hi = p_[0];
        for (const auto& q : p_) {
            lo = lo.cwiseMin(q);
            hi = hi.cwiseMax(q);
        }
        const Vec2<double> mid = 0.5 * (lo + hi);
        const double r = std::max(1.0, (hi - lo).maxCoeff()) * 1e3;
        n_real_ = static_cast<int>(p_.size());
        p_.push_back(mid + Vec2<double>(-3.0 * r, -3.0 * r));
        p_.push_back(mid + Vec2<double>(3.0 * r, 0.0));
        p_.push_back(mid + Vec2<double>(0.0, 3.0 * r));
        tris_.push_back({{n_real_, n_real_ + 1, n_real_ + 2}, {-1, -1, -1}, true});
    }

    void insert_all()
    {
        // Insertion order along a serpentine grid sweep keeps walks short.
        const int n = n_real_;
        Vec2<double> lo = p_[0], hi = p_[0];
        for (int i = 0; i < n; ++i) {
            lo = lo.cwiseMin(p_[i]);
            hi = hi.cwiseMax(p_[i]);
        }
        const int cells = std::max(1, static_cast<int>(std::sqrt(n / 4.0)));
        const Vec2<double> size = (hi - lo).cwiseMax(1e-300);
        std::vector<std::array<long, 3>> keys(n);
        for (int i = 0; i < n; ++i) {
            const long cx = std::min<long>(cells - 1, static_cast<long>((p_[i].x() - lo.x()) / size.x() * cells));
            const long cy = std::min<long>(cells - 1, static_cast<long>((p_[i].y() - lo.y()) / size.y() * cells));
            keys[i] = {cy, (cy % 2) ? cells - 1 - cx : cx, i};
        }
        std::sort(keys.begin(), keys.end());
        for (const auto& k : keys) insert(static_cast<int>(k[2]));
    }

    std::vector<std::array<int, 3>> triangles() const
    {
        std::vector<std::array<int, 3>> out;
        for (const auto& t : tris_)
            if (t.alive && t.v[0] < n_real_ && t.v[1] < n_real_ && t.v[2] < n_real_) out.push_back(t.v);
        return out;
    }

private:
    int locate(const Vec2<double>& q)
    {
        int t = last_;
        for (size_t steps = 0; steps < 4 * tris_.size() + 16; ++steps) {
            bool moved = false;
            for (int k = 0; k < 3; ++k) {
                const int e = (k + static_cast<int>(steps)) % 3;
                const auto& v = tris_[t].v;
                if (predicates::orient2d(p_[v[e]], p_[v[(e + 1) % 3]], q) < 0) {
                    t = tris_[t].adj[e];
                    moved = true;
                    break;
                }
            }
            if (!moved) return t;
        }
        throw GeometryError("delaunay: point location failed");
    }

    bool in_circle(int t, const Vec2<double>& q) const
    {
        const auto& v = tris_[t].v;
        return predicates::incircle(p_[v[0]], p_[v[1]], p_[v[2]], q) > 0;
    }

    void insert(int pi)
    {
        const Vec2<double>& q = p_[pi];
        const int start = locate(q);
        for (int k = 0; k < 3; ++k)
            if (p_[tris_[start].v[k]] == q) throw GeometryError("delaunay: duplicate point");

        ++epoch_;
        if (stamp_.size() < tris_.size()) stamp_.resize(tris_.size(), 0);
        std::vector<int> cavity{start}, stack{start};
        stamp_[start] = epoch_;
        std::vector<std::pair<int, int>> boundary;
        while (!stack.empty()) {
            const int t = stack.back();
            stack.pop_back();
            for (int k = 0; k < 3; ++k) {
                const int g = tris_[t].adj[k];
                if (g >= 0 && stamp_[g] == epoch_) continue;
                if (g >= 0 && in_circle(g, q)) {
                    stamp_[g] = epoch_;
                    cavity.push_back(g);
                    stack.push_back(g);
                } else {
                    boundary.emplace_back(t, k);
                }
            }
        }

        if (by_start_.size() < p_.size()) by_start_.assign(p_.size(), -1);
        std::vector<int> created;
        created.reserve(boundary.size());
        for (const auto& [t, k] : boundary) {
            const int u = tris_[t].v[k];
            const int w = tris_[t].v[(k + 1) % 3];
            const int outer = tris_[t].adj[k];
            tris_.push_back({{u, w, pi}, {outer, -1, -1}, true});
            const int nt = static_cast<int>(tris_.size()) - 1;
            if (outer >= 0)
                for (int m = 0; m < 3; ++m)
                    if (tris_[outer].v[m] == w && tris_[outer].v[(m + 1) % 3] == u) tris_[outer].adj[m] = nt;
            by_start_[u] = nt;
            created.push_back(nt);
        }
        for (int nt : created) {
            const int next = by_start_[tris_[nt].v[1]];
            tris_[nt].adj[1] = next;
            tris_[next].adj[2] = nt;
        }
        for (int t : cavity) tris_[t].alive = false;
        stamp_.resize(tris_.size(), 0);
        last_ = created.front();
    }

    std::vector<Vec2<double>> p_;
    int n_real_ = 0;
    std::vector<Tri> tris_;
    std::vector<int> stamp_;
    std::vector<int> by_start_;
    int epoch_ = 0;
    int last_ = 0;
};

IndexMatrix to_matrix(const std::vector<std::array<int, 3>>& tris)
{
    IndexMatrix out(static_cast<Eigen::Index>(tris.size()), 3);
    for (size_t i = 0; i < tris.size(); ++i) out.row(static_cast<Eigen::Index>(i)) << tris[i][0], tris[i][1], tris[i][2];
    return out;
}

void check_distinct(const PlanarPoints& points)
{
    std::vector<int> order(points.rows());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::pair(points(a, 0), points(a, 1)) < std::pair(points(b, 0), points(b, 1));
    });
    for (size_t i = 1; i < order.size(); ++i)
        if (points.row(order[i]) == points.row(order[i - 1])) throw GeometryError("delaunay: duplicate point");
}

} // namespace

IndexMatrix delaunay(const PlanarPoints& points)
{
    if (points.rows() < 3) throw GeometryError("delaunay: need at least 3 points");
    check_distinct(points);
    std::vector<Vec2<double>> pts(points.rows());
    for (Eigen::Index i = 0; i < points.rows(); ++i) pts[i] = points.row(i).transpose();
    BowyerWatson bw(std::move(pts));
    bw.insert_all();
    return to_matrix(bw.triangles());
}

IndexMatrix periodic_delaunay(const PlanarPoints& points, double period)
{
    const int n = static_cast<int>(points.rows());
    if (n < 3) throw GeometryError("periodic_delaunay: need at least 3 points");
    for (int i = 0; i < n; ++i)
        if (!(points(i, 0) >= 0.0 && points(i, 0) < period && points(i, 1) >= 0.0 && points(i, 1) < period))
            throw GeometryError("periodic_delaunay: point outside the fundamental domain");
    check_distinct(points);

    // Margin of a few mean spacings; grown until every kept circumdisk lies
    // inside the tiled region.
    double margin = std::min(period, 6.0 * period / std::sqrt(static_cast<double>(n)));
    while (true) {
        const int reach = static_cast<int>(std::ceil(margin / period));
        std::vector<Vec2<double>> pts;
        std::vector<int> source, tile_x, tile_y;
        for (int oy = -reach; oy <= reach; ++oy) {
            for (int ox = -reach; ox <= reach; ++ox) {
                for (int i = 0; i < n; ++i) {
                    const Vec2<double> q(points(i, 0) + ox * period, points(i, 1) + oy * period);
                    if (q.x() < -margin || q.x() > period + margin || q.y() < -margin || q.y() > period + margin) continue;
                    pts.push_back(q);
                    source.push_back(i);
                    tile_x.push_back(ox);
                    tile_y.push_back(oy);
                }
            }
        }
        BowyerWatson bw(pts);
        bw.insert_all();

        // Keep each periodic triangle once: the copy whose corner with the
        // smallest source index sits in the central tile.
        std::vector<std::array<int, 3>> kept;
        bool covered = true;
        for (const auto& t : bw.triangles()) {
            int lead = 0;
            for (int k = 1; k < 3; ++k)
                if (source[t[k]] < source[t[lead]]) lead = k;
            if (tile_x[t[lead]] != 0 || tile_y[t[lead]] != 0) continue;
            if (source[t[0]] == source[t[1]] || source[t[1]] == source[t[2]] || source[t[0]] == source[t[2]])
                throw GeometryError("periodic_delaunay: too few points for the period");
            // Circumdisk must stay inside the tiled region.
            const Vec2<double> a = pts[t[0]], b = pts[t[1]], c = pts[t[2]];
            const Vec2<double> ab = b - a, ac = c - a;
            const double d = 2.0 * (ab.x() * ac.y() - ab.y() * ac.x());
            const Vec2<double> center = a
                + Vec2<double>(ac.y() * ab.squaredNorm() - ab.y() * ac.squaredNorm(),
                               ab.x() * ac.squaredNorm() - ac.x() * ab.squaredNorm()) / d;
            const double r = (center - a).norm();
            if (center.x() - r < -margin || center.x() + r > period + margin || center.y() - r < -margin
                || center.y() + r > period + margin) {
                covered = false;
                break;
            }
            kept.push_back({source[t[0]], source[t[1]], source[t[2]]});
        }
        if (covered) {
            TriangleMesh check;
            check.vertices = PositionMatrix::Zero(n, 3);
            check.triangles = to_matrix(kept);
            // Flat torus: 2n triangles, every edge shared twice.
            if (static_cast<int>(kept.size()) != 2 * n) covered = false;
            else {
                try {
                    build_edges(check);
                } catch (const TopologyError&) {
                    covered = false;
                }
            }
            if (covered) return check.triangles;
        }
        if (margin >= 2.0 * period) throw GeometryError("periodic_delaunay: triangulation did not close up");
        margin *= 2.0;
    }
}

} // namespace tvf
