// SPDX-License-Identifier: Apache-2.0
#include <tvf/predicates.hpp>
#include <tvf/synth.hpp>

#include <algorithm>
#include <array>
#include <numeric>
#include <optional>
#include <random>

namespace tvf {

namespace {

struct Face
{
    std::array<int, 3> v;
    std::array<int, 3> adj; // neighbour across edge (v[k], v[k+1])
    std::vector<int> outside;
    bool alive = true;
};

class Hull
{
public:
    explicit Hull(const std::vector<Vec3<double>>& pts) : p_(pts) {}

    bool tie() const { return tie_; }

    /// Returns false when all points are coplanar.
    bool build(std::vector<int> order)
    {
        const int n = static_cast<int>(p_.size());
        if (n < 4) return false;
        assigned_.assign(n, -1);
        const auto simplex = initial_simplex(order);
        if (!simplex) return false;
        auto [a, b, c, d] = *simplex;

        // Orient (a,b,c) so that d is below; faces are then outward.
        if (orient(a, b, c, d) < 0) std::swap(b, c);
        add_face({a, b, c});
        add_face({b, a, d});
        add_face({c, b, d});
        add_face({a, c, d});
        link_all();

        for (int i : order) {
            if (i == a || i == b || i == c || i == d) continue;
            assign(i, {0, 1, 2, 3});
        }

        stamp_.assign(faces_.size(), 0);
        for (int pi : order) {
            if (assigned_[pi] >= 0) insert(pi, assigned_[pi]);
        }
        return true;
    }

    std::vector<std::array<int, 3>> faces() const
    {
        std::vector<std::array<int, 3>> out;
        for (const auto& f : faces_)
            if (f.alive) out.push_back(f.v);
        return out;
    }

private:
    int orient(int a, int b, int c, int d)
    {
        const int s = predicates::orient3d(p_[a], p_[b], p_[c], p_[d]);
        if (s == 0) tie_ = true;
        return s;
    }

    bool above(int f, int q)
    {
        const auto& v = faces_[f].v;
        return orient(v[0], v[1], v[2], q) < 0;
    }

    std::optional<std::array<int, 4>> initial_simplex(const std::vector<int>& order)
    {
        const int a = order[0];
        int b = -1, c = -1, d = -1;
        for (int i : order)
            if (i != a && p_[i] != p_[a]) {
                b = i;
                break;
            }
        if (b < 0) return std::nullopt;
        for (int i : order) {
            if (i == a || i == b) continue;
            const Vec3<double> cr = (p_[b] - p_[a]).cross(p_[i] - p_[a]);
            if (cr.squaredNorm() > 0.0) {
                c = i;
                break;
            }
        }
        if (c < 0) return std::nullopt;
        for (int i : order) {
            if (i == a || i == b || i == c) continue;
            if (predicates::orient3d(p_[a], p_[b], p_[c], p_[i]) != 0) {
                d = i;
                break;
            }
        }
        if (d < 0) return std::nullopt;
        return std::array<int, 4>{a, b, c, d};
    }

    int add_face(std::array<int, 3> v)
    {
        faces_.push_back({v, {-1, -1, -1}, {}, true});
        return static_cast<int>(faces_.size()) - 1;
    }

    void link_all()
    {
        for (size_t f = 0; f < faces_.size(); ++f)
            for (int k = 0; k < 3; ++k)
                for (size_t g = 0; g < faces_.size(); ++g)
                    for (int m = 0; m < 3; ++m)
                        if (faces_[f].v[k] == faces_[g].v[(m + 1) % 3] && faces_[f].v[(k + 1) % 3] == faces_[g].v[m])
                            faces_[f].adj[k] = static_cast<int>(g);
    }

    void assign(int q, const std::vector<int>& candidates)
    {
        for (int f : candidates) {
            if (above(f, q)) {
                faces_[f].outside.push_back(q);
                assigned_[q] = f;
                return;
            }
        }
        assigned_[q] = -1;
    }

    void insert(int q, int start)
    {
        ++epoch_;
        std::vector<int> visible{start}, stack{start};
        stamp_[start] = epoch_;
        std::vector<std::pair<int, int>> horizon; // (visible face, edge index)
        while (!stack.empty()) {
            const int f = stack.back();
            stack.pop_back();
            for (int k = 0; k < 3; ++k) {
                const int g = faces_[f].adj[k];
                if (stamp_[g] == epoch_) continue;
                if (above(g, q)) {
                    stamp_[g] = epoch_;
                    visible.push_back(g);
                    stack.push_back(g);
                } else {
                    horizon.emplace_back(f, k);
                }
            }
        }

        // Horizon edges (u,w) keep their orientation; new faces (u, w, q).
        if (by_start_.size() < p_.size()) by_start_.assign(p_.size(), -1);
        std::vector<int> created;
        created.reserve(horizon.size());
        for (const auto& [f, k] : horizon) {
            const int u = faces_[f].v[k];
            const int w = faces_[f].v[(k + 1) % 3];
            const int outer = faces_[f].adj[k];
            const int nf = add_face({u, w, q});
            stamp_.push_back(0);
            faces_[nf].adj[0] = outer;
            for (int m = 0; m < 3; ++m)
                if (faces_[outer].v[m] == w && faces_[outer].v[(m + 1) % 3] == u) faces_[outer].adj[m] = nf;
            by_start_[u] = nf;
            created.push_back(nf);
        }
        for (int nf : created) {
            const int w = faces_[nf].v[1];
            const int next = by_start_[w]; // face (w, x, q): shares edge (w, q)
            faces_[nf].adj[1] = next;
            faces_[next].adj[2] = nf;
        }

        std::vector<int> orphans;
        for (int f : visible) {
            faces_[f].alive = false;
            for (int o : faces_[f].outside)
                if (o != q) orphans.push_back(o);
            faces_[f].outside.clear();
            faces_[f].outside.shrink_to_fit();
        }
        assigned_[q] = -1;
        for (int o : orphans) assign(o, created);
    }

    const std::vector<Vec3<double>>& p_;
    std::vector<Face> faces_;
    std::vector<int> assigned_;
    std::vector<int> stamp_;
    std::vector<int> by_start_;
    int epoch_ = 0;
    bool tie_ = false;
};

} // namespace

HullResult convex_hull(const PositionMatrix& points, std::uint64_t seed)
{
    const int n = static_cast<int>(points.rows());
    if (n < 4) throw GeometryError("convex_hull: need at least 4 points");
    std::vector<Vec3<double>> pts(n);
    for (int i = 0; i < n; ++i) pts[i] = points.row(i).transpose();
    double scale = 0.0;
    for (const auto& p : pts) scale = std::max(scale, p.cwiseAbs().maxCoeff());

    std::mt19937_64 rng(seed);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    HullResult result;
    for (int attempt = 0; attempt < 8; ++attempt) {
        Hull hull(pts);
        if (!hull.build(order)) throw GeometryError("convex_hull: points are coplanar");
        if (!hull.tie()) {
            const auto faces = hull.faces();
            result.triangles.resize(static_cast<Eigen::Index>(faces.size()), 3);
            std::vector<bool> used(n, false);
            for (size_t f = 0; f < faces.size(); ++f) {
                result.triangles.row(static_cast<Eigen::Index>(f)) << faces[f][0], faces[f][1], faces[f][2];
                for (int v : faces[f]) used[v] = true;
            }
            for (int i = 0; i < n; ++i)
                if (used[i]) result.vertices.push_back(i);
            return result;
        }
        // Exact tie: jitter and retry.
        result.perturbed = true;
        std::uniform_real_distribution<double> jitter(-1e-12 * scale, 1e-12 * scale);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < 3; ++k) pts[i][k] = points(i, k) + jitter(rng);
    }
    throw GeometryError("convex_hull: degenerate input persists after perturbation");
}

} // namespace tvf
