#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "oulab/hermite/quadrature.hpp"

namespace oulab {

inline constexpr real kInf = std::numeric_limits<real>::infinity();

/// Axis-aligned box; bounds may be infinite.
struct Box {
    std::vector<real> lo, hi;
};

/// Closed Euclidean ball; radius 0 is a point.
struct Ball {
    std::vector<real> center;
    real radius = 0.0;
};

/// Closed interval [a, b] in one dimension.
struct Interval {
    real a, b;
};

/// Finite union of boxes and balls, optionally dilated: K_r = {x : dist(x, K) <= r}.
class Region {
public:
    explicit Region(int dimension) : d_(dimension) {}

    static Region interval(real a, real b) {
        Region r(1);
        r.add_box({{a}, {b}});
        return r;
    }
    static Region box(std::vector<real> lo, std::vector<real> hi) {
        Region r(static_cast<int>(lo.size()));
        r.add_box({std::move(lo), std::move(hi)});
        return r;
    }
    static Region ball(std::vector<real> center, real radius) {
        Region r(static_cast<int>(center.size()));
        r.add_ball({std::move(center), radius});
        return r;
    }
    static Region point(std::vector<real> x) { return ball(std::move(x), 0.0); }

    Region& add_box(Box b) {
        if (static_cast<int>(b.lo.size()) != d_ || static_cast<int>(b.hi.size()) != d_)
            throw DimensionError("Region: box dimension mismatch");
        for (int j = 0; j < d_; ++j)
            if (!(b.lo[static_cast<std::size_t>(j)] <= b.hi[static_cast<std::size_t>(j)]))
                throw DomainError("Region: empty box");
        boxes_.push_back(std::move(b));
        return *this;
    }
    Region& add_ball(Ball b) {
        if (static_cast<int>(b.center.size()) != d_) throw DimensionError("Region: ball dimension mismatch");
        if (b.radius < 0.0) throw DomainError("Region: negative radius");
        balls_.push_back(std::move(b));
        return *this;
    }

    Region dilated(real r) const {
        if (r < 0.0) throw DomainError("Region: negative dilation");
        Region out = *this;
        out.dilation_ += r;
        return out;
    }

    int dimension() const { return d_; }
    bool empty() const { return boxes_.empty() && balls_.empty(); }
    real dilation() const { return dilation_; }
    const std::vector<Box>& boxes() const { return boxes_; }
    const std::vector<Ball>& balls() const { return balls_; }

    /// Euclidean distance from x to the region (0 inside).
    template <typename Vec>
    real distance(const Vec& x) const {
        return std::max(0.0, base_distance(x) - dilation_);
    }

    template <typename Vec>
    bool contains(const Vec& x) const {
        return distance(x) <= 0.0;
    }

    /// Unit vector along the gradient of dist(., K) at a point outside K (zero inside).
    template <typename Vec>
    std::vector<real> distance_gradient(const Vec& x) const {
        std::vector<real> best(static_cast<std::size_t>(d_), 0.0);
        real dmin = kInf;
        for (const auto& b : boxes_) {
            std::vector<real> v(static_cast<std::size_t>(d_));
            real s = 0.0;
            for (int j = 0; j < d_; ++j) {
                const auto jj = static_cast<std::size_t>(j);
                const real xj = static_cast<real>(x[j]);
                v[jj] = xj < b.lo[jj] ? xj - b.lo[jj] : (xj > b.hi[jj] ? xj - b.hi[jj] : 0.0);
                s += v[jj] * v[jj];
            }
            if (std::sqrt(s) < dmin) {
                dmin = std::sqrt(s);
                best = v;
            }
        }
        for (const auto& b : balls_) {
            std::vector<real> v(static_cast<std::size_t>(d_));
            real s = 0.0;
            for (int j = 0; j < d_; ++j) {
                const auto jj = static_cast<std::size_t>(j);
                v[jj] = static_cast<real>(x[j]) - b.center[jj];
                s += v[jj] * v[jj];
            }
            const real dist = std::max(0.0, std::sqrt(s) - b.radius);
            if (dist < dmin) {
                dmin = dist;
                best = dist > 0.0 ? v : std::vector<real>(static_cast<std::size_t>(d_), 0.0);
            }
        }
        real n = 0.0;
        for (real v : best) n += v * v;
        n = std::sqrt(n);
        if (n > 0.0 && dmin > dilation_)
            for (real& v : best) v /= n;
        else
            std::fill(best.begin(), best.end(), 0.0);
        return best;
    }

    /// Set distance inf{|x - y| : x in this, y in other}; exact for boxes and balls.
    real set_distance(const Region& other) const {
        if (other.d_ != d_) throw DimensionError("Region: dimension mismatch");
        real best = kInf;
        for (const auto& a : boxes_) {
            for (const auto& b : other.boxes_) best = std::min(best, box_box(a, b));
            for (const auto& b : other.balls_) best = std::min(best, std::max(0.0, point_box(b.center, a) - b.radius));
        }
        for (const auto& a : balls_) {
            for (const auto& b : other.boxes_) best = std::min(best, std::max(0.0, point_box(a.center, b) - a.radius));
            for (const auto& b : other.balls_) {
                real s = 0.0;
                for (int j = 0; j < d_; ++j) {
                    const real v = a.center[static_cast<std::size_t>(j)] - b.center[static_cast<std::size_t>(j)];
                    s += v * v;
                }
                best = std::min(best, std::max(0.0, std::sqrt(s) - a.radius - b.radius));
            }
        }
        return std::max(0.0, best - dilation_ - other.dilation_);
    }

    /// Exact interval decomposition in one dimension, merged and sorted.
    std::vector<Interval> intervals() const {
        if (d_ != 1) throw DomainError("Region::intervals: one-dimensional regions only");
        std::vector<Interval> iv;
        for (const auto& b : boxes_) iv.push_back({b.lo[0] - dilation_, b.hi[0] + dilation_});
        for (const auto& b : balls_) iv.push_back({b.center[0] - b.radius - dilation_, b.center[0] + b.radius + dilation_});
        std::sort(iv.begin(), iv.end(), [](const Interval& x, const Interval& y) { return x.a < y.a; });
        std::vector<Interval> merged;
        for (const auto& i : iv) {
            if (!merged.empty() && i.a <= merged.back().b)
                merged.back().b = std::max(merged.back().b, i.b);
            else
                merged.push_back(i);
        }
        return merged;
    }

    /// Intervals of the complement in one dimension.
    std::vector<Interval> complement_intervals() const {
        std::vector<Interval> out;
        real left = -kInf;
        for (const auto& i : intervals()) {
            if (i.a > left) out.push_back({left, i.a});
            left = i.b;
        }
        if (left < kInf) out.push_back({left, kInf});
        return out;
    }

    /// True when the region is a union of pairwise disjoint undilated boxes, so that
    /// indicator integrals factor over the axes.
    bool separable() const {
        if (!balls_.empty() || dilation_ > 0.0) return false;
        for (std::size_t i = 0; i < boxes_.size(); ++i)
            for (std::size_t k = i + 1; k < boxes_.size(); ++k)
                if (box_overlap(boxes_[i], boxes_[k])) return false;
        return true;
    }

private:
    template <typename Vec>
    real base_distance(const Vec& x) const {
        real best = kInf;
        for (const auto& b : boxes_) {
            real s = 0.0;
            for (int j = 0; j < d_; ++j) {
                const auto jj = static_cast<std::size_t>(j);
                const real xj = static_cast<real>(x[j]);
                const real v = xj < b.lo[jj] ? b.lo[jj] - xj : (xj > b.hi[jj] ? xj - b.hi[jj] : 0.0);
                s += v * v;
            }
            best = std::min(best, std::sqrt(s));
        }
        for (const auto& b : balls_) {
            real s = 0.0;
            for (int j = 0; j < d_; ++j) {
                const real v = static_cast<real>(x[j]) - b.center[static_cast<std::size_t>(j)];
                s += v * v;
            }
            best = std::min(best, std::max(0.0, std::sqrt(s) - b.radius));
        }
        return best;
    }

    real point_box(const std::vector<real>& c, const Box& b) const {
        real s = 0.0;
        for (int j = 0; j < d_; ++j) {
            const auto jj = static_cast<std::size_t>(j);
            const real v = c[jj] < b.lo[jj] ? b.lo[jj] - c[jj] : (c[jj] > b.hi[jj] ? c[jj] - b.hi[jj] : 0.0);
            s += v * v;
        }
        return std::sqrt(s);
    }
    real box_box(const Box& a, const Box& b) const {
        real s = 0.0;
        for (int j = 0; j < d_; ++j) {
            const auto jj = static_cast<std::size_t>(j);
            const real gap = std::max({0.0, b.lo[jj] - a.hi[jj], a.lo[jj] - b.hi[jj]});
            s += gap * gap;
        }
        return std::sqrt(s);
    }
    bool box_overlap(const Box& a, const Box& b) const {
        for (int j = 0; j < d_; ++j) {
            const auto jj = static_cast<std::size_t>(j);
            if (a.hi[jj] <= b.lo[jj] || b.hi[jj] <= a.lo[jj]) return false;
        }
        return true;
    }

    int d_;
    std::vector<Box> boxes_;
    std::vector<Ball> balls_;
    real dilation_ = 0.0;
};

/// Gram matrix A(m, n) = int_a^b h_m h_n d gamma in one dimension (m, n <= N), by composite
/// Gauss-Legendre against the Gaussian density, with the density folded into the recurrence.
inline RMatrix interval_gram(int N, real a, real b) {
    const real X = 2.0 * std::sqrt(N + 1.0) + 12.0;  // beyond X every integrand is below 1e-30
    const real lo = std::max(a, -X), hi = std::min(b, X);
    RMatrix A = RMatrix::Zero(N + 1, N + 1);
    if (!(hi > lo)) return A;
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / 0.25)));
    const Rule1D rule = composite_legendre(lo, hi, panels, 16);
    RMatrix S(static_cast<Eigen::Index>(rule.size()), N + 1);
    std::vector<real> tab(static_cast<std::size_t>(N) + 1);
    const real c0 = std::pow(2.0 * pi, -0.25);
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const real x = rule.nodes[i];
        // h_k(x) exp(-x^2/4) (2 pi)^{-1/4}: the square of the prefactor is the gamma density.
        tab[0] = c0 * std::exp(-0.25 * x * x);
        if (N > 0) tab[1] = x * tab[0];
        for (int k = 1; k < N; ++k)
            tab[static_cast<std::size_t>(k) + 1] =
                (x * tab[static_cast<std::size_t>(k)] - std::sqrt(static_cast<real>(k)) * tab[static_cast<std::size_t>(k) - 1]) /
                std::sqrt(k + 1.0);
        const real sw = std::sqrt(rule.weights[i]);
        for (int k = 0; k <= N; ++k) S(static_cast<Eigen::Index>(i), k) = sw * tab[static_cast<std::size_t>(k)];
    }
    A = S.transpose() * S;
    return A;
}

}  // namespace oulab
