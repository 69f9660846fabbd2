#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "signet/error.hpp"

namespace signet {

// Missing values travel as quiet NaN and are rendered as "NA" in reports.
inline double missing_value() noexcept { return std::numeric_limits<double>::quiet_NaN(); }
inline bool is_missing(double v) noexcept { return std::isnan(v); }

namespace stats {

inline double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Sample standard deviation, divisor N-1.
inline double sample_sd(const std::vector<double>& v) {
    if (v.size() < 2) throw NumericError("sample SD needs at least 2 values");
    double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// Pearson correlation; NaN (missing marker) when either side has zero
// variance. The denominator is sqrt(vx*vy) so that exact integer inputs give
// exact rational results where the algebra allows.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw NumericError("pearson: length mismatch");
    std::size_t n = x.size();
    if (n < 2) return missing_value();
    double mx = mean(x), my = mean(y);
    double cov = 0.0, vx = 0.0, vy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        cov += dx * dy;
        vx += dx * dx;
        vy += dy * dy;
    }
    if (vx == 0.0 || vy == 0.0) return missing_value();
    return cov / std::sqrt(vx * vy);
}

// Ranks 1..n with average ranks for ties.
inline std::vector<double> ranks_average_ties(const std::vector<double>& v) {
    std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

// Drops positions where either input is missing.
inline void pairwise_complete(const std::vector<double>& x, const std::vector<double>& y,
                              std::vector<double>& xc, std::vector<double>& yc) {
    xc.clear();
    yc.clear();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!is_missing(x[i]) && !is_missing(y[i])) {
            xc.push_back(x[i]);
            yc.push_back(y[i]);
        }
    }
}

// Spearman rank correlation: Pearson on average-tie ranks after pairwise
// deletion of missing entries. Fewer than 3 surviving points is an error.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw NumericError("spearman: length mismatch");
    std::vector<double> xc, yc;
    pairwise_complete(x, y, xc, yc);
    if (xc.size() < 3) {
        throw NumericError("spearman: fewer than 3 complete pairs (" +
                           std::to_string(xc.size()) + ")");
    }
    return pearson(ranks_average_ties(xc), ranks_average_ties(yc));
}

// Gauss-Jordan inverse with partial pivoting. Returns false when the matrix
// is singular to working precision.
inline bool invert_matrix(std::vector<std::vector<double>> a,
                          std::vector<std::vector<double>>& inv) {
    std::size_t n = a.size();
    inv.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        }
        if (std::fabs(a[pivot][col]) < 1e-12) return false;
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);
        double d = a[col][col];
        for (std::size_t c = 0; c < n; ++c) {
            a[col][c] /= d;
            inv[col][c] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = a[r][col];
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < n; ++c) {
                a[r][c] -= f * a[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return true;
}

// Two-sided p-value for a (partial) correlation r with the given residual
// degrees of freedom, via the t transform t = r*sqrt(df/(1-r^2)).
inline double correlation_p_value(double r, int df) {
    if (df < 1) throw NumericError("p-value needs at least 1 degree of freedom");
    double r2 = r * r;
    if (r2 >= 1.0) return 0.0;
    double t = std::fabs(r) * std::sqrt(static_cast<double>(df) / (1.0 - r2));
    boost::math::students_t dist(static_cast<double>(df));
    return 2.0 * boost::math::cdf(boost::math::complement(dist, t));
}

// Partial Spearman correlation of x with y controlling for `controls`,
// via the inverse of the rank correlation matrix. All vectors must be equal
// length and complete (callers perform listwise deletion first). Optional
// `names` label the variables, in (x, y, controls...) order, in error
// messages.
inline double partial_spearman(const std::vector<double>& x, const std::vector<double>& y,
                               const std::vector<std::vector<double>>& controls,
                               const std::vector<std::string>& names = {}) {
    std::size_t n = x.size();
    if (y.size() != n) throw NumericError("partial_spearman: length mismatch");
    for (const auto& c : controls) {
        if (c.size() != n) throw NumericError("partial_spearman: control length mismatch");
    }
    std::size_t k = controls.size();
    std::size_t need = std::max<std::size_t>(3, k + 4);
    if (n < need) {
        throw NumericError("partial_spearman: need at least " + std::to_string(need) +
                           " complete rows with " + std::to_string(k) + " controls, got " +
                           std::to_string(n));
    }

    auto label = [&](std::size_t i) {
        return i < names.size() ? names[i] : "variable " + std::to_string(i);
    };

    std::vector<std::vector<double>> ranked;
    ranked.push_back(ranks_average_ties(x));
    ranked.push_back(ranks_average_ties(y));
    for (const auto& c : controls) ranked.push_back(ranks_average_ties(c));

    std::size_t m = ranked.size();
    std::vector<std::vector<double>> corr(m, std::vector<double>(m, 1.0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            double r = pearson(ranked[i], ranked[j]);
            if (is_missing(r)) {
                throw NumericError("partial_spearman: " + label(i) + " or " + label(j) +
                                   " has zero rank variance");
            }
            corr[i][j] = corr[j][i] = r;
        }
    }

    std::vector<std::vector<double>> prec;
    if (!invert_matrix(corr, prec)) {
        // Name the most collinear pair to make the failure actionable.
        std::size_t bi = 0, bj = 1;
        double best = -1.0;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j) {
                if (std::fabs(corr[i][j]) > best) {
                    best = std::fabs(corr[i][j]);
                    bi = i;
                    bj = j;
                }
            }
        }
        throw NumericError("partial_spearman: singular rank-correlation matrix; most collinear "
                           "pair is (" +
                           label(bi) + ", " + label(bj) + ") with |r| = " + std::to_string(best));
    }
    return -prec[0][1] / std::sqrt(prec[0][0] * prec[1][1]);
}

} // namespace stats
} // namespace signet
