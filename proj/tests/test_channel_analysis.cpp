#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "cloudseg/channel_analysis.hpp"
#include "cloudseg/error.hpp"
#include "cloudseg/synthetic.hpp"
#include "support.hpp"

using namespace cloudseg;

namespace {

// Cyclic Jacobi rotations; eigenvalues returned descending.
Eigen::VectorXd jacobi_eigenvalues(Eigen::MatrixXd a) {
    const Eigen::Index n = a.rows();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-30) break;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    Eigen::VectorXd ev = a.diagonal();
    std::sort(ev.data(), ev.data() + n, std::greater<>());
    return ev;
}

// Sample covariance straight from the definition.
Eigen::MatrixXd covariance(const Eigen::MatrixXd& x) {
    const Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
    return c.transpose() * c / static_cast<double>(x.rows() - 1);
}

// Twice the trapezoidal area times P*N, from an explicit threshold sweep.
std::uint64_t brute_twice_area(const std::vector<double>& v, const std::vector<std::uint8_t>& gt) {
    std::set<double, std::greater<>> thresholds(v.begin(), v.end());
    std::uint64_t prev_tp = 0, prev_fp = 0, twice = 0;
    for (double t : thresholds) {
        std::uint64_t tp = 0, fp = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] >= t) gt[i] ? ++tp : ++fp;
        }
        twice += (fp - prev_fp) * (tp + prev_tp);
        prev_tp = tp;
        prev_fp = fp;
    }
    return twice;
}

// Mann-Whitney: 2 * (#(pos > neg) + 0.5 * #(pos == neg)).
std::uint64_t mann_whitney_twice(const std::vector<double>& v, const std::vector<std::uint8_t>& gt) {
    std::uint64_t twice = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!gt[i]) continue;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (gt[j]) continue;
            twice += v[i] > v[j] ? 2 : (v[i] == v[j] ? 1 : 0);
        }
    }
    return twice;
}

Eigen::MatrixXd correlated_stack(int rows, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> n01;
    Eigen::MatrixXd x(rows, 16);
    for (int i = 0; i < rows; ++i) {
        const double f1 = n01(gen), f2 = n01(gen);
        for (int j = 0; j < 16; ++j) x(i, j) = (j % 3) * f1 + (j % 5) * 0.3 * f2 + 0.5 * n01(gen);
    }
    return x;
}

}  // namespace

TEST(Standardize, HandExample) {
    Eigen::MatrixXd col(2, 1);
    col << 1.0, 3.0;
    const auto s = standardize(col);
    EXPECT_NEAR(s.matrix(0, 0), -std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(s.matrix(1, 0), std::sqrt(0.5), 1e-15);
    EXPECT_DOUBLE_EQ(s.means()[0], 2.0);
    EXPECT_DOUBLE_EQ(s.stds()[0], std::sqrt(2.0));
}

TEST(Standardize, ConstantColumnIsZeroedAndFlagged) {
    Eigen::MatrixXd x(3, 2);
    x << 5, 1, 5, 2, 5, 4;
    const auto s = standardize(x);
    EXPECT_TRUE(s.matrix.col(0).isZero(0.0));
    ASSERT_EQ(s.degenerate_columns.size(), 1u);
    EXPECT_EQ(s.degenerate_columns[0], 0);
}

TEST(Standardize, InvariantsAndIdempotence) {
    const Eigen::MatrixXd x = correlated_stack(300, 1);
    const auto s = standardize(x);
    for (Eigen::Index j = 0; j < 16; ++j) {
        const auto c = s.matrix.col(j);
        const double mean = c.mean();
        EXPECT_NEAR(mean, 0.0, 1e-9);
        EXPECT_NEAR(std::sqrt((c.array() - mean).square().sum() / (c.size() - 1)), 1.0, 1e-9);
    }
    const auto again = standardize(s.matrix);
    EXPECT_LT((again.matrix - s.matrix).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Standardize, TooFewRows) {
    EXPECT_THROW(standardize(Eigen::MatrixXd::Ones(1, 16)), ValidationError);
}

TEST(Pca, MatchesJacobiOracle) {
    const Eigen::MatrixXd x = correlated_stack(500, 2);
    const auto s = standardize(x);
    const PcaReport r = pca(s);
    const Eigen::VectorXd want = jacobi_eigenvalues(covariance(s.matrix));
    EXPECT_LT((r.eigenvalues - want).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Pca, ReportInvariants) {
    const auto s = standardize(correlated_stack(400, 3));
    const PcaReport r = pca(s);
    EXPECT_NEAR(r.variance_fractions.sum(), 1.0, 1e-9);
    EXPECT_NEAR(r.eigenvalues.sum(), 16.0, 1e-6);
    for (Eigen::Index i = 1; i < 16; ++i) EXPECT_GE(r.eigenvalues[i - 1], r.eigenvalues[i]);
    EXPECT_GE(r.eigenvalues.minCoeff(), 0.0);
    const Eigen::MatrixXd gram = r.eigenvectors.transpose() * r.eigenvectors;
    EXPECT_LT((gram - Eigen::MatrixXd::Identity(16, 16)).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_TRUE(r.loading_factors.isApprox(r.eigenvectors.col(0).cwiseAbs()));
    for (Eigen::Index c = 0; c < 16; ++c) {
        Eigen::Index arg;
        r.eigenvectors.col(c).cwiseAbs().maxCoeff(&arg);
        EXPECT_GT(r.eigenvectors(arg, c), 0.0);
    }
    for (int k = 0; k < 2; ++k) {
        EXPECT_LT((r.biplot.col(k) - r.eigenvectors.col(k) * std::sqrt(r.eigenvalues[k])).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Pca, IdenticalColumnsGiveSingleComponent) {
    std::mt19937_64 gen(4);
    std::normal_distribution<double> n01;
    Eigen::VectorXd base(200);
    for (auto& v : base) v = n01(gen);
    Eigen::MatrixXd x(200, 16);
    for (int j = 0; j < 16; ++j) x.col(j) = base;
    x.col(3).setConstant(0.25);  // degenerate, excluded
    const PcaReport r = pca(standardize(x));
    EXPECT_EQ(r.active_columns, 15);
    EXPECT_NEAR(r.variance_fractions[0], 1.0, 1e-9);
    EXPECT_NEAR(r.eigenvalues.sum(), 15.0, 1e-6);
    EXPECT_EQ(r.loading_factors[3], 0.0);
}

TEST(Pca, IndependentEqualVarianceColumns) {
    // Exactly orthogonal, equal-norm, zero-mean columns: correlation matrix is the identity.
    Eigen::MatrixXd x(4, 2);
    x << 1, 1, -1, 1, 1, -1, -1, -1;
    const PcaReport r = pca(standardize(x));
    EXPECT_NEAR(r.variance_fractions[0], 0.5, 1e-6);
    EXPECT_NEAR(r.variance_fractions[1], 0.5, 1e-6);
}

TEST(Pca, AffineRescaleInvariance) {
    const Eigen::MatrixXd x = correlated_stack(300, 5);
    Eigen::MatrixXd y = x;
    std::mt19937_64 gen(6);
    std::uniform_real_distribution<double> scale(0.1, 10.0), shift(-5.0, 5.0);
    for (int j = 0; j < 16; ++j) y.col(j) = (y.col(j).array() * scale(gen) + shift(gen)).matrix();
    const auto a = pca(standardize(x));
    const auto b = pca(standardize(y));
    EXPECT_LT((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Pca, NonFiniteRejected) {
    Eigen::MatrixXd x = correlated_stack(20, 7);
    x(3, 4) = NAN;
    EXPECT_THROW(standardize(x), ValidationError);
}

TEST(Concat, ShapesAndDuplication) {
    const auto a = standardize(correlated_stack(3, 8));
    const auto b = standardize(correlated_stack(5, 9));
    const std::vector<StandardizedStack> ab = {a, b};
    const auto cat = concat_stacks(ab);
    EXPECT_EQ(cat.matrix.rows(), 8);
    EXPECT_TRUE(cat.matrix.topRows(3) == a.matrix);
    EXPECT_TRUE(cat.matrix.bottomRows(5) == b.matrix);
    EXPECT_EQ(cat.sources.size(), 2u);

    const auto s = standardize(correlated_stack(250, 10));
    const std::vector<StandardizedStack> one = {s};
    EXPECT_TRUE(concat_stacks(one).matrix == s.matrix);
    const std::vector<StandardizedStack> twice = {s, s};
    const auto single = pca(s);
    const auto doubled = pca(concat_stacks(twice));
    EXPECT_LT((single.eigenvalues - doubled.eigenvalues).cwiseAbs().maxCoeff(), 1e-9);

    EXPECT_THROW(concat_stacks(std::span<const StandardizedStack>{}), ValidationError);
}

TEST(Concat, AccumulatorMatchesConcatenation) {
    const auto a = standardize(correlated_stack(120, 11));
    const auto b = standardize(correlated_stack(80, 12));
    CorrelationAccumulator acc;
    acc.add(a);
    acc.add(b);
    const std::vector<StandardizedStack> ab = {a, b};
    const auto direct = pca(concat_stacks(ab));
    EXPECT_LT((acc.finish().eigenvalues - direct.eigenvalues).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Roc, SpecExamples) {
    const std::vector<std::uint8_t> gt = {0, 0, 1, 1};
    const auto perfect = roc_area(std::vector<double>{0.1, 0.2, 0.8, 0.9}, gt);
    EXPECT_NEAR(perfect.auc, 1.0, 1e-12);
    EXPECT_NEAR(perfect.area_over_diagonal, 0.5, 1e-9);
    EXPECT_EQ(perfect.orientation, RocOrientation::direct);

    const auto flat = roc_area(std::vector<double>{0.3, 0.3, 0.3, 0.3}, gt);
    EXPECT_EQ(flat.auc, 0.5);
    EXPECT_EQ(flat.area_over_diagonal, 0.0);

    const auto inverted = roc_area(std::vector<double>{0.9, 0.2, 0.8, 0.1}, std::vector<std::uint8_t>{0, 1, 0, 1});
    EXPECT_EQ(inverted.auc, 0.0);
    EXPECT_NEAR(inverted.area_over_diagonal, 0.5, 1e-9);
    EXPECT_EQ(inverted.orientation, RocOrientation::inverted);
}

TEST(Roc, DegenerateGroundTruth) {
    EXPECT_THROW(roc_area(std::vector<double>{0.1, 0.2}, std::vector<std::uint8_t>{1, 1}), NumericalError);
    EXPECT_THROW(roc_area(std::vector<double>{0.1}, std::vector<std::uint8_t>{1, 0}), ValidationError);
}

TEST(Roc, BruteForceAndMannWhitneyAgreeExactly) {
    std::mt19937_64 gen(13);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(gen() % 99);
        std::vector<double> v(n);
        std::vector<std::uint8_t> gt(n);
        for (int i = 0; i < n; ++i) {
            v[i] = static_cast<double>(gen() % 20) / 20.0;  // plenty of ties
            gt[i] = static_cast<std::uint8_t>(gen() % 2);
        }
        gt[0] = 0;
        gt[1] = 1;
        const auto r = roc_area(v, gt);
        const double pn = static_cast<double>(r.positives) * static_cast<double>(r.negatives);
        EXPECT_EQ(r.auc, static_cast<double>(brute_twice_area(v, gt)) / (2.0 * pn));
        EXPECT_EQ(brute_twice_area(v, gt), mann_whitney_twice(v, gt));
        for (std::size_t k = 1; k < r.points.size(); ++k) {
            EXPECT_GE(r.points[k].fpr, r.points[k - 1].fpr);
            EXPECT_GE(r.points[k].tpr, r.points[k - 1].tpr);
        }
        EXPECT_EQ(r.points.front().fpr, 0.0);
        EXPECT_EQ(r.points.back().tpr, 1.0);
        EXPECT_GE(r.area_over_diagonal, 0.0);
        EXPECT_LE(r.area_over_diagonal, 0.5);
    }
}

TEST(Roc, MonotoneTransformAndLabelFlip) {
    std::mt19937_64 gen(14);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 500;
        std::vector<double> v(n), w(n);
        std::vector<std::uint8_t> gt(n), flipped(n);
        for (int i = 0; i < n; ++i) {
            gt[i] = static_cast<std::uint8_t>(gen() % 2);
            flipped[i] = 1 - gt[i];
            // Integer-valued so that the transform stays strictly increasing in floating point.
            v[i] = static_cast<double>(gen() % 1000 + 200 * gt[i]);
            w[i] = std::exp(3.0 * v[i] / 1000.0) - 7.0;
        }
        const auto a = roc_area(v, gt);
        EXPECT_EQ(a.auc, roc_area(w, gt).auc);
        const auto f = roc_area(v, flipped);
        EXPECT_NEAR(f.area_over_diagonal, a.area_over_diagonal, 1e-12);
        EXPECT_NE(f.orientation, a.orientation);
    }
}

TEST(Roc, AccumulatorPoolsChunks) {
    const std::vector<double> v = {0.1, 0.4, 0.35, 0.8, 0.7, 0.2};
    const std::vector<std::uint8_t> gt = {0, 1, 0, 1, 1, 0};
    RocAccumulator acc;
    acc.add(std::span(v).first(3), std::span(gt).first(3));
    acc.add(std::span(v).subspan(3), std::span(gt).subspan(3));
    EXPECT_EQ(acc.finish().auc, roc_area(v, gt).auc);
}

TEST(Rank, SyntheticTopChannelsIncludeNormalizedBlueRed) {
    testsupport::TempDir dir("rank");
    SynthOptions opts;
    opts.images = 4;
    opts.size = 48;
    opts.noise_sigma = 0.02;
    const auto manifest = make_synthetic_dataset(opts, dir.path(), false);
    const RankReport report = rank_channels(manifest);
    ASSERT_EQ(report.rows.size(), 16u);
    for (std::size_t i = 1; i < report.rows.size(); ++i) EXPECT_GE(report.rows[i - 1].roc_area, report.rows[i].roc_area);
    // c15, c13 and c5 all separate the two colour populations perfectly.
    for (const auto& row : report.rows) {
        if (row.channel == ChannelId::normalized_blue_red || row.channel == ChannelId::red_blue_ratio ||
            row.channel == ChannelId::saturation) {
            EXPECT_GT(row.roc_area, 0.49);
        }
    }
    const auto c15 = std::find_if(report.rows.begin(), report.rows.end(),
                                  [](const ChannelRank& r) { return r.channel == ChannelId::normalized_blue_red; });
    EXPECT_EQ(c15->orientation, RocOrientation::inverted);
    EXPECT_EQ(report.rows.front().roc_area, c15->roc_area);
}

TEST(Rank, SingleImageMatchesPerImageAnalysis) {
    testsupport::TempDir dir("rank1");
    SynthOptions opts;
    opts.images = 2;
    opts.size = 32;
    auto manifest = make_synthetic_dataset(opts, dir.path(), false);
    manifest.entries.resize(1);
    const auto summary = analyze_pca(manifest);
    ASSERT_EQ(summary.per_image.size(), 1u);
    EXPECT_LT((summary.per_image[0].eigenvalues - summary.concatenated.eigenvalues).cwiseAbs().maxCoeff(), 1e-12);
    const auto roc = analyze_roc(manifest, ChannelId::saturation);
    const RankReport report = rank_channels(manifest);
    for (const auto& row : report.rows) {
        if (row.channel == ChannelId::saturation) EXPECT_EQ(row.roc_area, roc.area_over_diagonal);
    }
}
