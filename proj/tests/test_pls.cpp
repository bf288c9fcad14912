#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cloudseg/error.hpp"
#include "cloudseg/kernels.hpp"
#include "cloudseg/pls.hpp"
#include "cloudseg/synthetic.hpp"
#include "support.hpp"

using namespace cloudseg;

namespace {

struct Instance {
    FeatureMatrix x;
    std::vector<double> y;
};

std::vector<ChannelId> first_channels(int k) {
    std::vector<ChannelId> ids;
    for (int j = 0; j < k; ++j) ids.push_back(channel_from_number(j + 1));
    return ids;
}

Instance random_instance(int rows, int k, std::mt19937_64& gen) {
    std::normal_distribution<double> n01;
    Instance inst;
    inst.x.values.resize(rows, k);
    inst.x.channel_ids = first_channels(k);
    Eigen::VectorXd beta(k);
    for (int j = 0; j < k; ++j) beta[j] = n01(gen);
    for (int i = 0; i < rows; ++i) {
        double lin = 0.0;
        for (int j = 0; j < k; ++j) {
            // Correlated columns with different offsets and scales.
            inst.x.values(i, j) = (j + 1) * n01(gen) + 0.5 * (j > 0 ? inst.x.values(i, j - 1) : 0.0) + j;
            lin += beta[j] * inst.x.values(i, j);
        }
        inst.y.push_back(lin + 0.3 * n01(gen));
    }
    return inst;
}

// Ordinary least squares on centred data via Householder QR.
Eigen::VectorXd ols(const Instance& inst) {
    const Eigen::MatrixXd xc = inst.x.values.rowwise() - inst.x.values.colwise().mean();
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(inst.y.data(), static_cast<Eigen::Index>(inst.y.size()));
    const Eigen::VectorXd yc = y.array() - y.mean();
    return xc.householderQr().solve(yc);
}

Eigen::MatrixXd centred(const Eigen::MatrixXd& x) { return x.rowwise() - x.colwise().mean(); }

}  // namespace

TEST(Simpls, MatchesOlsWhenAllComponentsKept) {
    std::mt19937_64 gen(21);
    for (int trial = 0; trial < 50; ++trial) {
        const int rows = 50 + static_cast<int>(gen() % 451);
        const int k = 1 + static_cast<int>(gen() % 4);
        const auto inst = random_instance(rows, k, gen);
        const PlsModel model = train(inst.x, inst.y, k);
        const Eigen::VectorXd want = ols(inst);
        EXPECT_LT((model.coefficients - want).cwiseAbs().maxCoeff(), 1e-8) << "trial " << trial;
    }
}

TEST(Simpls, ScoresAreOrthogonal) {
    std::mt19937_64 gen(22);
    for (int trial = 0; trial < 50; ++trial) {
        const int rows = 50 + static_cast<int>(gen() % 451);
        const int k = 2 + static_cast<int>(gen() % 3);
        const auto inst = random_instance(rows, k, gen);
        const SimplsFit fit = simpls(joint_moments(inst.x, inst.y), k);
        ASSERT_EQ(fit.components, k);
        const Eigen::MatrixXd t = centred(inst.x.values) * fit.weights;
        for (int a = 0; a < k; ++a) {
            EXPECT_NEAR(t.col(a).norm(), 1.0, 1e-9);
            for (int b = a + 1; b < k; ++b) {
                EXPECT_LT(std::abs(t.col(a).dot(t.col(b))) / (t.col(a).norm() * t.col(b).norm()), 1e-8);
            }
        }
    }
}

TEST(Simpls, SingleFeatureIsCovarianceOverVariance) {
    FeatureMatrix x{Eigen::Vector4d(0, 1, 2, 3), {ChannelId::normalized_blue_red}};
    const std::vector<double> y = {0, 0, 1, 1};
    const PlsModel model = train(x, y, 1);
    // Sample cov 2/3 over sample var 5/3.
    EXPECT_NEAR(model.coefficients[0], 0.4, 1e-12);
    EXPECT_DOUBLE_EQ(model.y_mean, 0.5);
    EXPECT_DOUBLE_EQ(model.x_means[0], 1.5);

    std::mt19937_64 gen(23);
    for (int trial = 0; trial < 20; ++trial) {
        const auto inst = random_instance(100 + trial, 1, gen);
        const Eigen::VectorXd xc = centred(inst.x.values).col(0);
        const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(inst.y.data(), 100 + trial);
        const double slope = xc.dot((y.array() - y.mean()).matrix()) / xc.squaredNorm();
        EXPECT_NEAR(train(inst.x, inst.y, 1).coefficients[0], slope, 1e-10 * std::max(1.0, std::abs(slope)));
    }
}

TEST(Simpls, ExactLinearFit) {
    FeatureMatrix x{Eigen::VectorXd::LinSpaced(20, -1.0, 3.0), {ChannelId::red}};
    std::vector<double> y;
    for (int i = 0; i < 20; ++i) y.push_back(2.0 * x.values(i, 0) + 1.0);
    const PlsModel model = train(x, y, 1);
    EXPECT_NEAR(model.coefficients[0], 2.0, 1e-12);
    const auto raw = predict_raw(model, x);
    for (int i = 0; i < 20; ++i) EXPECT_NEAR(raw[i], y[i], 1e-12);
}

TEST(Simpls, OneComponentDirectionFollowsCrossProduct) {
    std::mt19937_64 gen(24);
    const auto inst = random_instance(300, 3, gen);
    const PlsModel model = train(inst.x, inst.y, 1);
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(inst.y.data(), 300);
    const Eigen::VectorXd xty = centred(inst.x.values).transpose() * (y.array() - y.mean()).matrix();
    EXPECT_NEAR(std::abs(model.coefficients.normalized().dot(xty.normalized())), 1.0, 1e-12);
}

TEST(Simpls, DuplicatedDataLeavesCoefficientsUnchanged) {
    std::mt19937_64 gen(25);
    const auto inst = random_instance(120, 3, gen);
    Instance twice;
    twice.x.channel_ids = inst.x.channel_ids;
    twice.x.values.resize(240, 3);
    twice.x.values << inst.x.values, inst.x.values;
    twice.y = inst.y;
    twice.y.insert(twice.y.end(), inst.y.begin(), inst.y.end());
    for (int p = 1; p <= 3; ++p) {
        const auto a = train(inst.x, inst.y, p);
        const auto b = train(twice.x, twice.y, p);
        EXPECT_LT((a.coefficients - b.coefficients).cwiseAbs().maxCoeff(), 1e-9);
    }
}

TEST(Simpls, DegenerateFeature) {
    FeatureMatrix x;
    x.values.resize(10, 2);
    x.values.col(0) = Eigen::VectorXd::LinSpaced(10, 0.0, 1.0);
    x.values.col(1).setConstant(0.7);
    x.channel_ids = {ChannelId::red, ChannelId::green};
    const std::vector<double> y = {0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
    EXPECT_THROW(train(x, y, 1), NumericalError);

    // Collinear columns leave no covariance after the first component, so extraction stops early.
    x.values.col(1) = 2.0 * x.values.col(0);
    std::vector<double> joint_labels(y.begin(), y.end());
    const SimplsFit fit = simpls(joint_moments(x, joint_labels), 2);
    EXPECT_EQ(fit.components, 1);
    EXPECT_TRUE(fit.coefficients.allFinite());
}

TEST(Simpls, ComponentBounds) {
    std::mt19937_64 gen(26);
    const auto inst = random_instance(50, 2, gen);
    EXPECT_THROW(train(inst.x, inst.y, 3), ValidationError);
    EXPECT_THROW(train(inst.x, inst.y, 0), ValidationError);
}

TEST(Simpls, SingleClassLabelsGiveZeroCoefficients) {
    std::mt19937_64 gen(27);
    auto inst = random_instance(50, 2, gen);
    std::fill(inst.y.begin(), inst.y.end(), 1.0);
    const auto model = train(inst.x, inst.y, 2);
    EXPECT_TRUE(model.coefficients.isZero(0.0));
}

TEST(Predict, MinMaxNormalisation) {
    const std::vector<double> raw = {0.2, 0.4, 0.6};
    const auto prob = normalize_belongingness(raw, 3, 1);
    EXPECT_EQ(prob.values[0], 0.0);
    EXPECT_NEAR(prob.values[1], 0.5, 1e-15);
    EXPECT_EQ(prob.values[2], 1.0);
    EXPECT_FALSE(prob.degenerate);

    const auto flat = normalize_belongingness(std::vector<double>{0.3, 0.3}, 2, 1);
    EXPECT_TRUE(flat.degenerate);
    EXPECT_EQ(flat.values[0], 0.5);
    EXPECT_EQ(flat.values[1], 0.5);
}

TEST(Predict, PositiveAffineInvariance) {
    std::mt19937_64 gen(28);
    std::uniform_real_distribution<double> u(-3.0, 3.0), scale(0.01, 100.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> v(64), w(64);
        const double a = scale(gen), b = u(gen);
        for (int i = 0; i < 64; ++i) {
            v[i] = u(gen);
            w[i] = a * v[i] + b;
        }
        const auto pv = normalize_belongingness(v, 8, 8);
        const auto pw = normalize_belongingness(w, 8, 8);
        for (int i = 0; i < 64; ++i) EXPECT_NEAR(pv.values[i], pw.values[i], 1e-12);
        EXPECT_EQ(*std::min_element(pv.values.begin(), pv.values.end()), 0.0);
        EXPECT_EQ(*std::max_element(pv.values.begin(), pv.values.end()), 1.0);
        for (double t : {0.1, 0.5, 0.9}) EXPECT_EQ(binarize(pv, t).labels, binarize(pw, t).labels);
    }
}

TEST(Predict, ChannelMismatch) {
    std::mt19937_64 gen(29);
    const auto inst = random_instance(40, 2, gen);
    const auto model = train(inst.x, inst.y, 1);
    FeatureMatrix other = inst.x;
    other.channel_ids = {ChannelId::red, ChannelId::blue};
    EXPECT_THROW(predict_raw(model, other), ValidationError);
}

TEST(Predict, DeterministicAcrossThreadCounts) {
    const Image img = testsupport::random_image(64, 48, 30);
    FeatureMatrix f = make_features(img, std::vector<ChannelId>{ChannelId::normalized_blue_red, ChannelId::saturation});
    std::vector<double> y(f.values.rows());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = f.values(static_cast<Eigen::Index>(i), 0) < 0.1 ? 1.0 : 0.0;
    const auto model = train(f, y, 2);
    kernels::set_thread_count(1);
    const auto a = predict_image(model, img);
    kernels::set_thread_count(4);
    const auto b = predict_image(model, img);
    kernels::set_thread_count(0);
    EXPECT_EQ(a.values, b.values);
}

TEST(Binarize, Examples) {
    ProbabilityMap prob{3, 1, {0.0, 0.5, 1.0}, false};
    EXPECT_EQ(binarize(prob, 0.5).labels, (std::vector<std::uint8_t>{0, 1, 1}));
    EXPECT_EQ(binarize(prob, 0.0).labels, (std::vector<std::uint8_t>{1, 1, 1}));
    EXPECT_EQ(binarize(prob, 1.0).labels, (std::vector<std::uint8_t>{0, 0, 1}));
    EXPECT_THROW(binarize(prob, 1.5), ValidationError);
    EXPECT_THROW(binarize(prob, -0.1), ValidationError);
}

TEST(TrainFromManifest, PoolingAndSign) {
    testsupport::TempDir dir("pls_manifest");
    SynthOptions opts;
    opts.images = 3;
    opts.size = 40;
    const auto manifest = make_synthetic_dataset(opts, dir.path(), false);
    const std::vector<ChannelId> c15 = {ChannelId::normalized_blue_red};
    const auto model = train_from_manifest(manifest, c15, 1);
    EXPECT_LT(model.coefficients[0], 0.0);  // cloud pixels have low (B-R)/(B+R)
    EXPECT_EQ(model.training_meta["image_count"], 3);

    DatasetManifest one = manifest;
    one.entries.resize(1);
    const auto sample = load_sample(manifest, 0);
    const auto direct = train(make_features(sample.image, c15), label_values(sample.mask), 1);
    EXPECT_NEAR(train_from_manifest(one, c15, 1).coefficients[0], direct.coefficients[0], 1e-12);

    DatasetManifest doubled = one;
    doubled.entries.push_back(one.entries[0]);
    doubled.entries[1].image_path = one.entries[0].image_path;
    EXPECT_NEAR(train_from_manifest(doubled, c15, 1).coefficients[0], direct.coefficients[0], 1e-9);
}

TEST(TrainFromManifest, Errors) {
    DatasetManifest empty;
    const std::vector<ChannelId> c15 = {ChannelId::normalized_blue_red};
    EXPECT_THROW(train_from_manifest(empty, c15, 1), ValidationError);
}
