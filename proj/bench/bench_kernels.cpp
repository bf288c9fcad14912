// Serial reference kernels against their OpenMP counterparts on a 600x600 frame.

#include <random>

#include <benchmark/benchmark.h>

#include "cloudseg/kernels.hpp"

using namespace cloudseg;

namespace {

constexpr int kSide = 600;

const Image& frame() {
    static const Image img = [] {
        std::mt19937_64 gen(1);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        Image out(kSide, kSide);
        for (auto& p : out.pixels()) p = {u(gen), u(gen), u(gen)};
        return out;
    }();
    return img;
}

const Eigen::MatrixXd& stack() {
    static const Eigen::MatrixXd s = kernels::serial::channel_stack(frame());
    return s;
}

template <bool Parallel>
void BM_ChannelStack(benchmark::State& state) {
    for (auto _ : state) {
        auto s = Parallel ? kernels::parallel::channel_stack(frame()) : kernels::serial::channel_stack(frame());
        benchmark::DoNotOptimize(s.data());
    }
    state.SetItemsProcessed(state.iterations() * kSide * kSide);
}

template <bool Parallel>
void BM_ColumnMoments(benchmark::State& state) {
    for (auto _ : state) {
        auto m = Parallel ? kernels::parallel::column_moments(stack()) : kernels::serial::column_moments(stack());
        benchmark::DoNotOptimize(m.comoment.data());
    }
    state.SetItemsProcessed(state.iterations() * kSide * kSide);
}

template <bool Parallel>
void BM_LinearResponse(benchmark::State& state) {
    const Eigen::MatrixXd features = stack().leftCols(3);
    const Eigen::VectorXd means = Eigen::VectorXd::Constant(3, 0.5);
    const Eigen::VectorXd coef = Eigen::VectorXd::LinSpaced(3, -1.0, 1.0);
    for (auto _ : state) {
        auto r = Parallel ? kernels::parallel::linear_response(features, means, coef, 0.5)
                          : kernels::serial::linear_response(features, means, coef, 0.5);
        benchmark::DoNotOptimize(r.data());
    }
    state.SetItemsProcessed(state.iterations() * kSide * kSide);
}

template <bool Parallel>
void BM_Undistort(benchmark::State& state) {
    const FisheyeCalibration cal{(kSide - 1) / 2.0 / (std::numbers::pi / 2.0), (kSide - 1) / 2.0, (kSide - 1) / 2.0};
    const VirtualCamera camera(ViewSpec{120.0, 45.0, 62.0, 400});
    for (auto _ : state) {
        auto out = Parallel ? kernels::parallel::undistort(frame(), cal, camera)
                            : kernels::serial::undistort(frame(), cal, camera);
        benchmark::DoNotOptimize(out.pixels().data());
    }
}

}  // namespace

BENCHMARK(BM_ChannelStack<false>)->Name("channel_stack/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ChannelStack<true>)->Name("channel_stack/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ColumnMoments<false>)->Name("column_moments/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ColumnMoments<true>)->Name("column_moments/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LinearResponse<false>)->Name("linear_response/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LinearResponse<true>)->Name("linear_response/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Undistort<false>)->Name("undistort/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Undistort<true>)->Name("undistort/parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
