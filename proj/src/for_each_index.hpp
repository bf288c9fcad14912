#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace cloudseg::detail {

/// Runs f(i) for i in [0, n) across the OpenMP team. Results must be written to index-addressed
/// slots so the outcome does not depend on scheduling. If any call throws, the exception of the
/// lowest failing index is rethrown after the loop.
template <typename F>
void for_each_index(std::size_t n, F&& f) {
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            f(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace cloudseg::detail
