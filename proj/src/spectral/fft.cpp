#include "scatrec/spectral/fft.hpp"

#include <fftw3.h>

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace scatrec::spectral {
namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

class Plan {
public:
    Plan(int dim, int n, int sign, bool aligned) {
        int dims[3] = {n, n, n};
        std::size_t total = 1;
        for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(n);
        std::lock_guard lock(planner_mutex());
        auto* scratch = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
        if (!scratch) throw std::bad_alloc();
        unsigned flags = FFTW_ESTIMATE | (aligned ? 0u : FFTW_UNALIGNED);
        // FFTW wants the slowest axis first; our layout has axis 0 fastest,
        // which for a cube is just the same transform with axes relabelled.
        plan_ = fftw_plan_dft(dim, dims, scratch, scratch, sign, flags);
        fftw_free(scratch);
        if (!plan_) throw std::runtime_error("fft: FFTW failed to create a plan");
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    ~Plan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }

    void execute(std::complex<double>* data) const {
        auto* p = reinterpret_cast<fftw_complex*>(data);
        fftw_execute_dft(plan_, p, p);
    }

private:
    fftw_plan plan_ = nullptr;
};

const Plan& cached_plan(int dim, int n, int sign, bool aligned) {
    thread_local std::map<std::tuple<int, int, int, bool>, std::unique_ptr<Plan>> cache;
    auto key = std::make_tuple(dim, n, sign, aligned);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<Plan>(dim, n, sign, aligned)).first;
    return *it->second;
}

void run(std::span<std::complex<double>> data, const SpectralGrid& grid, int sign) {
    if (data.size() != grid.size())
        throw std::invalid_argument("fft: data length does not match grid");
    // fftw_malloc alignment is 16 bytes or more on every supported target;
    // anything our allocator hands out satisfies it.
    const bool aligned = reinterpret_cast<std::uintptr_t>(data.data()) % 16 == 0 &&
                         fftw_alignment_of(reinterpret_cast<double*>(data.data())) == 0;
    cached_plan(grid.dim(), grid.points_per_axis(), sign, aligned).execute(data.data());
}

}  // namespace

void fft_forward(std::span<std::complex<double>> data, const SpectralGrid& grid) {
    run(data, grid, FFTW_FORWARD);
}

void fft_inverse(std::span<std::complex<double>> data, const SpectralGrid& grid) {
    run(data, grid, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(grid.size());
    for (auto& v : data) v *= scale;
}

}  // namespace scatrec::spectral
