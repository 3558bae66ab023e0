#include "doctest.h"
#include "scatrec/simd/kernels.hpp"
#include "test_support.hpp"

#include <cmath>

using scatrec::simd::cplx;
using scatrec::simd::KernelTable;
using namespace scatrec::testing;

namespace {

// Lengths chosen to exercise the 4-wide body and every tail length.
const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 17, 64, 1023};

constexpr double kElementTol = 1e-14;   // pointwise relative, phase-type kernels
constexpr double kPowTol = 5e-14;       // pointwise relative, |x|^p kernels
constexpr double kReduceTol = 1e-13;    // relative, reductions

double max_rel_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double scale = std::max(std::abs(b[i]), 1e-300);
        worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
    }
    return worst;
}

void close_rel(double a, double b, double tol) {
    const double scale = std::max(std::abs(b), 1e-300);
    CHECK(std::abs(a - b) / scale <= tol);
}

template <class F>
void for_each_variant(F&& f) {
    const auto& ref = scatrec::simd::scalar_kernels();
    for (const KernelTable* k : scatrec::simd::available_kernels()) {
        if (k == &ref) continue;
        CAPTURE(k->name);
        f(*k, ref);
    }
}

}  // namespace

TEST_CASE("scalar variant is always available and listed first") {
    const auto all = scatrec::simd::available_kernels();
    REQUIRE(!all.empty());
    CHECK(all.front() == &scatrec::simd::scalar_kernels());
    CHECK(scatrec::simd::select_kernels("scalar"));
    CHECK(std::string(scatrec::simd::active_kernels().name) == "scalar");
    CHECK_FALSE(scatrec::simd::select_kernels("no-such-isa"));
    // restore the widest
    scatrec::simd::select_kernels(all.back()->name);
}

TEST_CASE("elementwise kernels agree with the scalar reference") {
    for_each_variant([](const KernelTable& k, const KernelTable& ref) {
        for (std::size_t n : kLengths) {
            CAPTURE(n);
            const auto x = random_complex(n, 11 + n);
            const auto m = random_complex(n, 23 + n);
            const auto a = random_real(n, 31 + n, -2.0, 3.0);
            const auto k2 = random_real(n, 37 + n, 0.0, 4000.0);

            auto y1 = x, y2 = x;
            k.multiply(y1.data(), m.data(), n);
            ref.multiply(y2.data(), m.data(), n);
            CHECK(max_rel_diff(y1, y2) <= kElementTol);

            for (double t : {0.0, 1e-3, 0.05, -0.7, 12.5}) {
                CAPTURE(t);
                y1 = x;
                y2 = x;
                k.dispersion(y1.data(), k2.data(), t, n);
                ref.dispersion(y2.data(), k2.data(), t, n);
                CHECK(max_rel_diff(y1, y2) <= kElementTol);
            }

            for (double p : {4.0 / 3.0, 5.0 / 3.0, 2.0, 3.0, 4.0}) {
                CAPTURE(p);
                y1 = x;
                y2 = x;
                k.nonlinear_kick(y1.data(), a.data(), 0.025, p, n);
                ref.nonlinear_kick(y2.data(), a.data(), 0.025, p, n);
                CHECK(max_rel_diff(y1, y2) <= kPowTol);

                std::vector<cplx> o1(n), o2(n);
                k.nonlinearity(o1.data(), x.data(), a.data(), p, n);
                ref.nonlinearity(o2.data(), x.data(), a.data(), p, n);
                CHECK(max_rel_diff(o1, o2) <= kPowTol);
            }

            y1 = x;
            y2 = x;
            k.axpy(y1.data(), cplx(0.3, -1.1), m.data(), n);
            ref.axpy(y2.data(), cplx(0.3, -1.1), m.data(), n);
            CHECK(max_rel_diff(y1, y2) <= kElementTol);
        }
    });
}

TEST_CASE("reductions agree with the scalar reference") {
    for_each_variant([](const KernelTable& k, const KernelTable& ref) {
        for (std::size_t n : kLengths) {
            CAPTURE(n);
            const auto x = random_complex(n, 101 + n);
            const auto y = random_complex(n, 103 + n);
            const auto w = random_real(n, 107 + n, 0.0, 50.0);
            close_rel(k.sum_abs2(x.data(), n), ref.sum_abs2(x.data(), n), kReduceTol);
            close_rel(k.sum_weighted_abs2(x.data(), w.data(), n),
                      ref.sum_weighted_abs2(x.data(), w.data(), n), kReduceTol);
            for (double r : {1.0, 2.0, 3.0, 10.0 / 3.0, 18.0 / 7.0, 6.0}) {
                CAPTURE(r);
                close_rel(k.sum_abs_pow(x.data(), r, n), ref.sum_abs_pow(x.data(), r, n), kReduceTol);
                close_rel(k.sum_weighted_abs_pow(x.data(), w.data(), r, n),
                          ref.sum_weighted_abs_pow(x.data(), w.data(), r, n), kReduceTol);
            }
            CHECK(k.max_abs(x.data(), n) == ref.max_abs(x.data(), n));
            const cplx a = k.inner(x.data(), y.data(), n);
            const cplx b = ref.inner(x.data(), y.data(), n);
            CHECK(std::abs(a - b) <= kReduceTol * std::max(1.0, std::abs(b)));
        }
    });
}

TEST_CASE("kernels handle zeros and large phases") {
    for_each_variant([](const KernelTable& k, const KernelTable& ref) {
        const std::size_t n = 9;
        std::vector<cplx> x(n, cplx(0.0, 0.0));
        x[3] = {1.0, -2.0};
        std::vector<double> a(n, 1.0);
        auto y1 = x, y2 = x;
        k.nonlinear_kick(y1.data(), a.data(), 0.5, 4.0 / 3.0, n);
        ref.nonlinear_kick(y2.data(), a.data(), 0.5, 4.0 / 3.0, n);
        CHECK(max_rel_diff(y1, y2) <= kPowTol);
        CHECK(k.sum_abs_pow(x.data(), 1.5, n) == doctest::Approx(ref.sum_abs_pow(x.data(), 1.5, n)));

        // Phases beyond the vector range-reduction limit fall back to libm.
        std::vector<double> k2(n, 3.0e7);
        const auto z = random_complex(n, 5);
        y1 = z;
        y2 = z;
        k.dispersion(y1.data(), k2.data(), 1.0, n);
        ref.dispersion(y2.data(), k2.data(), 1.0, n);
        CHECK(max_rel_diff(y1, y2) <= kElementTol);
    });
}

TEST_CASE("unit-modulus kernels preserve magnitude") {
    for (const KernelTable* k : scatrec::simd::available_kernels()) {
        CAPTURE(k->name);
        const std::size_t n = 257;
        const auto x = random_complex(n, 77);
        const auto a = random_real(n, 78, -1.0, 1.0);
        const auto k2 = random_real(n, 79, 0.0, 1e4);
        auto y = x;
        k->dispersion(y.data(), k2.data(), 0.37, n);
        k->nonlinear_kick(y.data(), a.data(), 0.2, 2.0, n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y[i]) == doctest::Approx(std::abs(x[i])).epsilon(1e-14));
    }
}
