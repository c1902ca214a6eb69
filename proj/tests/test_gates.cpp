#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "compfs/gates.hpp"
#include "compfs/rng.hpp"
#include "compfs/tensor.hpp"

using namespace compfs;

namespace {

double logit(double x) { return std::log(x / (1.0 - x)); }

// One relaxed draw through the production graph ops.
double relaxed(double pi, double u, double tau) {
    GateBank g(1, 1, tau, 0.7);
    g.alpha(0)->value = {logit(pi)};
    Tensor noise = constant(1, 1, {logit(u)});
    return g.relaxed_mask(0, noise)->value[0];
}

}  // namespace

TEST_CASE("constructor validation") {
    CHECK_THROWS(GateBank(1, 4, 0.0, 0.7));
    CHECK_THROWS(GateBank(1, 4, -1.0, 0.7));
    CHECK_THROWS(GateBank(1, 4, 0.1, 1.5));
    CHECK_THROWS(GateBank(1, 4, 0.1, -0.1));
}

TEST_CASE("relaxed sample worked values") {
    CHECK(relaxed(0.5, 0.5, 0.1) == doctest::Approx(0.5));
    CHECK(relaxed(0.5, 0.5, 1.0) == doctest::Approx(0.5));
    CHECK(relaxed(0.5, 0.5, 7.0) == doctest::Approx(0.5));
    // pi=0.9, u=0.5, tau=0.1: sigmoid(logit(0.9)/0.1) = sigmoid(21.972...)
    const double m = relaxed(0.9, 0.5, 0.1);
    CHECK(1.0 - m == doctest::Approx(2.87e-10).epsilon(0.05));
    // tau=1 with pi=0.5 reduces to u itself.
    CHECK(relaxed(0.5, 0.9, 1.0) == doctest::Approx(0.9));
    CHECK(relaxed(0.5, 0.123, 1.0) == doctest::Approx(0.123));
}

TEST_CASE("relaxed sample is increasing in pi for fixed noise") {
    double prev = 0.0;
    for (double pi : {0.05, 0.2, 0.4, 0.6, 0.8, 0.95}) {
        const double m = relaxed(pi, 0.3, 0.5);
        CHECK(m > prev);
        prev = m;
    }
}

TEST_CASE("temperature to zero binarizes away from the switching point") {
    for (double pi : {0.2, 0.6, 0.9}) {
        for (double u : {0.1, 0.4, 0.7, 0.95}) {
            if (std::abs(logit(pi) + logit(u)) < 1e-3) continue;
            const double want = logit(pi) + logit(u) > 0.0 ? 1.0 : 0.0;
            CHECK(relaxed(pi, u, 1e-4) == doctest::Approx(want).epsilon(1e-6));
            CHECK(relaxed(pi, u, 1e-6) == doctest::Approx(want).epsilon(1e-8));
        }
    }
}

TEST_CASE("P(sample > 1/2) equals pi at any temperature") {
    // The median-threshold identity: m > 1/2 iff logit(pi) + logit(u) > 0
    // iff u > 1 - pi, an event of probability exactly pi.
    Rng rng(31, Rng::kGateNoise);
    for (double tau : {1.0, 0.1}) {
        for (double pi : {0.25, 0.7}) {
            GateBank g(1, 1, tau, 0.7);
            g.alpha(0)->value = {logit(pi)};
            long over = 0;
            const long n = 100000;
            Tensor noise = sample_gate_noise(rng, n, 1);
            Tensor m = g.relaxed_mask(0, noise);
            for (long i = 0; i < n; ++i)
                over += m->value[static_cast<std::size_t>(i)] > 0.5 ? 1 : 0;
            CHECK(static_cast<double>(over) / static_cast<double>(n) ==
                  doctest::Approx(pi).epsilon(0.015));
        }
    }
}

TEST_CASE("gate noise is clamped, finite, and deterministic") {
    Rng a(5, Rng::kGateNoise), b(5, Rng::kGateNoise);
    Tensor na = sample_gate_noise(a, 50, 20);
    Tensor nb = sample_gate_noise(b, 50, 20);
    CHECK(na->value == nb->value);
    const double lo = logit(1e-7), hi = logit(1.0 - 1e-7);
    for (double v : na->value) {
        CHECK(std::isfinite(v));
        CHECK(v >= lo);
        CHECK(v <= hi);
    }
}

TEST_CASE("mean imputation worked values") {
    Tensor x = constant(1, 2, {2.0, 4.0});
    Tensor xbar = constant(1, 2, {0.0, 0.0});
    Tensor m = constant(1, 2, {0.5, 1.0});
    CHECK(impute_gate(x, m, xbar)->value == std::vector<double>{1.0, 4.0});

    // Nonzero means: closed gate must land on xbar, open gate on x.
    Tensor xbar2 = constant(1, 2, {10.0, -3.0});
    Tensor ones = constant(1, 2, {1.0, 1.0});
    Tensor zeros = constant(1, 2, {0.0, 0.0});
    CHECK(impute_gate(x, ones, xbar2)->value == std::vector<double>{2.0, 4.0});
    CHECK(impute_gate(x, zeros, xbar2)->value == std::vector<double>{10.0, -3.0});

    // Row-mask evaluation path agrees.
    Tensor xb = constant(2, 2, {2, 4, 6, 8});
    Tensor rmask = constant(1, 2, {1.0, 0.0});
    CHECK(impute_gate_row(xb, rmask, xbar2)->value ==
          std::vector<double>{2.0, -3.0, 6.0, -3.0});
}

TEST_CASE("hard selection thresholds strictly") {
    GateBank g(1, 3, 0.1, 0.7);
    g.alpha(0)->value = {logit(0.9), 0.0, logit(0.71)};
    CHECK(g.selected(0) == std::vector<int>{0, 2});
    CHECK(g.hard_mask(0) == std::vector<double>{1.0, 0.0, 1.0});

    // sigma(0) = 0.5 exactly; strict comparison excludes the boundary.
    GateBank h(1, 2, 0.1, 0.5);
    h.alpha(0)->value = {0.0, 0.2};
    CHECK(h.selected(0) == std::vector<int>{1});

    GateBank all_half(1, 4, 0.1, 0.7);
    all_half.alpha(0)->value = {0.0, 0.0, 0.0, 0.0};
    CHECK(all_half.selected(0).empty());
}

TEST_CASE("relaxed mask gradient matches finite differences") {
    const long p = 6;
    GateBank g(1, p, 0.3, 0.7);
    Rng rng(17, Rng::kInit);
    std::vector<double> a0(p);
    for (auto& v : a0) v = rng.uniform(-1.0, 1.0);
    Rng noise_rng(18, Rng::kGateNoise);
    Tensor noise = sample_gate_noise(noise_rng, 4, p);

    auto loss_with = [&](const std::vector<double>& av) {
        GateBank gg(1, p, 0.3, 0.7);
        gg.alpha(0)->value = av;
        return sum_all(square(gg.relaxed_mask(0, noise)));
    };

    g.alpha(0)->value = a0;
    Tensor loss = sum_all(square(g.relaxed_mask(0, noise)));
    backward(loss);
    const double h = 1e-6;
    for (long k = 0; k < p; ++k) {
        auto plus = a0, minus = a0;
        plus[static_cast<std::size_t>(k)] += h;
        minus[static_cast<std::size_t>(k)] -= h;
        const double fd =
            (loss_with(plus)->scalar() - loss_with(minus)->scalar()) / (2 * h);
        CHECK(g.alpha(0)->grad[static_cast<std::size_t>(k)] ==
              doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("noise width must match p") {
    GateBank g(1, 4, 0.1, 0.7);
    Tensor bad = constant(2, 3, {0, 0, 0, 0, 0, 0});
    CHECK_THROWS(g.relaxed_mask(0, bad));
}
