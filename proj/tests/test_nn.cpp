#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "compfs/nn.hpp"

using namespace compfs;

namespace {

// Scalar reference Adam, written independently of the production class.
struct RefAdam {
    double m = 0, v = 0, w;
    long t = 0;
    double lr, b1 = 0.9, b2 = 0.999, eps = 1e-8;
    RefAdam(double w0, double lr_) : w(w0), lr(lr_) {}
    void step(double g) {
        ++t;
        m = b1 * m + (1 - b1) * g;
        v = b2 * v + (1 - b2) * g * g;
        const double mhat = m / (1 - std::pow(b1, t));
        const double vhat = v / (1 - std::pow(b2, t));
        w -= lr * mhat / (std::sqrt(vhat) + eps);
    }
};

}  // namespace

TEST_CASE("linear layer shapes, init bounds, forward") {
    Rng rng(1, Rng::kInit);
    Linear lin(4, 3, "t");
    lin.init(rng);
    CHECK(lin.W->rows == 4);
    CHECK(lin.W->cols == 3);
    CHECK(lin.b->rows == 1);
    CHECK(lin.b->cols == 3);
    const double bound = std::sqrt(6.0 / 4.0);
    for (double w : lin.W->value) {
        CHECK(w >= -bound);
        CHECK(w < bound);
    }
    for (double b : lin.b->value) CHECK(b == 0.0);

    // y = x W + b against a hand multiplication.
    lin.W->value = {1, 0, 2, 0, 1, 0, 1, 1, 0, 0, 0, 3};
    lin.b->value = {0.5, -0.5, 0.0};
    Tensor x = constant(1, 4, {1, 2, 3, 4});
    auto y = lin.forward(x)->value;
    CHECK(y[0] == doctest::Approx(1 * 1 + 2 * 0 + 3 * 1 + 4 * 0 + 0.5));
    CHECK(y[1] == doctest::Approx(1 * 0 + 2 * 1 + 3 * 1 + 4 * 0 - 0.5));
    CHECK(y[2] == doctest::Approx(1 * 2 + 2 * 0 + 3 * 0 + 4 * 3 + 0.0));
}

TEST_CASE("adam single step matches closed form") {
    Tensor w = parameter(1, 1, "w");
    w->value = {0.0};
    Adam opt({w}, 0.1);
    w->ensure_grad();
    w->grad[0] = 1.0;
    opt.step();
    // First step: mhat = g, vhat = g^2, so the update is lr * g/(|g|+eps).
    CHECK(w->value[0] == doctest::Approx(-0.1).epsilon(1e-6));
    CHECK(opt.steps_taken() == 1);
}

TEST_CASE("adam trajectory matches reference over varying gradients") {
    Tensor w = parameter(1, 1, "w");
    w->value = {0.25};
    Adam opt({w}, 0.01);
    RefAdam ref(0.25, 0.01);
    const std::vector<double> grads{1.0, -2.0, 0.5, 0.0, 3.0, -0.25, 10.0, 1e-3};
    for (double g : grads) {
        w->ensure_grad();
        w->grad[0] = g;
        opt.step();
        ref.step(g);
        CHECK(w->value[0] == doctest::Approx(ref.w).epsilon(1e-12));
    }
}

TEST_CASE("adam moves lr per step under any constant gradient scale") {
    // Scale invariance: a constant-sign gradient of any magnitude walks the
    // parameter at one learning rate per step once bias correction settles.
    for (double g : {1e-3, 1.0, 1e3}) {
        Tensor w = parameter(1, 1, "w");
        w->value = {0.0};
        Adam opt({w}, 0.05);
        for (int i = 0; i < 100; ++i) {
            w->ensure_grad();
            w->grad[0] = g;
            opt.step();
        }
        CHECK(w->value[0] == doctest::Approx(-100 * 0.05).epsilon(1e-4));
    }
}

TEST_CASE("adam zeroes gradients after stepping and honors set_lr") {
    Tensor w = parameter(1, 2, "w");
    w->value = {1.0, 2.0};
    Adam opt({w}, 0.1);
    w->ensure_grad();
    w->grad = {1.0, -1.0};
    opt.step();
    CHECK(w->grad[0] == 0.0);
    CHECK(w->grad[1] == 0.0);
    opt.set_lr(0.001);
    CHECK(opt.lr() == doctest::Approx(0.001));
}

TEST_CASE("adam converges on a quadratic") {
    Tensor w = parameter(1, 1, "w");
    w->value = {5.0};
    Adam opt({w}, 0.1);
    for (int i = 0; i < 2000; ++i) {
        w->ensure_grad();
        w->grad[0] = 2.0 * (w->value[0] - 3.0);  // d/dw (w-3)^2
        opt.step();
    }
    CHECK(w->value[0] == doctest::Approx(3.0).epsilon(1e-3));
}
