#include "round/kernels.hpp"

#include <cstdlib>
#include <cstring>

#include "round/errors.hpp"

namespace roundsim::kernels {
namespace {

struct Dispatch {
    const Ops* ops;
    Impl impl;
};

Dispatch resolve(Impl impl) {
    switch (impl) {
        case Impl::Scalar:
            return {&scalar_ops(), Impl::Scalar};
        case Impl::Avx2: {
            const Ops* a = avx2_ops();
            if (a == nullptr) {
                throw InvalidParameter("AVX2 kernels are not available on this CPU");
            }
            return {a, Impl::Avx2};
        }
        case Impl::Auto:
        default: {
            const Ops* a = avx2_ops();
            return a != nullptr ? Dispatch{a, Impl::Avx2} : Dispatch{&scalar_ops(), Impl::Scalar};
        }
    }
}

Impl initial_impl() {
    const char* env = std::getenv("ROUND_SIMD");
    if (env == nullptr || std::strcmp(env, "auto") == 0) {
        return Impl::Auto;
    }
    if (std::strcmp(env, "scalar") == 0) {
        return Impl::Scalar;
    }
    if (std::strcmp(env, "avx2") == 0) {
        return Impl::Avx2;
    }
    throw InvalidParameter(std::string("unknown ROUND_SIMD value: ") + env);
}

Dispatch& current() {
    static Dispatch d = resolve(initial_impl());
    return d;
}

}  // namespace

const Ops& active() { return *current().ops; }

void select(Impl impl) { current() = resolve(impl); }

Impl selected() { return current().impl; }

}  // namespace roundsim::kernels
