#include "round/kernels.hpp"

// Non-x86 builds compile this stub instead of kernels_avx2.cpp.

namespace roundsim::kernels {

const Ops* avx2_ops() { return nullptr; }

}  // namespace roundsim::kernels
