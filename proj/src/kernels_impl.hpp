#pragma once

#include "pald/kernels.hpp"

namespace pald::kernels::detail {

const KernelTable& scalar_kernels() noexcept;
#if defined(PALD_HAVE_AVX2)
const KernelTable& avx2_kernels() noexcept;
#endif

}  // namespace pald::kernels::detail
