#pragma once

#include "wavelab/kernels.hpp"

namespace wavelab::kernels {

#ifdef WAVELAB_HAS_AVX2
// Compiled with -mavx2; only call after a CPU feature check.
const KernelTable& avx2_table_unchecked() noexcept;
#endif

}  // namespace wavelab::kernels
