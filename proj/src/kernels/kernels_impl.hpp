#pragma once

#include "gradcons/kernels.hpp"

namespace gradcons::kernels::detail {

const KernelTable& avx2_table();
bool cpu_has_avx2();

}  // namespace gradcons::kernels::detail
