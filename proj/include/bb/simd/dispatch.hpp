#pragma once

#include <string_view>
#include <vector>

namespace bb::simd {

/// Instruction-set variants for the array kernels. scalar is the reference.
enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// Compiled in and supported by the running CPU.
bool isa_available(Isa isa) noexcept;

std::vector<Isa> available_isas();

/// Best available variant, chosen once. BB_SIMD=scalar in the environment forces the reference path.
Isa active_isa() noexcept;

}  // namespace bb::simd
