#pragma once

namespace tcsd {

// Execution policy for the data-parallel kernels. Every parallel kernel has a
// serial twin that must produce bitwise-identical results; tests compare the
// two and the bench target times them.
enum class Exec { serial, parallel };

}  // namespace tcsd
