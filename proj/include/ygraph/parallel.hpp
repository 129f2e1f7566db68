#pragma once

namespace ygraph {

/// Thread budget for OpenMP kernels. Reads YGRAPH_THREADS once; an explicit
/// set_max_threads() overrides it.
int max_threads();
void set_max_threads(int n);

} // namespace ygraph
