#pragma once

namespace crossimpact {

/// Caps the OpenMP team size used by the parallel kernels. n <= 0 restores
/// the default (all available cores).
void set_thread_count(int n);
int thread_count();

}  // namespace crossimpact
