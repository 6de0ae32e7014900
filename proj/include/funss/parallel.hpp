#pragma once

namespace funss::parallel {

/// Number of worker threads the OpenMP kernels may use. Defaults to the
/// hardware count, capped by the FUNSS_THREADS environment variable when set.
int thread_count();

/// Override the worker count (1 = serial execution everywhere).
void set_thread_count(int n);

/// Re-read FUNSS_THREADS; called once from the CLI entry points.
void init_from_env();

}  // namespace funss::parallel
