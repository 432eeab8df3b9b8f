#ifndef FLOWCAT_KERNELS_HPP
#define FLOWCAT_KERNELS_HPP

#include "flowcat/corner_model.hpp"
#include "flowcat/degeneration_geom.hpp"
#include "flowcat/linalg.hpp"
#include "flowcat/morse.hpp"

namespace flowcat {

// FLOWCAT_THREADS if set to a positive integer, else the OpenMP default.
int thread_count();

// Parallel counterparts of serial reference routines; results are identical.
IntMatrix multiply_parallel(const IntMatrix& a, const IntMatrix& b);            // reference: operator*
IntMatrix morse_differential_parallel(const SimplicialComplex& K, const Matching& V);  // reference: morse_differential_flow
CornerReport is_corner_model_parallel(const CornerCategory& C);                 // reference: is_corner_model
long conic_sample_parallel(int max_n, long count, std::uint64_t seed);          // reference: conic_sample_serial

}  // namespace flowcat

#endif
