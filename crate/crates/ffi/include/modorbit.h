#ifndef MODORBIT_H
#define MODORBIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MoStatus {
  MO_STATUS_OK = 0,
  MO_STATUS_NULL_POINTER = 1,
  MO_STATUS_INVALID_UTF8 = 2,
  MO_STATUS_PARSE = 3,
  MO_STATUS_INVALID_ARGUMENT = 4,
  MO_STATUS_INDETERMINATE = 5,
  MO_STATUS_FINITE_ORBIT = 6,
  MO_STATUS_DIMENSION_MISMATCH = 7,
  MO_STATUS_IO = 8,
  MO_STATUS_OUT_OF_RANGE = 9,
  MO_STATUS_PANIC = 10,
} MoStatus;

typedef enum MoConvention {
  MO_CONVENTION_ORBIT = 0,
  MO_CONVENTION_CYCLE = 1,
} MoConvention;

/**
 * Orbit sizes modulo every prime up to a limit.
 */
typedef struct MoCensus MoCensus;

/**
 * A parsed morphism of projective space.
 */
typedef struct MoMap MoMap;

typedef struct MoRecord {
  uint64_t p;
  uint64_t tail;
  uint64_t cycle;
  /**
   * Nonzero when the orbit size is infinite; `tail` and `cycle` are then 0.
   */
  int32_t bad;
} MoRecord;

typedef struct MoRhoSample {
  uint64_t n;
  uint64_t trials;
  uint64_t seed;
  double mean_tail;
  double mean_cycle;
  double mean_rho;
} MoRhoSample;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. Valid until the next
 * failing call on the same thread; never null.
 */
const char *mo_last_error(void);

/**
 * Library version as a static string.
 */
const char *mo_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void mo_string_free(char *s);

/**
 * Parses a map such as `"z^2+1"` or a `map PN` block.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum MoStatus mo_map_parse(const char *text, struct MoMap **out);

/**
 * # Safety
 * `map` must be null or a handle from [`mo_map_parse`], freed once.
 */
void mo_map_free(struct MoMap *map);

/**
 * Display form of the map; free with [`mo_string_free`].
 *
 * # Safety
 * `map` must be a live handle.
 */
char *mo_map_to_string(const struct MoMap *map);

/**
 * Orbit census of `start` (e.g. `"0"`, `"1/2"`, `"[1,0]"`) for primes up to
 * `limit`. `jobs = 0` uses the default thread pool.
 *
 * # Safety
 * `map` must be a live handle, `start` a NUL-terminated string and `out` valid.
 */
enum MoStatus mo_census_compute(const struct MoMap *map,
                                const char *start,
                                uint64_t limit,
                                uint32_t jobs,
                                struct MoCensus **out);

/**
 * Reads a census from CSV text with header `p,s,r,m,bad`. `limit = 0` takes
 * the largest prime as the limit.
 *
 * # Safety
 * `csv` must be a NUL-terminated string and `out` valid.
 */
enum MoStatus mo_census_from_csv(const char *csv, uint64_t limit, struct MoCensus **out);

/**
 * # Safety
 * `census` must be null or a census handle, freed once.
 */
void mo_census_free(struct MoCensus *census);

/**
 * Number of primes in the census; 0 for a null handle.
 *
 * # Safety
 * `census` must be null or a live handle.
 */
size_t mo_census_len(const struct MoCensus *census);

/**
 * # Safety
 * `census` must be a live handle and `out` valid.
 */
enum MoStatus mo_census_record(const struct MoCensus *census, size_t index, struct MoRecord *out);

/**
 * Selects which orbit size the statistics below use.
 *
 * # Safety
 * `census` must be a live handle.
 */
enum MoStatus mo_census_set_convention(struct MoCensus *census, enum MoConvention convention);

/**
 * CSV form of the census; free with [`mo_string_free`].
 *
 * # Safety
 * `census` must be a live handle.
 */
char *mo_census_to_csv(const struct MoCensus *census);

/**
 * `(1/log X) sum_{p <= X} log p / m_p^exponent`.
 *
 * # Safety
 * `census` must be a live handle and `out` valid.
 */
enum MoStatus mo_table_statistic(const struct MoCensus *census, double exponent, double *out);

/**
 * Weighted mass of primes with `m_p >= (log p)^gamma`.
 *
 * # Safety
 * `census` must be a live handle and `out` valid.
 */
enum MoStatus mo_density_gamma(const struct MoCensus *census, double gamma, double *out);

/**
 * Weighted mass of primes with `m_p >= eps log p`.
 *
 * # Safety
 * `census` must be a live handle and `out` valid.
 */
enum MoStatus mo_density_eps(const struct MoCensus *census, double eps, double *out);

/**
 * `S(lambda, s) = sum_{p <= X} (log p / p) exp(-s m_p^lambda)`.
 *
 * # Safety
 * `census` must be a live handle and `out` valid.
 */
enum MoStatus mo_s_partial(const struct MoCensus *census, double lambda, double s, double *out);

/**
 * Mean tail, cycle and rho length of `trials` random self-maps of an
 * `n`-element set.
 *
 * # Safety
 * `out` must be valid.
 */
enum MoStatus mo_sample_rho(uint64_t n, uint64_t trials, uint64_t seed, struct MoRhoSample *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MODORBIT_H */
