// Copyright 2026 The besovlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BESOVLAB_H
#define BESOVLAB_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define BL_API __declspec(dllexport)
#else
#define BL_API __attribute__((visibility("default")))
#endif

typedef enum bl_status {
  BL_OK = 0,
  BL_ERROR_DOMAIN = 1,
  BL_ERROR_CAPACITY = 2,
  BL_ERROR_STRUCTURAL = 3,
  BL_ERROR_CONFIG = 4,
  BL_ERROR_IO = 5,
  BL_ERROR_INVALID_ARGUMENT = 6,
  BL_ERROR_INTERNAL = 7
} bl_status;

typedef struct bl_function bl_function;
typedef struct bl_run_result bl_run_result;

/* Library version, "major.minor.patch". */
BL_API const char* bl_version(void);

/* Message of the last failed call on this thread; empty after a successful call. */
BL_API const char* bl_last_error(void);

/* Grid function from samples in row-major order (last axis fastest). im may be NULL.
   weights may be NULL for the isotropic case. */
BL_API bl_status bl_function_create(size_t dim, const size_t* points, int base_scale, const double* weights,
                                    const double* re, const double* im, bl_function** out);
BL_API bl_status bl_function_read(const char* path, bl_function** out);
BL_API bl_status bl_function_write(const bl_function* f, const char* path);
BL_API void bl_function_destroy(bl_function* f);

BL_API size_t bl_function_dim(const bl_function* f);
BL_API size_t bl_function_size(const bl_function* f);
/* Copies min(capacity, dim) axis lengths. */
BL_API bl_status bl_function_points(const bl_function* f, size_t* points, size_t capacity);
/* Copies `count` samples (must equal bl_function_size); im may be NULL. */
BL_API bl_status bl_function_samples(const bl_function* f, double* re, double* im, size_t count);

/* Quasi-norm of f with the partition of its grid and anisotropy. scale is "B", "F" or "A";
   p and q may be HUGE_VAL for infinity; levels < 0 selects the largest admissible J. */
BL_API bl_status bl_quasinorm(const bl_function* f, const char* scale, double s, double p, double q, int levels,
                              double* out);

/* Trace on the hyperplane x_n = 0; the result carries the tangential weights. */
BL_API bl_status bl_trace(const bl_function* f, bl_function** out);

/* JSON text of base with overrides merged in; free with bl_string_free. Either may be NULL. */
BL_API bl_status bl_config_merge(const char* base, const char* overrides, char** merged);
BL_API void bl_string_free(char* s);

/* Validates and runs a JSON configuration. Configuration errors still produce a result
   (exit code 2); only invalid arguments or allocation failures return an error status. */
BL_API bl_status bl_run_config(const char* json_text, bl_run_result** out);
BL_API int bl_run_result_exit_code(const bl_run_result* r);
BL_API const char* bl_run_result_message(const bl_run_result* r);
BL_API size_t bl_run_result_artifact_count(const bl_run_result* r);
BL_API const char* bl_run_result_artifact(const bl_run_result* r, size_t index);
BL_API void bl_run_result_destroy(bl_run_result* r);

#ifdef __cplusplus
}
#endif

#endif
