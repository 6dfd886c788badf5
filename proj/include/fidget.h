#ifndef FIDGET_H
#define FIDGET_H

/* Public C interface of the fidget shared library.
 *
 * The library drives a pose-based infant movement screening pipeline:
 * synthetic cohort generation, histogram feature extraction, ensemble
 * training, leave-one-subject-out evaluation, per-subject prediction and
 * overlay rendering.  All state lives behind the opaque fidget_pipeline
 * handle; every call returns a status code and leaves a human-readable
 * message in thread-local storage on failure.
 */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define FIDGET_API __declspec(dllexport)
#else
#define FIDGET_API __attribute__((visibility("default")))
#endif

typedef enum fidget_status {
  FIDGET_OK = 0,
  FIDGET_ERR_INVALID_ARGUMENT = 1,
  FIDGET_ERR_IO = 2,
  FIDGET_ERR_PARSE = 3,
  FIDGET_ERR_SCHEMA = 4,
  FIDGET_ERR_JOINT_MISMATCH = 5,
  FIDGET_ERR_DEGENERATE_SCALE = 6,
  FIDGET_ERR_TOO_SHORT = 7,
  FIDGET_ERR_SINGLE_CLASS = 8,
  FIDGET_ERR_EMPTY_DATASET = 9,
  FIDGET_ERR_DIMENSION_MISMATCH = 10,
  FIDGET_ERR_TOO_FEW_SUBJECTS = 11,
  FIDGET_ERR_MISSING_PART = 12,
  FIDGET_ERR_EMPTY_MASK = 13,
  FIDGET_ERR_EMPTY_INPUT = 14,
  FIDGET_ERR_INVALID_PROFILE = 15,
  FIDGET_ERR_DEGENERATE_CLUSTER = 16,
  FIDGET_ERR_INTERNAL = 17
} fidget_status;

typedef struct fidget_pipeline fidget_pipeline;

/* Inputs of the overlay rendering stage.  masks_dir may be NULL to use the
 * geometric capsule fallback derived from the skeleton. */
typedef struct fidget_visualize_args {
  const char* pose_path;    /* keypoint JSON of the subject */
  const char* frames_dir;   /* directory of input PNG frames */
  const char* masks_dir;    /* optional per-frame segmentation masks */
  const char* segments_csv; /* per-(part, segment) prediction CSV */
} fidget_visualize_args;

FIDGET_API const char* fidget_version(void);

/* Stable identifier of a status code, e.g. "SingleClass". */
FIDGET_API const char* fidget_status_name(fidget_status status);

/* Message of the last failure on the calling thread; empty string if none. */
FIDGET_API const char* fidget_last_error(void);

FIDGET_API fidget_status fidget_pipeline_create(const char* config_path,
                                                fidget_pipeline** out);
FIDGET_API void fidget_pipeline_destroy(fidget_pipeline* pipeline);

FIDGET_API fidget_status fidget_pipeline_set_seed(fidget_pipeline* pipeline,
                                                  uint64_t seed);
FIDGET_API fidget_status fidget_pipeline_set_jobs(fidget_pipeline* pipeline,
                                                  int32_t jobs);
/* Redirects the next run_* call's output directory. */
FIDGET_API fidget_status fidget_pipeline_set_out_dir(fidget_pipeline* pipeline,
                                                     const char* dir);

FIDGET_API fidget_status fidget_pipeline_run_synth(fidget_pipeline* pipeline);
FIDGET_API fidget_status fidget_pipeline_run_extract(fidget_pipeline* pipeline);
FIDGET_API fidget_status fidget_pipeline_run_train(fidget_pipeline* pipeline);
FIDGET_API fidget_status fidget_pipeline_run_eval(fidget_pipeline* pipeline);
FIDGET_API fidget_status fidget_pipeline_run_predict(fidget_pipeline* pipeline,
                                                     const char* keypoints_path);
FIDGET_API fidget_status fidget_pipeline_run_visualize(
    fidget_pipeline* pipeline, const fidget_visualize_args* args);

/* JSON summary of the most recent successful stage; valid until the next
 * run_* call or destroy.  NULL if no stage has run. */
FIDGET_API const char* fidget_pipeline_result_json(const fidget_pipeline* pipeline);

#ifdef __cplusplus
}
#endif

#endif /* FIDGET_H */
