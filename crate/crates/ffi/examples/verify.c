/* Reads a triple system from argv[1] (JSON text) and prints its verification
 * report and decomposition summary. */
#include <stdio.h>
#include "slicerank.h"

int main(int argc, char **argv) {
    if (argc != 2) {
        fprintf(stderr, "usage: %s '<system json>'\n", argv[0]);
        return 2;
    }
    SrTripleSystem *sys = NULL;
    if (sr_system_from_json(argv[1], &sys) != SR_STATUS_OK) {
        fprintf(stderr, "error: %s\n", sr_last_error());
        return 2;
    }
    int32_t valid = 0;
    char *report = NULL;
    char *slices = NULL;
    SrStatus st = sr_verify(sys, &valid, &report);
    if (st == SR_STATUS_OK) {
        st = sr_decompose(sys, 0, &slices);
    }
    if (st != SR_STATUS_OK) {
        fprintf(stderr, "error %d: %s\n", (int)st, sr_last_error());
        sr_string_free(report);
        sr_system_free(sys);
        return 3;
    }
    printf("%s\n%s\n", report, slices);
    sr_string_free(report);
    sr_string_free(slices);
    sr_system_free(sys);
    return valid ? 0 : 1;
}
