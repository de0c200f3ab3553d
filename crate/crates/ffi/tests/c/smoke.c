#include <stdio.h>
#include <string.h>

#include "casediff.h"

static const char *CONFIG =
    "[population]\n"
    "groups = [{ size = 2, aspiration = 95 }, { size = 8, aspiration = 50 }]\n"
    "[product]\nv_l = 90\nv_h = 200\ns_p = 0.5\n"
    "[network]\nkind = \"uniform\"\ns = 0.5\n";

int main(void) {
    CdInstance *inst = NULL;
    CdTrace *trace = NULL;
    size_t adopters = 0;
    uint64_t period = 0;
    char *csv = NULL;

    if (cd_instance_from_toml(CONFIG, NULL, &inst) != CD_STATUS_OK) return 1;
    if (cd_simulate(inst, 10, &trace) != CD_STATUS_OK) return 2;
    if (cd_trace_cumulative_at(trace, 3, &adopters) != CD_STATUS_OK || adopters != 10) return 3;
    if (cd_trace_adoption_period(trace, 9, &period) != CD_STATUS_OK || period != 3) return 4;
    if (cd_trace_csv(trace, &csv) != CD_STATUS_OK || strstr(csv, "3,8,10,") == NULL) return 5;
    if (cd_trace_adoption_period(trace, 10, &period) != CD_STATUS_OUT_OF_RANGE) return 6;
    if (cd_last_error() == NULL) return 7;
    printf("%s", csv);
    cd_string_free(csv);
    cd_trace_free(trace);
    cd_instance_free(inst);
    return 0;
}
