#include <stdio.h>
#include "cosmic_code.h"

int main(void) {
    CcConstants *k = cc_constants_new_default();
    double ladder[CC_LADDER_LEN];
    if (cc_boson_ladder(k, ladder, CC_LADDER_LEN) != CC_STATUS_OK) {
        fprintf(stderr, "ladder: %s\n", cc_last_error_message());
        return 1;
    }
    printf("B10 = %.6e GeV\n", ladder[CC_LADDER_LEN - 3]);

    CcReport *report = NULL;
    if (cc_scenario_run("{}", &report) != CC_STATUS_OK) {
        fprintf(stderr, "scenario: %s\n", cc_last_error_message());
        return 1;
    }
    double ratio = 0.0;
    cc_report_dark_to_baryonic(report, &ratio);
    printf("dark:baryonic = %g\n", ratio);

    cc_report_free(report);
    cc_constants_free(k);
    return 0;
}
