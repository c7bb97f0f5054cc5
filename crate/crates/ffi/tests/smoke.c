#include <math.h>
#include <stdio.h>
#include "so4top.h"

int main(void) {
    const double lambda[4] = {4.0, 3.0, 2.0, 1.0};
    So4Body *body = NULL;
    if (so4_body_new(lambda, &body) != SO4_STATUS_OK) {
        fprintf(stderr, "%s\n", so4_last_error());
        return 1;
    }
    So4Classification c;
    if (so4_classify_cartan(body, 5.0, 3.0, SO4_FAMILY_T2, SO4_WEYL_LABEL_AB, &c) != SO4_STATUS_OK) {
        return 2;
    }
    if (c.williamson != SO4_WILLIAMSON_CENTER_SADDLE || c.orbit_verdict != SO4_VERDICT_UNSTABLE) {
        return 3;
    }
    const double bad[4] = {1.0, 2.0, 3.0, 4.0};
    So4Body *other = NULL;
    if (so4_body_new(bad, &other) != SO4_STATUS_INVALID_SPECTRUM || other != NULL) {
        return 4;
    }
    So4Frontiers f;
    so4_frontiers(body, &f);
    if (fabs(f.s1 - 0.6203860432772557) > 1e-12) {
        return 5;
    }
    so4_body_free(body);
    printf("ok %s\n", so4_version());
    return 0;
}
