#include <math.h>
#include <stdio.h>
#include <string.h>

#include "minktrig.h"

int main(void) {
    MtContext *ctx = NULL;
    if (mt_context_new_builtin("builtin:lp:4", 256, &ctx) != MT_STATUS_OK) {
        fprintf(stderr, "new: %s\n", mt_last_error_message());
        return 1;
    }
    MtVec2 x = {1.0, 0.0};
    MtVec2 b;
    if (mt_b(ctx, x, &b) != MT_STATUS_OK || fabs(b.x) > 1e-12 || fabs(b.y - 1.0) > 1e-12) {
        return 2;
    }
    double v;
    MtVec2 y = {1.0, 1.0};
    if (mt_cn(ctx, x, y, &v) != MT_STATUS_UNSUPPORTED || strlen(mt_last_error_message()) == 0) {
        return 3;
    }
    MtRadonFlag flag;
    if (mt_radon_flag(ctx, &flag) != MT_STATUS_OK || flag != MT_RADON_FLAG_NOT_RADON) {
        return 4;
    }
    mt_context_free(ctx);
    printf("ok %s\n", mt_version());
    return 0;
}
