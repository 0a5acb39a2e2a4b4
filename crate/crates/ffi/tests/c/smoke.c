#include <math.h>
#include <stdio.h>
#include <string.h>

#include "wellpoised.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__,    \
                    __LINE__, #cond);                                 \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    WpContext *ctx = NULL;
    CHECK(wp_context_new(128, 1e-20, &ctx) == WP_STATUS_OK && ctx != NULL);

    double h[] = {2, 1, 1, 1, 1, 1};
    double v = 0;
    char buf[128];
    size_t needed = 0;
    CHECK(wp_eval_series(ctx, h, 6, &v, buf, sizeof buf, &needed) == WP_STATUS_OK);
    CHECK(fabs(v - 2.4041138063191885) < 1e-15);
    CHECK(strncmp(buf, "2.40411380631918857079947632302", 31) == 0);

    WpLinearForm *form = NULL;
    CHECK(wp_linear_form_new(3, 0, 1, &form) == WP_STATUS_OK);
    CHECK(wp_linear_form_json(form, buf, sizeof buf, &needed) == WP_STATUS_OK);
    CHECK(strcmp(buf, "{\"q0\":\"0\",\"zeta\":{\"3\":\"2\"}}") == 0);
    CHECK(wp_linear_form_json(form, buf, 4, &needed) == WP_STATUS_BUFFER_TOO_SMALL);
    CHECK(needed == strlen("{\"q0\":\"0\",\"zeta\":{\"3\":\"2\"}}") + 1);
    wp_linear_form_free(form);

    double bad[] = {1, 2};
    CHECK(wp_eval_series(ctx, bad, 2, &v, NULL, 0, NULL) == WP_STATUS_INVALID_ARGUMENT);
    CHECK(wp_last_error(buf, sizeof buf, &needed) == WP_STATUS_OK && needed > 1);

    size_t order = 0;
    CHECK(wp_group_order(3, true, &order) == WP_STATUS_OK && order == 1920);

    wp_context_free(ctx);
    puts("ok");
    return 0;
}
