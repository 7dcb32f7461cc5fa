#include <stdio.h>
#include <string.h>
#include "sepgpt.h"

int main(void) {
    SepgptGameResult *g = NULL;
    SepgptStatus st = sepgpt_play(12, "sep", 0, 500, 7, &g);
    if (st != SEPGPT_STATUS_OK) {
        fprintf(stderr, "play: %s\n", sepgpt_last_error());
        return 1;
    }
    double success = sepgpt_game_success(g);
    sepgpt_game_free(g);
    if (success != 1.0) {
        return 2;
    }
    st = sepgpt_play(5, "quantum", 2, 10, 1, &g);
    if (st != SEPGPT_STATUS_UNSUPPORTED_INSTANCE || g != NULL) {
        return 3;
    }
    if (strcmp(sepgpt_status_name(st), "unsupported-instance") != 0) {
        return 4;
    }
    SepgptReport *r = NULL;
    st = sepgpt_run_suite("verify-base", 42, 100, &r);
    if (st != SEPGPT_STATUS_OK || !sepgpt_report_passed(r) || strstr(sepgpt_report_json(r), "\"suite_name\"") == NULL) {
        return 5;
    }
    sepgpt_report_free(r);
    puts("ok");
    return 0;
}
