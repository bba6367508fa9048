#include <stdio.h>
#include "predictability.h"

int main(void) {
    PredGenerator gen = {PRED_GENERATOR_KIND_MARKOV3, 3, 0.8, 0.0, 0.0, 0.0};
    PredSeries *series = NULL;
    if (pred_generate(&gen, 32768, 7, &series) != PRED_STATUS_OK) {
        fprintf(stderr, "generate: %s\n", pred_last_error());
        return 1;
    }
    PredEstimate est;
    if (pred_ber_predictability(series, 1, &est) != PRED_STATUS_OK) {
        fprintf(stderr, "ber: %s\n", pred_last_error());
        return 1;
    }
    PredStatus bad = pred_ber_predictability(series, 0, &est);
    printf("%zu %.6f %d\n", pred_series_len(series), est.point, (int)bad);
    pred_series_free(series);
    return 0;
}
