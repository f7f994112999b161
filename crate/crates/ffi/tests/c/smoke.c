#include <stdio.h>
#include <string.h>

#include "kframe.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "check failed line %d: %s\n", __LINE__, #cond); \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    KfDocument *doc = NULL;
    char *report = NULL;
    CHECK(kf_document_parse("field F7; rho f = (x-2)^2*(x-3); g = [x];", &doc) == KF_STATUS_OK);
    CHECK(kf_document_run(doc, false, &report) == KF_STATUS_OK);
    CHECK(strstr(report, "rho=K1 exp=5 mod=6 gen=3\n") != NULL);
    kf_string_free(report);
    kf_document_free(doc);

    size_t line = 0, col = 0;
    CHECK(kf_document_parse("field F7;\nsymbol {2 3};", &doc) == KF_STATUS_PARSE_ERROR);
    kf_last_error_position(&line, &col);
    CHECK(line == 2 && col == 11);
    CHECK(kf_last_error() != NULL);

    KfField *k = NULL;
    uint64_t g = 0, e = 0, v = 0;
    CHECK(kf_field_open("F7", &k) == KF_STATUS_OK);
    CHECK(kf_field_order(k) == 7);
    CHECK(kf_field_generator(k, &g) == KF_STATUS_OK && g == 3);
    CHECK(kf_field_log(k, 5, &e) == KF_STATUS_OK && e == 5);
    CHECK(kf_field_arith(k, KF_OP_MUL, 4, 3, &v) == KF_STATUS_OK && v == 5);
    CHECK(kf_field_arith(k, KF_OP_DIV, 1, 0, &v) == KF_STATUS_INVALID_ARGUMENT);
    kf_field_free(k);

    printf("ok %s\n", kf_version());
    return 0;
}
