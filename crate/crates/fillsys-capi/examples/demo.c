/* Minimal consumer of the fillsys C API: canonicalize a word, inspect its
 * boundary data, and run the genus-2 verification.
 *
 * Build (from the repository root, after `cargo build -p fillsys-capi`):
 *   cc crates/fillsys-capi/examples/demo.c \
 *      -Icrates/fillsys-capi/include \
 *      target/debug/libfillsys_capi.a -lpthread -ldl -lm -o demo
 */
#include <stdio.h>
#include <stdlib.h>

#include "fillsys.h"

static void die(const char *where) {
    char *msg = fs_last_error_message();
    fprintf(stderr, "%s: %s\n", where, msg);
    fs_string_free(msg);
    exit(1);
}

int main(void) {
    FsWord *word = NULL;
    if (fs_word_parse("2 1 2 1", &word) != FS_STATUS_OK) die("parse");

    FsWord *canon = NULL;
    int32_t sign = 0;
    bool torsion = false;
    if (fs_word_canonical(word, &canon, &sign, &torsion) != FS_STATUS_OK) die("canonical");
    char *text = fs_word_to_string(canon);
    printf("canonical %s sign %d torsion %d\n", text, sign, (int)torsion);
    fs_string_free(text);

    uint32_t cycles = 0, genus = 0, min_cycle = 0;
    if (fs_word_boundary(word, &cycles, &genus, &min_cycle) != FS_STATUS_OK) die("boundary");
    printf("cycles %u genus %u min %u\n", cycles, genus, min_cycle);

    char *report = NULL;
    if (fs_verify_paper(2, false, false, &report) != FS_STATUS_OK) die("verify");
    printf("%s", report);
    fs_string_free(report);

    fs_word_free(canon);
    fs_word_free(word);
    return 0;
}
