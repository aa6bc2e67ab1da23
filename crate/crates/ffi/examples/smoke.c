/* cc -I crates/ffi/include crates/ffi/examples/smoke.c target/debug/libcas_ffi.a -lm -lpthread -ldl -o smoke */
#include <stdio.h>
#include "cas_ffi.h"

int main(void) {
    const double e2[4] = {0, 0, 1, 0}, e3[4] = {0, 0, 0, 1}, e1v[4] = {0, 1, 0, 0};
    CasPlane *p = NULL, *q = NULL;
    if (cas_plane_new(e2, e3, &p) || cas_plane_new(e3, e1v, &q)) {
        fprintf(stderr, "plane: %s\n", cas_last_error());
        return 1;
    }
    double psi1, psi2;
    cas_complex_angle(p, q, &psi1, &psi2);
    printf("psi = %.15g%+.15gi\n", psi1, psi2);

    CasGrid *g = NULL;
    if (cas_family_new("lightcone:a=0.5,b=0.3", -1, 1, -1, 1, 0.02, &g) != CAS_STATUS_OK) {
        fprintf(stderr, "family: %s\n", cas_last_error());
        return 1;
    }
    size_t failed = 0, total = 0;
    cas_verify(g, 0.0, &failed, &total);
    printf("verify: %zu of %zu checks failed\n", failed, total);

    CasStatus s = cas_family_new("lightcone:a=2", 0, 1, 0, 1, 0.1, &g);
    printf("bad spec -> status %d (%s)\n", (int)s, cas_last_error());

    cas_grid_free(g);
    cas_plane_free(p);
    cas_plane_free(q);
    return failed != 0;
}
