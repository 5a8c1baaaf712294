/* Copyright 2026 The hywf Authors.

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

     http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License. */

/* Plain C consumer of the public header. */

#include <math.h>
#include <stdio.h>

#include "hywf/hywf.h"

int main(void) {
    hywf_register *reg = NULL;
    const unsigned t = 0;
    double re[2], im[2];
    double u[3] = {1, 0, 0}, v[3] = {0, 1, 0};
    hywf_distance d;

    if (hywf_register_create(1, &reg) != HYWF_OK) {
        fprintf(stderr, "create: %s\n", hywf_last_error());
        return 1;
    }
    if (hywf_register_apply(reg, "X", &t, 1, 0.0, 0) != HYWF_OK ||
        hywf_register_amplitudes(reg, re, im, 2) != HYWF_OK) {
        fprintf(stderr, "apply: %s\n", hywf_last_error());
        hywf_register_free(reg);
        return 1;
    }
    hywf_register_free(reg);
    if (re[0] != 0.0 || re[1] != 1.0) {
        fprintf(stderr, "X|0> != |1>\n");
        return 1;
    }
    if (hywf_estimate_distance(u, v, 0, 0, &d) != HYWF_OK || fabs(d.value - sqrt(2.0)) > 1e-9) {
        fprintf(stderr, "distance mismatch\n");
        return 1;
    }
    printf("hywf %s ok\n", hywf_version());
    return 0;
}
