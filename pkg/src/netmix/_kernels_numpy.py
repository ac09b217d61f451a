"""Pure-numpy Gibbs sweep kernel, the fallback backend.

Semantically identical to the jitted kernel: resample every node in order,
maintaining group sizes, group out-link totals and the target-by-group link
count matrix incrementally. Weight rows are vectorized over groups; one
pregenerated uniform per node drives the categorical draw.
"""

import numpy as np
from scipy.special import gammaln


def run_sweep(
    order,
    start,
    indptr,
    targets,
    z,
    sizes,
    out_links,
    tgc,
    n_groups,
    log_alpha,
    n_beta,
    log_int,
    logb,
    uniforms,
    logw,
):
    """One Gibbs pass over ``order[start:]``; see the numba kernel docstring."""
    n = z.shape[0]
    cap = sizes.shape[0]
    k_num = n_groups
    for pos in range(start, n):
        if k_num + 1 > cap:
            return k_num, pos
        i = order[pos]
        tg = targets[indptr[i] : indptr[i + 1]]
        d = tg.size
        k_old = z[i]

        sizes[k_old] -= 1
        out_links[k_old] -= d
        tgc[tg, k_old] -= 1  # simple graph: targets are unique
        if sizes[k_old] == 0:
            k_num -= 1
            if k_old != k_num:
                sizes[k_old] = sizes[k_num]
                out_links[k_old] = out_links[k_num]
                tgc[:, k_old] = tgc[:, k_num]
                z[z == k_num] = k_old
            sizes[k_num] = 0
            out_links[k_num] = 0
            tgc[:, k_num] = 0

        w = log_int[sizes[:k_num]].copy()
        if d:
            w += logb[tgc[tg, :k_num]].sum(axis=0)
        mnb = out_links[:k_num] + n_beta
        w -= gammaln(mnb + d) - gammaln(mnb)
        w_new = log_alpha + d * logb[0] - (gammaln(n_beta + d) - gammaln(n_beta))
        logw[:k_num] = w
        logw[k_num] = w_new

        row = logw[: k_num + 1]
        p = np.exp(row - row.max())
        cdf = np.cumsum(p)
        k_new = int(np.searchsorted(cdf, uniforms[pos] * cdf[-1], side="right"))
        if k_new > k_num:
            k_new = k_num

        z[i] = k_new
        if k_new == k_num:
            sizes[k_num] = 1
            out_links[k_num] = d
            k_num += 1
        else:
            sizes[k_new] += 1
            out_links[k_new] += d
        tgc[tg, k_new] += 1
    return k_num, n
