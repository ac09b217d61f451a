"""Numba-jitted Gibbs sweep kernel.

Array layout shared with the numpy fallback (see _kernels_numpy for the
reference semantics): ``tgc[j, k]`` holds the number of links from group k
into target j, target-major so the per-target scan over groups is contiguous.
``logb[m]`` caches log(m + beta) for integer counts, ``log_int[n]`` caches
log(n). Randomness comes in as one pregenerated uniform per node so a sweep
is a pure function of its inputs.
"""

import math

from numba import njit


@njit(cache=True)
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
    """One Gibbs pass over ``order[start:]``; resample each node's group.

    Returns (n_groups, next_pos). next_pos < len(order) means the group
    capacity was exhausted; the caller grows the arrays and re-enters with
    start=next_pos (the pending node is untouched at that point).
    """
    n = z.shape[0]
    cap = sizes.shape[0]
    k_num = n_groups
    for pos in range(start, n):
        if k_num + 1 > cap:
            return k_num, pos
        i = order[pos]
        lo = indptr[i]
        hi = indptr[i + 1]
        d = hi - lo
        k_old = z[i]

        # detach node i from its group; drop the group if emptied
        sizes[k_old] -= 1
        out_links[k_old] -= d
        for e in range(lo, hi):
            tgc[targets[e], k_old] -= 1
        if sizes[k_old] == 0:
            k_num -= 1
            if k_old != k_num:
                sizes[k_old] = sizes[k_num]
                out_links[k_old] = out_links[k_num]
                for j in range(n):
                    tgc[j, k_old] = tgc[j, k_num]
                for j in range(n):
                    if z[j] == k_num:
                        z[j] = k_old
            sizes[k_num] = 0
            out_links[k_num] = 0
            for j in range(n):
                tgc[j, k_num] = 0

        # unnormalized log weights: existing groups then one new-group slot
        for k in range(k_num):
            logw[k] = log_int[sizes[k]]
        logw[k_num] = log_alpha + d * logb[0]
        for e in range(lo, hi):
            t = targets[e]
            for k in range(k_num):
                logw[k] += logb[tgc[t, k]]
        for k in range(k_num):
            mnb = out_links[k] + n_beta
            logw[k] -= math.lgamma(mnb + d) - math.lgamma(mnb)
        logw[k_num] -= math.lgamma(n_beta + d) - math.lgamma(n_beta)

        # categorical draw from one pregenerated uniform
        mx = logw[0]
        for k in range(1, k_num + 1):
            if logw[k] > mx:
                mx = logw[k]
        tot = 0.0
        for k in range(k_num + 1):
            logw[k] = math.exp(logw[k] - mx)
            tot += logw[k]
        u = uniforms[pos] * tot
        k_new = k_num
        acc = 0.0
        for k in range(k_num + 1):
            acc += logw[k]
            if u < acc:
                k_new = k
                break

        # attach node i to the drawn group
        z[i] = k_new
        if k_new == k_num:
            sizes[k_num] = 1
            out_links[k_num] = d
            k_num += 1
        else:
            sizes[k_new] += 1
            out_links[k_new] += d
        for e in range(lo, hi):
            tgc[targets[e], k_new] += 1
    return k_num, n
