# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot kernels.

Mirrors ``fairform._kernels.pure`` exactly, including the splitmix64
generator and the per-trial partial Fisher-Yates draw, so both backends
produce bit-identical results on identical inputs.
"""

from libc.stdlib cimport free, malloc

ctypedef unsigned long long u64

cdef u64 GOLDEN = 0x9E3779B97F4A7C15ULL


cdef inline u64 splitmix64(u64* state) nogil:
    state[0] += GOLDEN
    cdef u64 z = state[0]
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline u64 trial_state(u64 seed, u64 trial) nogil:
    cdef u64 s = seed ^ (trial * GOLDEN)
    return splitmix64(&s)


def max_subset_score(scores, int n):
    """Exhaustive maximum total score over all n-subsets of ``scores``."""
    cdef const long long[::1] sc = scores
    cdef int size = sc.shape[0]
    if n <= 0:
        return 0
    if n > size:
        n = size

    cdef int* comb = <int*> malloc(n * sizeof(int))
    if comb == NULL:
        raise MemoryError()
    cdef int i, j
    cdef long long total, best
    try:
        for i in range(n):
            comb[i] = i
        best = 0
        for i in range(n):
            best += sc[comb[i]]
        while True:
            total = 0
            for i in range(n):
                total += sc[comb[i]]
            if total > best:
                best = total
            # advance to the next combination in lexicographic order
            i = n - 1
            while i >= 0 and comb[i] == i + size - n:
                i -= 1
            if i < 0:
                break
            comb[i] += 1
            for j in range(i + 1, n):
                comb[j] = comb[j - 1] + 1
        return best
    finally:
        free(comb)


def rsa_trial_totals(
    const unsigned char[::1] flags,
    int n_candidates,
    int n_groups,
    h_index,
    int n,
    int trials,
    unsigned long long seed,
):
    """Accumulate group-flag counts and h-index totals over repeated
    uniform n-subsets; see the pure backend for the full contract."""
    cdef const long long[::1] h = h_index
    if n > n_candidates:
        n = n_candidates

    cdef long long* counts = <long long*> malloc(n_groups * sizeof(long long))
    cdef int* idx = <int*> malloc(n_candidates * sizeof(int))
    if counts == NULL or idx == NULL:
        free(counts)
        free(idx)
        raise MemoryError()

    cdef long long h_total = 0
    cdef u64 state, r
    cdef int trial, i, j, g, member, tmp, base
    try:
        for g in range(n_groups):
            counts[g] = 0
        with nogil:
            for trial in range(trials):
                state = trial_state(seed, <u64> trial)
                for i in range(n_candidates):
                    idx[i] = i
                for i in range(n):
                    r = splitmix64(&state)
                    j = i + <int> (r % <u64> (n_candidates - i))
                    tmp = idx[i]
                    idx[i] = idx[j]
                    idx[j] = tmp
                    member = idx[i]
                    h_total += h[member]
                    base = member * n_groups
                    for g in range(n_groups):
                        counts[g] += flags[base + g]
        return [counts[g] for g in range(n_groups)], h_total
    finally:
        free(counts)
        free(idx)
