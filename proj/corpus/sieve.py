def sieve(n):
    flags = []
    i = 0
    while (i <= n):
        flags.append(True)
        i = i + 1
    if (n >= 0):
        flags[0] = False
    if (n >= 1):
        flags[1] = False
    p = 2
    while (p * p <= n):
        if (flags[p]):
            q = p * p
            while (q <= n):
                flags[q] = False
                q = q + p
        p = p + 1
    primes = []
    k = 2
    while (k <= n):
        if (flags[k]):
            primes.append(k)
        k = k + 1
    return primes
