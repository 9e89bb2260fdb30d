"""Independent reference values frozen into the C++ tests.

Plain Python, no shared code with the library. Run to reprint every value;
paste changes into the tests only after checking them by hand.
"""
import math
import struct
from fractions import Fraction

MASK = (1 << 64) - 1


def splitmix64(state):
    state = (state + 0x9E3779B97F4A7C15) & MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return state, z ^ (z >> 31)


def rotl(x, k):
    return ((x << k) | (x >> (64 - k))) & MASK


def xoshiro(seed, count):
    s, st = [], seed
    for _ in range(4):
        st, v = splitmix64(st)
        s.append(v)
    out = []
    for _ in range(count):
        out.append((rotl((s[1] * 5) & MASK, 7) * 9) & MASK)
        t = (s[1] << 17) & MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = rotl(s[3], 45)
    return out


def lru(trace, size):
    cache, hits = [], 0
    for r in trace:
        if r in cache:
            hits += 1
            cache.remove(r)
        elif len(cache) == size:
            cache.pop()
        cache.insert(0, r)
    return Fraction(hits, len(trace))


def fifo(trace, size):
    cache, hits = [], 0
    for r in trace:
        if r in cache:
            hits += 1
            continue
        if len(cache) == size:
            cache.pop(0)
        cache.append(r)
    return Fraction(hits, len(trace))


def fgen(k, spikes, eps):
    return [(1 - eps) / len(spikes) if j in spikes else eps / (k - len(spikes)) for j in range(k)]


def tmax(probs, m):
    k = len(probs)
    denom = sum((2 * i - 1) * probs[i - 1] for i in range(1, k + 1))
    return math.ceil(2 * m * k / denom - 1e-9)


def per_integer_pmf(probs, t_max):
    """Expand a stepwise spec into an explicit PMF over 1..t_max."""
    k = len(probs)
    edges = [j * t_max // k for j in range(k + 1)]
    pmf = [0.0] * (t_max + 1)
    for j in range(k):
        w = edges[j + 1] - edges[j]
        for t in range(edges[j] + 1, edges[j + 1] + 1):
            pmf[t] += probs[j] / w
    return edges, pmf


def che_by_summation(pmf, p_inf, tau):
    """C(tau) = sum_{t=1..tau} Pr(X >= t); hit = Pr(X <= tau). Brute force."""
    c = 0.0
    for t in range(1, tau + 1):
        c += p_inf + sum(pmf[t:])
    return c, sum(pmf[1:tau + 1])


if __name__ == "__main__":
    print("rng seed 42:", [hex(v) for v in xoshiro(42, 4)])
    print("rng seed 0:", [hex(v) for v in xoshiro(0, 2)])

    w = [i ** -1.2 for i in range(1, 5)]
    print("zipf(1.2) U=4 weights", w, "pmf", [x / sum(w) for x in w])
    w = [(1 / i) ** 2.5 for i in range(1, 6)]
    print("pareto(2.5,1) U=5 pmf", [x / sum(w) for x in w])
    w = [0.0, 0.0] + [(3 / i) ** 2.0 for i in range(3, 7)]
    print("pareto(2,3) U=6 pmf", [x / sum(w) for x in w])
    w = [math.exp(-0.5 * ((i - 5) / 2) ** 2) for i in range(1, 11)]
    print("normal(5,2) U=10 pmf", [x / sum(w) for x in w])

    print("fgen(20,{0,3},5e-3)", fgen(20, [0, 3], 5e-3)[:2])
    print("fgen(5,{2},5e-3)", fgen(5, [2], 5e-3))
    print("tmax fgen(5,{2}) M=1e4", tmax(fgen(5, [2], 5e-3), 10000))
    print("tmax uniform20 M=1e4", tmax([1 / 20] * 20, 10000))
    print("tmax single M=7", tmax([1.0], 7))
    for name, (k, sp, e) in {"b": (20, [0, 3], 5e-3), "c": (20, [2, 9], 5e-3), "d": (5, [0, 4], 1e-2),
                             "e": (20, [1], 5e-3), "f": (5, [2], 5e-3)}.items():
        print("tmax", name, "M=1e4", tmax(fgen(k, sp, e), 10000), "M=1e3", tmax(fgen(k, sp, e), 1000))

    # Che / AET on fgen(5,{2},5e-3) tuned for M = 10.
    probs = fgen(5, [2], 5e-3)
    t = tmax(probs, 10)
    edges, pmf = per_integer_pmf(probs, t)
    print("che fgen(5,{2}) M=10: t_max", t, "edges", edges)
    for tau in (1, 3, 8, 9, 10, 12, 15, 20):
        print("  tau", tau, "C,hit =", che_by_summation(pmf, 0.0, tau))
    # Same with a quarter of the mass at infinity.
    sw = [0.25, 0.0, 0.5, 0.0]
    p_inf = 0.25
    finite = [x / 0.75 for x in sw]
    t = tmax(finite, 10)
    edges, pmf = per_integer_pmf(sw, t)
    print("che stepwise(.25,0,.5,0;inf=.25) M=10: t_max", t, "edges", edges)
    for tau in (1, 4, 7, 10, 13, t):
        print("  tau", tau, "C,hit =", che_by_summation(pmf, p_inf, tau))
    # Spike-to-cliff for fgen(5,{2},5e-3) at M = 10000.
    probs = fgen(5, [2], 5e-3)
    t = tmax(probs, 10000)
    edges, pmf = per_integer_pmf(probs, t)
    lo = che_by_summation(pmf, 0.0, edges[2])
    hi = che_by_summation(pmf, 0.0, edges[3])
    print("spike_to_cliff fgen(5,{2}) M=1e4 bin 2:", lo[0], hi[0], "hit rise inside", hi[1] - lo[1])

    trace = [0, 1, 0, 2, 1, 0]
    print("lru (a,b,a,c,b,a):", [lru(trace, c) for c in (1, 2, 3)])
    trace = [0, 1, 0, 2, 0]
    print("lru vs fifo (a,b,a,c,a) size 2:", lru(trace, 2), fifo(trace, 2))

    print("parda (0,1,2^48):", struct.pack("<3Q", 0, 1, 1 << 48).hex())


def clock(trace, size):
    slots, bits, hand, hits = [], [], 0, 0
    for r in trace:
        if r in slots:
            hits += 1
            bits[slots.index(r)] = True
            continue
        if len(slots) < size:
            slots.append(r)
            bits.append(False)
            continue
        while bits[hand]:
            bits[hand] = False
            hand = (hand + 1) % size
        slots[hand], bits[hand] = r, False
        hand = (hand + 1) % size
    return Fraction(hits, len(trace))


def lfu(trace, size):
    freq, last, hits = {}, {}, 0
    for now, r in enumerate(trace, 1):
        if r in freq:
            hits += 1
            freq[r] += 1
        else:
            if len(freq) == size:
                victim = min(freq, key=lambda x: (freq[x], last[x]))
                del freq[victim], last[victim]
            freq[r] = 1
        last[r] = now
    return Fraction(hits, len(trace))


if __name__ == "__main__":
    trace = [2, 3, 2, 4, 2, 4, 2, 0, 3, 4, 2, 0]
    print("policy fixture", trace, "size 3:",
          {"lru": lru(trace, 3), "fifo": fifo(trace, 3), "clock": clock(trace, 3), "lfu": lfu(trace, 3)})
