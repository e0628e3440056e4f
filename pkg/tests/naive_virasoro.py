"""Independent Virasoro oracle: brute-force normal ordering, no caching tricks."""
from fractions import Fraction


def partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def apply_mode(m, word, c, h):
    """L_m on L_{-word[0]} L_{-word[1]} ... |h>, returned as {word: coeff}."""
    if not word:
        if m > 0:
            return {}
        if m == 0:
            return {(): h}
        return {(-m,): Fraction(1)}
    if m < 0 and -m >= word[0]:
        return {(-m,) + word: Fraction(1)}
    k, rest = word[0], word[1:]
    out = {}

    def add(state, scale):
        for w, v in state.items():
            out[w] = out.get(w, 0) + scale * v

    # L_m L_{-k} = L_{-k} L_m + (m + k) L_{m-k} + c/12 (m^3 - m) delta_{m,k}
    inner = apply_mode(m, rest, c, h)
    for w, v in inner.items():
        add(apply_mode(-k, w, c, h), v)
    if m + k:
        add(apply_mode(m - k, rest, c, h), m + k)
    if m == k:
        add({rest: Fraction(1)}, c * Fraction(m ** 3 - m, 12))
    return {w: v for w, v in out.items() if v}


def gram(level, c, h, basis=None):
    basis = list(partitions(level)) if basis is None else basis
    mat = []
    for lam in basis:
        row = []
        for mu in basis:
            state = {mu: Fraction(1)}
            for k in lam:  # adjoint of L_{-k} is L_k, applied left to right
                new = {}
                for w, v in state.items():
                    for w2, v2 in apply_mode(k, w, c, h).items():
                        new[w2] = new.get(w2, 0) + v * v2
                state = new
            row.append(state.get((), Fraction(0)))
        mat.append(row)
    return basis, mat


def gauss_solve(a, b):
    n = len(a)
    a = [list(r) + [x] for r, x in zip(a, b)]
    for k in range(n):
        p = next(i for i in range(k, n) if a[i][k])
        a[k], a[p] = a[p], a[k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n + 1):
                a[i][j] -= f * a[k][j]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        x[i] = (a[i][n] - sum(a[i][j] * x[j] for j in range(i + 1, n))) / a[i][i]
    return x


def block_coefficient(level, c, h):
    basis, mat = gram(level, c, h)
    e = [Fraction(0)] * len(basis)
    idx = basis.index((1,) * level)
    e[idx] = Fraction(1)
    return gauss_solve(mat, e)[idx]
